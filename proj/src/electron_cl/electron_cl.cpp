#include "chronon/electron_cl/electron_cl.hpp"

#include "chronon/numcore/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace chronon::electron_cl {

namespace {

constexpr double kNewtonTolerance = 1e-12;
constexpr double kOnShellTolerance = 1e-8;
constexpr int kMaxNewtonIterations = 50;

Error invalid(const std::string& what) {
    return Error("electron_cl", "InvalidParams", what, ErrorKind::Config);
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw invalid(std::string(name) + " must be positive");
}

// v -> v x B as a matrix.
Eigen::Matrix3d cross_right(const Vec3& B) {
    Eigen::Matrix3d m;
    m << 0.0, B.z(), -B.y(),
        -B.z(), 0.0, B.x(),
        B.y(), -B.x(), 0.0;
    return m;
}

double spatial_gamma(const Vec4& u, double c) { return u(0) / c; }

// Forming u.u cancels terms of size gamma^2 c^2, so rounding alone leaves a
// defect of order eps gamma^2; the bound allows that floor on top of 1e-8.
void check_on_shell(const Vec4& u, double c) {
    const double d = on_shell_defect(u, c);
    const double g = u(0) / c;
    if (!(d <= kOnShellTolerance + 16.0 * std::numeric_limits<double>::epsilon() * g * g)) {
        throw Error("electron_cl", "OnShellViolation",
                    "on-shell defect " + std::to_string(d * 1e8) + "e-8 exceeds 1e-8", ErrorKind::Numerical);
    }
}

// Candidate u = u_prev + delta on shell; the time component of delta is formed
// without cancellation.
Vec4 shifted(const Vec4& u_prev, const Vec3& d, double c) {
    const Vec3 s = u_prev.tail<3>() + d;
    const double u0 = std::sqrt(c * c + s.squaredNorm());
    Vec4 delta;
    delta << d.dot(u_prev.tail<3>() + s) / (u0 + u_prev(0)), d;
    return delta;
}

// -u_prev - u (u . u_prev) / c^2 - kappa F u with u . u_prev = -c^2 + u_prev . delta:
// delta - u (u_prev . delta) / c^2 - kappa F u. Residual rounding stays O(eps gamma |delta|).
Vec4 retarded_residual(const Vec4& delta, const Vec4& u_prev, const Mat4& kF, double c) {
    const Vec4 u = u_prev + delta;
    return delta - u * (minkowski_dot(u_prev, delta) / (c * c)) - kF * u;
}

Vec4 retarded_newton(const Vec4& u_prev, const Mat4& kF, double c, StepReport* report) {
    Vec3 d = Vec3::Zero();
    Vec4 delta = Vec4::Zero();
    Vec4 R = retarded_residual(delta, u_prev, kF, c);
    double r = R.norm();
    std::vector<double> history{r};
    int it = 0;
    // u_prev . delta cancels terms of size gamma^2 |delta|; the floor scales the same way.
    const double g2 = u_prev.squaredNorm() / (c * c);
    const double target = kNewtonTolerance * (c + g2 * r);
    // u . R = 0 identically, so the three spatial rows determine the root.
    while (r > target) {
        if (it == kMaxNewtonIterations || !std::isfinite(r)) {
            std::string trail;
            for (double h : history) {
                char buf[32];
                std::snprintf(buf, sizeof buf, " %.3e", h);
                trail += buf;
            }
            throw Error("electron_cl", "NewtonDivergence", "residual history:" + trail,
                        ErrorKind::Numerical);
        }
        const Vec4 u = u_prev + delta;
        const double sdot = -c * c + minkowski_dot(u_prev, delta);
        Eigen::Matrix<double, 4, 3> J;
        J.row(0) = (u.tail<3>() / u(0)).transpose();
        J.bottomRows<3>().setIdentity();
        const Eigen::RowVector3d ds =
            (-u_prev(0) * u.tail<3>() / u(0) + u_prev.tail<3>()).transpose();
        const Eigen::Matrix3d jac = -Eigen::Matrix3d::Identity() * (sdot / (c * c)) -
                                    u.tail<3>() * ds / (c * c) - kF.bottomRows<3>() * J;
        const Vec3 step = jac.partialPivLu().solve(-R.tail<3>());
        double lambda = 1.0;
        for (int ls = 0; ls < 30; ++ls) {
            const Vec4 trial = shifted(u_prev, d + lambda * step, c);
            const Vec4 Rt = retarded_residual(trial, u_prev, kF, c);
            if (Rt.norm() < r || ls == 29) {
                d += lambda * step;
                delta = trial;
                R = Rt;
                break;
            }
            lambda *= 0.5;
        }
        r = R.norm();
        history.push_back(r);
        ++it;
    }
    if (report != nullptr) {
        report->iterations = it;
        report->residual = r;
        report->residual_history = std::move(history);
    }
    return u_prev + delta;
}

}  // namespace

ElectronConstants ElectronConstants::electron() {
    // CGS: statcoulomb, gram, cm/s.
    return {4.803204712570263e-10, 9.1093837015e-28, 2.99792458e10, 1.0};
}

ElectronConstants ElectronConstants::natural() { return {1.0, 1.0, 1.0, 1.0}; }

double chronon_constant(double e, double m0, double c, double k) {
    require_positive(e, "e");
    require_positive(m0, "m0");
    require_positive(c, "c");
    return 2.0 * k * e * e / (3.0 * m0 * c * c * c);
}

double minkowski_dot(const Vec4& a, const Vec4& b) {
    return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
}

double on_shell_defect(const Vec4& u, double c) {
    return std::abs(minkowski_dot(u, u) + c * c) / (c * c);
}

Vec4 four_velocity(const Vec3& v, double c) {
    const double b2 = v.squaredNorm() / (c * c);
    if (!(b2 < 1.0)) throw invalid("speed must be below c");
    const double g = 1.0 / std::sqrt(1.0 - b2);
    Vec4 u;
    u << g * c, g * v;
    return u;
}

FieldConfig FieldConfig::uniform_E(const Vec3& E) {
    FieldConfig f;
    f.kind = Kind::UniformE;
    f.E = E;
    return f;
}

FieldConfig FieldConfig::uniform_B(const Vec3& B) {
    FieldConfig f;
    f.kind = Kind::UniformB;
    f.B = B;
    return f;
}

FieldConfig FieldConfig::pulse(const Vec3& E0, double t_on) {
    FieldConfig f;
    f.kind = Kind::Pulse;
    f.E = E0;
    f.t_on = t_on;
    return f;
}

bool FieldConfig::active_at(double t) const {
    switch (kind) {
        case Kind::None: return false;
        case Kind::Pulse: return t >= t_on;
        default: return true;
    }
}

Vec3 FieldConfig::E_at(double t) const { return active_at(t) ? E : Vec3::Zero(); }
Vec3 FieldConfig::B_at(double t) const { return active_at(t) ? B : Vec3::Zero(); }

Mat4 FieldConfig::tensor(double t) const {
    const Vec3 e = E_at(t);
    const Vec3 b = B_at(t);
    Mat4 F;
    F << 0.0, e.x(), e.y(), e.z(),
        e.x(), 0.0, b.z(), -b.y(),
        e.y(), -b.z(), 0.0, b.x(),
        e.z(), b.y(), -b.x(), 0.0;
    return F;
}

Mat4 lower_first_index(const Mat4& mixed) {
    Mat4 out = mixed;
    out.row(0) *= -1.0;
    return out;
}

Vec4 electron_step(const Vec4& u_prev, const Mat4& F, Scheme scheme, double tau0,
                   const ElectronConstants& k, const Vec4* u_prev2, StepReport* report) {
    require_positive(tau0, "tau0");
    const double c = k.c;
    check_on_shell(u_prev, c);
    if (report != nullptr) *report = StepReport{};
    if (F.isZero(0.0) && scheme != Scheme::Symmetric) return u_prev;
    const Mat4 kF = (tau0 * k.e / (k.m0 * c)) * F;
    Vec4 out;
    switch (scheme) {
        case Scheme::Retarded:
            out = retarded_newton(u_prev, kF, c, report);
            break;
        case Scheme::Advanced: {
            const Vec4 w = kF * u_prev;
            out = std::sqrt(1.0 + minkowski_dot(w, w) / (c * c)) * u_prev + w;
            break;
        }
        case Scheme::Symmetric: {
            if (u_prev2 == nullptr) {
                throw Error("electron_cl", "MissingSecondSlice",
                            "symmetric step needs u(tau - tau0)", ErrorKind::Config);
            }
            if (F.isZero(0.0) && *u_prev2 == u_prev) return u_prev;
            const Vec4 q = *u_prev2 + 2.0 * (kF * u_prev);
            const double b = minkowski_dot(q, u_prev);
            const double d = minkowski_dot(q, q) + c * c;
            // Larger root of c^2 l^2 - 2 b l - d = 0, written without cancellation (b < 0).
            const double lambda = d / (std::sqrt(b * b + c * c * d) - b);
            out = q + lambda * u_prev;
            break;
        }
    }
    check_on_shell(out, c);
    // The closed forms are on shell exactly; re-deriving u^0 stops rounding drift
    // from compounding over long runs.
    out(0) = std::sqrt(c * c + out.tail<3>().squaredNorm());
    return out;
}

Vec3 electron_step_nonrel(const Vec3& v_prev, const Vec3& E, const Vec3& B, Scheme scheme,
                          double tau0, const ElectronConstants& k, const Vec3* v_prev2) {
    require_positive(tau0, "tau0");
    const double qm = k.e / k.m0;
    switch (scheme) {
        case Scheme::Retarded: {
            const Eigen::Matrix3d A = Eigen::Matrix3d::Identity() - tau0 * qm / k.c * cross_right(B);
            return A.partialPivLu().solve(v_prev + tau0 * qm * E);
        }
        case Scheme::Advanced:
            return v_prev + tau0 * qm * (E + v_prev.cross(B) / k.c);
        case Scheme::Symmetric:
            if (v_prev2 == nullptr) {
                throw Error("electron_cl", "MissingSecondSlice",
                            "symmetric step needs v(t - tau0)", ErrorKind::Config);
            }
            return *v_prev2 + 2.0 * tau0 * qm * (E + v_prev.cross(B) / k.c);
    }
    return v_prev;
}

Vec4 symmetric_seed(const Vec4& u0, const Mat4& F, double tau0, const ElectronConstants& k) {
    require_positive(tau0, "tau0");
    if (F.isZero(0.0)) return u0;
    const Mat4 A = (tau0 * k.e / (k.m0 * k.c)) * F;
    const Mat4 root = (Mat4::Identity() + A * A).sqrt();
    if (!root.allFinite()) {
        throw Error("electron_cl", "SpectralRadiusExceeded",
                    "1 + (tau0 F)^2 has no real square root", ErrorKind::Numerical);
    }
    return (A + root) * u0;
}

Vec3 symmetric_seed_nonrel(const Vec3& v0, const Vec3& E, const Vec3& B, double tau0,
                           const ElectronConstants& k) {
    require_positive(tau0, "tau0");
    const double qm = k.e / k.m0;
    const Vec3 a = qm * E;
    const double b2 = B.squaredNorm();
    if (b2 == 0.0) return v0 + tau0 * a;
    const Vec3 bhat = B / std::sqrt(b2);
    const Vec3 a_par = a.dot(bhat) * bhat;
    const Vec3 v_drift = k.c * E.cross(B) / b2;
    const double wt = tau0 * qm * std::sqrt(b2) / k.c;
    if (wt > 1.0) {
        throw Error("electron_cl", "SpectralRadiusExceeded",
                    "omega tau0 = " + std::to_string(wt) + " exceeds 1", ErrorKind::Numerical);
    }
    const Eigen::Matrix3d A = qm / k.c * cross_right(B);
    const Eigen::Matrix3d P = Eigen::Matrix3d::Identity() - bhat * bhat.transpose();
    const Eigen::Matrix3d M = tau0 * A + Eigen::Matrix3d::Identity() +
                              (std::sqrt(1.0 - wt * wt) - 1.0) * P;
    return v_drift + M * (v0 - v_drift) + tau0 * a_par;
}

Vec4 transmit(const Vec4& x_prev, const Vec4& u_prev, const Vec4& u_next, double tau0,
              TransmissionLaw law) {
    switch (law) {
        case TransmissionLaw::Difference: return x_prev + 0.5 * tau0 * (u_next - u_prev);
        case TransmissionLaw::Averaged: return x_prev + 0.5 * tau0 * (u_next + u_prev);
    }
    return x_prev;
}

namespace {

FieldConfig field_for(const std::string& name, const ScenarioParams& p) {
    if (name == "free") return FieldConfig::none();
    if (name == "pulse") return FieldConfig::pulse(p.E, p.t_on);
    if (name == "uniform-B") return FieldConfig::uniform_B(p.B);
    if (name == "hyperbolic") return FieldConfig::uniform_E(p.E);
    FieldConfig f;
    f.kind = FieldConfig::Kind::UniformEB;
    f.E = p.E;
    f.B = p.B;
    return f;
}

Worldline integrate(const FieldConfig& field, const ScenarioParams& p, ScenarioResult& res) {
    const ElectronConstants& k = p.constants;
    const double c = k.c;
    const double tau0 = p.tau0;
    Worldline wl;
    wl.nodes.reserve(p.steps + 1);
    Vec4 u0;
    if (p.relativistic) {
        u0 = four_velocity(p.v0, c);
    } else {
        u0 << c, p.v0;
    }
    wl.nodes.push_back({0, 0.0, Vec4::Zero(), u0});
    std::vector<Vec3> vs{p.v0};

    for (std::size_t n = 1; n <= p.steps; ++n) {
        const Node& prev = wl.nodes.back();
        const double t_prev = prev.x(0) / c;
        Vec4 u_next;
        if (p.relativistic) {
            // Field sampled at the predicted coordinate time of the new node.
            const double t_field = t_prev + tau0 * spatial_gamma(prev.u, c);
            const Mat4 F = field.tensor(p.scheme == Scheme::Retarded ? t_field : t_prev);
            StepReport rep;
            if (p.scheme == Scheme::Symmetric && n == 1) {
                u_next = symmetric_seed(prev.u, F, tau0, k);
            } else if (p.scheme == Scheme::Symmetric) {
                u_next = electron_step(prev.u, F, p.scheme, tau0, k, &wl.nodes[n - 2].u, &rep);
            } else {
                u_next = electron_step(prev.u, F, p.scheme, tau0, k, nullptr, &rep);
            }
            res.max_newton_iterations = std::max(res.max_newton_iterations, rep.iterations);
        } else {
            const double t_field = p.scheme == Scheme::Retarded ? t_prev + tau0 : t_prev;
            const Vec3 E = field.E_at(t_field);
            const Vec3 B = field.B_at(t_field);
            Vec3 v;
            if (p.scheme == Scheme::Symmetric && n == 1) {
                v = symmetric_seed_nonrel(vs.back(), E, B, tau0, k);
            } else {
                v = electron_step_nonrel(vs.back(), E, B, p.scheme, tau0, k,
                                         n >= 2 ? &vs[n - 2] : nullptr);
            }
            vs.push_back(v);
            // Non-relativistic nodes carry (c, v) so that x^0 advances as c t.
            u_next << c, v;
        }
        const Vec4 x_next = transmit(prev.x, prev.u, u_next, tau0, p.law);
        wl.nodes.push_back({n, tau0 * static_cast<double>(n), x_next, u_next});
        if (p.relativistic) {
            res.max_on_shell_defect = std::max(res.max_on_shell_defect, on_shell_defect(u_next, c));
        }
    }
    return wl;
}

// Mean per-step rotation angle and speed factor of the velocity component
// perpendicular to B, over steps where it stays above 1e-6 of its start value
// (a damped orbit decays into rounding noise).
void gyration(const Worldline& wl, const Vec3& B, const ScenarioParams& p, ScenarioResult& res) {
    const Vec3 bhat = B.normalized();
    double angle = 0.0;
    double log_factor = 0.0;
    std::size_t count = 0;
    auto perp = [&](std::size_t n) {
        Vec3 v = wl.nodes[n].u.tail<3>();
        return Vec3(v - v.dot(bhat) * bhat);
    };
    const double cutoff = 1e-6 * perp(0).norm();
    for (std::size_t n = 1; n < wl.nodes.size(); ++n) {
        const Vec3 a = perp(n - 1);
        const Vec3 b = perp(n);
        if (!(a.norm() > cutoff) || !(b.norm() > cutoff)) break;
        angle += std::atan2(a.cross(b).dot(-bhat), a.dot(b));
        log_factor += std::log(b.norm() / a.norm());
        ++count;
    }
    if (count == 0) return;
    res.rotation_per_step = angle / static_cast<double>(count);
    res.speed_factor_per_step = std::exp(log_factor / static_cast<double>(count));
    res.cyclotron_frequency = res.rotation_per_step / p.tau0;
}

}  // namespace

ScenarioResult run_scenario(const std::string& name, const ScenarioParams& p) {
    static const std::vector<std::string> known{"free", "pulse", "uniform-B", "hyperbolic",
                                                "internal"};
    if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw Error("electron_cl", "UnknownScenario", "unknown scenario '" + name + "'",
                    ErrorKind::Config);
    }
    require_positive(p.tau0, "tau0");
    require_positive(p.constants.c, "c");
    require_positive(p.constants.m0, "m0");
    if (p.steps == 0) throw invalid("steps must be >= 1");

    ScenarioResult res;
    res.name = name;
    const ElectronConstants& k = p.constants;
    const double c = k.c;

    if (name == "internal") {
        // Rotational kinetic energy (gamma - 1) m0 c^2 equal to m0 c^2.
        res.internal_gamma = 1.0 + (k.m0 * c * c) / (k.m0 * c * c);
        res.beta0_sq = 1.0 - 1.0 / (res.internal_gamma * res.internal_gamma);
        res.anomalous_moment = k.e * k.e * k.e / (4.0 * std::numbers::pi * k.m0 * c * c);
        // Sampled circular orbit: v = beta0 c (-sin, -cos, 0)(2 pi s / tau0), 64 nodes per turn.
        const double beta0 = std::sqrt(res.beta0_sq);
        const double w = 2.0 * std::numbers::pi / p.tau0;
        const double ds = p.tau0 / 64.0;
        const double r = beta0 * c / w;
        for (std::size_t n = 0; n <= p.steps; ++n) {
            const double s = ds * static_cast<double>(n);
            const Vec3 v(-beta0 * c * std::sin(w * s), -beta0 * c * std::cos(w * s), 0.0);
            const Vec4 u = four_velocity(v, c);
            Vec4 x;
            x << c * s, r * (std::cos(w * s) - 1.0), -r * std::sin(w * s), 0.0;
            res.worldline.nodes.push_back({n, s, x, u});
            res.max_on_shell_defect = std::max(res.max_on_shell_defect, on_shell_defect(u, c));
        }
        return res;
    }

    const FieldConfig field = field_for(name, p);
    res.worldline = integrate(field, p, res);
    const auto& nodes = res.worldline.nodes;

    if (name == "pulse") {
        const Vec4& u0 = nodes.front().u;
        for (const Node& nd : nodes) {
            if (nd.x(0) / c >= p.t_on) break;
            ++res.pre_pulse_nodes;
            res.max_pre_pulse_deviation =
                std::max(res.max_pre_pulse_deviation, (nd.u - u0).cwiseAbs().maxCoeff());
        }
    } else if (name == "uniform-B") {
        if (p.B.norm() == 0.0) throw invalid("uniform-B needs a nonzero field");
        gyration(res.worldline, p.B, p, res);
    } else if (name == "hyperbolic") {
        const double En = p.E.norm();
        if (En == 0.0) throw invalid("hyperbolic needs a nonzero field");
        if (p.v0.norm() != 0.0) throw invalid("hyperbolic motion starts from rest");
        const Vec3 ehat = p.E / En;
        const double g = k.e * En / k.m0;
        for (const Node& nd : nodes) {
            const double exact = c * std::sinh(g * nd.tau / c);
            const double along = nd.u.tail<3>().dot(ehat);
            res.max_hyperbola_deviation =
                std::max(res.max_hyperbola_deviation, std::abs(along - exact) / c);
        }
    }
    return res;
}

}  // namespace chronon::electron_cl
