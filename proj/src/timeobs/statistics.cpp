#include "chronon/timeobs/statistics.hpp"

#include "chronon/numcore/error.hpp"
#include "chronon/numcore/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace chronon::timeobs {

namespace {

Error zero_flux(double x, FluxSign sign) {
    const char* s = sign == FluxSign::Positive ? "positive"
                    : sign == FluxSign::Negative ? "negative"
                                                 : "net";
    return Error("timeobs", "ZeroFlux",
                 std::string("no ") + s + " flux crosses x = " + std::to_string(x));
}

double signed_part(double j, FluxSign sign) {
    switch (sign) {
        case FluxSign::Positive: return j > 0.0 ? j : 0.0;
        case FluxSign::Negative: return j < 0.0 ? j : 0.0;
        case FluxSign::Both: break;
    }
    return j;
}

double weighted_sum(const std::vector<double>& w, const std::vector<double>& f) {
    std::vector<double> terms(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) terms[i] = w[i] * f[i];
    return numcore::pairwise_sum(std::span<const double>(terms));
}

double fourth_order_derivative(double fm2, double fm1, double fp1, double fp2, double h) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

Complex fourth_order_derivative(Complex fm2, Complex fm1, Complex fp1, Complex fp2, double h) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
}

// Wavenumber scale bounding the x-oscillation (or decay) rate of phi over the packet support.
double wavenumber_scale(const SpectralPacket& p, const PiecewiseConstantPotential& pot) {
    double k = p.wavenumber(p.e_max);
    for (const Segment& s : pot.segments()) {
        for (double E : {p.e_min, p.e_max}) {
            const double k2 = wavenumber_squared(E, s.V, p.dispersion, pot.mass(), p.constants);
            k = std::max(k, std::sqrt(std::abs(k2)));
        }
    }
    return k;
}

}  // namespace

PassageAnalysis::PassageAnalysis(SpectralPacket packet, PiecewiseConstantPotential pot,
                                 std::vector<double> sensors, StatisticsOptions opts)
    : sensors_(std::move(sensors)), opts_(opts) {
    if (sensors_.empty()) {
        throw Error("timeobs", "InvalidArgument", "at least one sensor is required",
                    ErrorKind::Config);
    }
    for (double x : sensors_) {
        if (!std::isfinite(x)) {
            throw Error("timeobs", "InvalidArgument", "sensor positions must be finite",
                        ErrorKind::Config);
        }
        x_reach_ = std::max(x_reach_, std::abs(x));
    }

    const double v = packet.mean_group_velocity();
    sigma_t_ = packet.sigma_x0() / v;

    // Arrival estimates: direct passage and one reflection off the front of the landscape.
    std::vector<double> arrivals;
    for (double x : sensors_) {
        arrivals.push_back((x - packet.x0) / v);
        if (!pot.segments().empty()) {
            const double front = pot.span_lo();
            arrivals.push_back((std::abs(front - packet.x0) + std::abs(front - x)) / v);
        }
    }
    double t_lo = std::numeric_limits<double>::infinity();
    double t_hi = -t_lo;
    for (double t : arrivals) {
        const double spread = opts_.initial_sigmas * packet.sigma_x(std::abs(t)) / v;
        t_lo = std::min(t_lo, t - spread);
        t_hi = std::max(t_hi, t + spread);
    }
    // Passage through the landscape itself.
    const double crossing = (pot.span_hi() - pot.span_lo()) / v;
    t_hi += crossing;

    field_ = std::make_unique<PacketField>(std::move(packet), std::move(pot),
                                           1.5 * std::max(std::abs(t_lo), std::abs(t_hi)),
                                           x_reach_, opts_.field);

    for (int attempt = 0;; ++attempt) {
        const double needed = std::max(std::abs(t_lo), std::abs(t_hi));
        if (needed > field_->t_abs_max()) build_field(1.5 * needed);
        window_ = TimeWindow{t_lo, t_hi};
        const double panel = opts_.panel_sigmas * sigma_t_;
        const auto panels = static_cast<std::size_t>(std::ceil((t_hi - t_lo) / panel));
        t_rule_ = numcore::composite_gauss_legendre(std::max<std::size_t>(panels, 1),
                                                    opts_.nodes_per_panel, t_lo, t_hi);

        bool lower_ok = true;
        bool upper_ok = true;
        for (double x : sensors_) {
            lower_ok = lower_ok && edge_defect(x, true) <= opts_.edge_cutoff;
            upper_ok = upper_ok && edge_defect(x, false) <= opts_.edge_cutoff;
        }
        if (lower_ok && upper_ok) break;
        if (attempt >= opts_.max_widenings) {
            throw Error("timeobs", "UnresolvedWindow",
                        "flux at the time-window edge stays above the cutoff after " +
                            std::to_string(attempt) + " widenings");
        }
        const double len = t_hi - t_lo;
        if (!lower_ok) t_lo -= 0.5 * len;
        if (!upper_ok) t_hi += 0.5 * len;
    }
}

void PassageAnalysis::build_field(double t_abs_max) {
    field_ = std::make_unique<PacketField>(field_->packet(), field_->potential(), t_abs_max,
                                           x_reach_, opts_.field);
}

double PassageAnalysis::edge_defect(double x, bool lower) const {
    std::vector<double> ts = t_rule_.nodes;
    ts.push_back(lower ? window_.t_lo : window_.t_hi);
    const SensorSeries s = field_->sample(x, ts);
    const double v = packet().mean_group_velocity();
    double peak = 0.0;
    for (std::size_t m = 0; m + 1 < ts.size(); ++m) {
        peak = std::max({peak, std::abs(field_->current(s, m)), field_->rho(s, m) * v});
    }
    if (peak == 0.0) return 0.0;
    const std::size_t e = ts.size() - 1;
    return std::max(std::abs(field_->current(s, e)), field_->rho(s, e) * v) / peak;
}

FluxSeries PassageAnalysis::series(double x) const {
    const SensorSeries s = field_->sample(x, t_rule_.nodes);
    FluxSeries out;
    out.x = x;
    out.t = t_rule_.nodes;
    out.w = t_rule_.weights;
    out.rho.resize(out.t.size());
    out.j.resize(out.t.size());
    for (std::size_t m = 0; m < out.t.size(); ++m) {
        out.rho[m] = field_->rho(s, m);
        out.j[m] = field_->current(s, m);
    }
    return out;
}

double PassageAnalysis::passage_weight(double x, FluxSign sign) const {
    const FluxSeries s = series(x);
    std::vector<double> f(s.j.size());
    for (std::size_t m = 0; m < f.size(); ++m) f[m] = signed_part(s.j[m], sign);
    return weighted_sum(s.w, f);
}

double PassageAnalysis::passage_moment(double x, FluxSign sign, int n) const {
    if (n < 1) {
        throw Error("timeobs", "InvalidArgument", "moment order must be >= 1", ErrorKind::Config);
    }
    const FluxSeries s = series(x);
    std::vector<double> js(s.j.size());
    std::vector<double> tn(s.j.size());
    std::vector<double> aj(s.j.size());
    for (std::size_t m = 0; m < js.size(); ++m) {
        js[m] = signed_part(s.j[m], sign);
        tn[m] = std::pow(s.t[m], n) * js[m];
        aj[m] = std::abs(s.j[m]);
    }
    const double denom = weighted_sum(s.w, js);
    const double total = weighted_sum(s.w, aj);
    if (!(total > 0.0) || std::abs(denom) <= opts_.zero_flux_fraction * total) {
        throw zero_flux(x, sign);
    }
    return weighted_sum(s.w, tn) / denom;
}

TraversalReflection PassageAnalysis::traversal_and_reflection(double x_i, double x_f,
                                                              std::optional<double> x_r) const {
    if (!(x_i < x_f)) {
        throw Error("timeobs", "InvalidArgument", "traversal requires x_i < x_f",
                    ErrorKind::Config);
    }
    const double t_in = mean_passage_time(x_i, FluxSign::Positive);
    TraversalReflection out{mean_passage_time(x_f, FluxSign::Positive) - t_in, std::nullopt};
    const double xr = x_r.value_or(x_i);
    if (xr > x_i) {
        throw Error("timeobs", "InvalidArgument", "reflection sensor must satisfy x_r <= x_i",
                    ErrorKind::Config);
    }
    try {
        out.tau_R = mean_passage_time(xr, FluxSign::Negative) - t_in;
    } catch (const Error& e) {
        if (e.name() != "ZeroFlux") throw;
    }
    return out;
}

double PassageAnalysis::incident_flux(double x_i) const {
    const SensorSeries s = field_->sample_forward(x_i, t_rule_.nodes);
    std::vector<double> j(t_rule_.size());
    for (std::size_t m = 0; m < j.size(); ++m) j[m] = field_->current(s, m);
    return weighted_sum(t_rule_.weights, j);
}

double PassageAnalysis::dwell_time(double x_i, double x_f, DwellMethod method) const {
    if (x_f < x_i) {
        throw Error("timeobs", "InvalidArgument", "dwell interval requires x_i <= x_f",
                    ErrorKind::Config);
    }
    if (x_f == x_i) return 0.0;
    const double j_in = incident_flux(x_i);
    if (!(std::abs(j_in) > 0.0)) throw zero_flux(x_i, FluxSign::Positive);

    if (method == DwellMethod::FluxDifference) {
        const FluxSeries si = series(x_i);
        const FluxSeries sf = series(x_f);
        std::vector<double> diff(si.t.size());
        for (std::size_t m = 0; m < diff.size(); ++m) diff[m] = si.t[m] * (sf.j[m] - si.j[m]);
        return weighted_sum(si.w, diff) / j_in;
    }

    // Density: x-rule split at interior interfaces.
    const SpectralPacket& p = packet();
    std::vector<double> breaks{x_i};
    for (double xb : potential().interfaces()) {
        if (xb > x_i && xb < x_f) breaks.push_back(xb);
    }
    breaks.push_back(x_f);
    const double hx = std::min(p.sigma_x0(), 4.0 / wavenumber_scale(p, potential()));
    const auto x_rule = numcore::composite_gauss_legendre(breaks, hx, opts_.nodes_per_panel);

    // Rows in chunks keep the dense products bounded in memory.
    constexpr std::size_t kChunk = 256;
    std::vector<double> row_integrals(x_rule.size());
    for (std::size_t lo = 0; lo < x_rule.size(); lo += kChunk) {
        const std::size_t hi = std::min(x_rule.size(), lo + kChunk);
        const std::span<const double> xs(x_rule.nodes.data() + lo, hi - lo);
        const Eigen::MatrixXd rho = field_->density_grid(xs, t_rule_.nodes);
        for (std::size_t r = lo; r < hi; ++r) {
            std::vector<double> row(t_rule_.size());
            for (std::size_t m = 0; m < row.size(); ++m) {
                row[m] = rho(static_cast<Eigen::Index>(r - lo), static_cast<Eigen::Index>(m));
            }
            row_integrals[r] = x_rule.weights[r] * weighted_sum(t_rule_.weights, row);
        }
    }
    return numcore::pairwise_sum(std::span<const double>(row_integrals)) / j_in;
}

UncertaintyReport PassageAnalysis::uncertainty(double x) const {
    const FluxSeries s = series(x);
    const double norm = weighted_sum(s.w, s.j);
    if (!(std::abs(norm) > 0.0)) throw zero_flux(x, FluxSign::Both);
    std::vector<double> t1(s.t.size());
    std::vector<double> t2(s.t.size());
    for (std::size_t m = 0; m < t1.size(); ++m) t1[m] = s.t[m] * s.j[m];
    const double mean = weighted_sum(s.w, t1) / norm;
    for (std::size_t m = 0; m < t2.size(); ++m) t2[m] = (s.t[m] - mean) * (s.t[m] - mean) * s.j[m];
    const double var_t = weighted_sum(s.w, t2) / norm;

    // Energy density of the flux through x: |g|^2 times the stationary current, which is
    // the same at every x.
    const SpectralPacket& p = packet();
    const auto rule = numcore::composite_gauss_legendre(64, 16, p.e_min, p.e_max);
    std::vector<double> wE(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double E = rule.nodes[i];
        const ScatteringState st = scattering_state(potential(), E, p.dispersion, p.constants);
        wE[i] = rule.weights[i] * std::norm(p.g(E)) * p.plane_wave_flux(E) * st.transmission();
    }
    const double w0 = numcore::pairwise_sum(std::span<const double>(wE));
    std::vector<double> e1(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) e1[i] = rule.nodes[i] * wE[i];
    const double e_mean = numcore::pairwise_sum(std::span<const double>(e1)) / w0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        e1[i] = (rule.nodes[i] - e_mean) * (rule.nodes[i] - e_mean) * wE[i];
    }
    const double var_E = numcore::pairwise_sum(std::span<const double>(e1)) / w0;
    if (var_t < 0.0 || var_E < 0.0) {
        throw Error("timeobs", "NegativeVariance",
                    "flux measure at x = " + std::to_string(x) + " is not positive");
    }
    const double dE = std::sqrt(var_E);
    const double dt = std::sqrt(var_t);
    return UncertaintyReport{dE, dt, dE * dt};
}

double PassageAnalysis::continuity_residual(std::span<const double> xs,
                                            std::span<const double> ts) const {
    if (xs.size() != ts.size()) {
        throw Error("timeobs", "InvalidArgument", "xs and ts must have equal length",
                    ErrorKind::Config);
    }
    const SpectralPacket& p = packet();
    const double v = p.mean_group_velocity();
    const double sx = p.sigma_x0();
    const double ht = 1e-3 * sigma_t_;
    const double hx = 1e-3 * sx;
    const double scale = v / (std::sqrt(2.0 * std::numbers::pi) * sx * sx);

    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        const double t = ts[i];
        const double tt[4] = {t - 2 * ht, t - ht, t + ht, t + ht * 2};
        const SensorSeries s = field_->sample(x, tt);
        const double drho = fourth_order_derivative(field_->rho(s, 0), field_->rho(s, 1),
                                                    field_->rho(s, 2), field_->rho(s, 3), ht);
        const double t1[1] = {t};
        double jx[4];
        const double offs[4] = {-2.0, -1.0, 1.0, 2.0};
        for (int k = 0; k < 4; ++k) jx[k] = field_->current(field_->sample(x + offs[k] * hx, t1), 0);
        const double dj = fourth_order_derivative(jx[0], jx[1], jx[2], jx[3], hx);
        worst = std::max(worst, std::abs(drho + dj) / scale);
    }
    return worst;
}

double mean_passage_time(const SpectralPacket& packet, const PiecewiseConstantPotential& pot,
                         double x, FluxSign sign, int n) {
    return PassageAnalysis(packet, pot, {x}).passage_moment(x, sign, n);
}

TraversalReflection traversal_and_reflection_times(const SpectralPacket& packet,
                                                   const PiecewiseConstantPotential& pot,
                                                   double x_i, double x_f,
                                                   std::optional<double> x_r) {
    std::vector<double> sensors{x_i, x_f};
    if (x_r) sensors.push_back(*x_r);
    return PassageAnalysis(packet, pot, sensors).traversal_and_reflection(x_i, x_f, x_r);
}

double dwell_time(const SpectralPacket& packet, const PiecewiseConstantPotential& pot, double x_i,
                  double x_f, DwellMethod method) {
    if (x_i == x_f) return 0.0;
    return PassageAnalysis(packet, pot, {x_i, x_f}).dwell_time(x_i, x_f, method);
}

double mean_passage_time_energy_form(const SpectralPacket& p, double x) {
    const double hbar = p.constants.hbar;
    const double width = p.e_max - p.e_min;
    const double h = 1e-4 * width;
    const double lo = p.e_min + 2.0 * h;
    const double hi = p.e_max - 2.0 * h;

    auto G = [&](double E) { return p.g(E) * std::exp(Complex(0.0, p.wavenumber(E) * x)); };
    // A carries the density, B the current partner; Re(A* B) is the flux density in E.
    auto A = [&](double E) {
        if (p.dispersion == Dispersion::Massive) return G(E);
        return std::sqrt(p.constants.c) * p.wavenumber(E) * G(E);
    };
    auto B = [&](double E) {
        if (p.dispersion == Dispersion::Massive) return p.group_velocity(E) * G(E);
        return std::sqrt(p.constants.c) * p.wavenumber(E) * G(E);
    };

    const double v_ref = p.group_velocity(std::max(p.e_min, p.energy(0.25 * p.k_mean)));
    const double R = (std::abs(x) + std::abs(p.x0)) / v_ref + 1.0 / (p.sigma_k * v_ref);
    const double panel = std::min(width / 4.0, 4.0 * hbar / R);
    const auto rule = numcore::composite_gauss_legendre(
        static_cast<std::size_t>(std::ceil((hi - lo) / panel)), 16, lo, hi);

    const double num = numcore::integrate_real(
        [&](double E) {
            const Complex dB = fourth_order_derivative(B(E - 2 * h), B(E - h), B(E + h),
                                                       B(E + 2 * h), h);
            return std::real(std::conj(A(E)) * Complex(0.0, -hbar) * dB);
        },
        rule);
    const double den =
        numcore::integrate_real([&](double E) { return std::real(std::conj(A(E)) * B(E)); }, rule);
    return num / den;
}

double energy_time_commutator_defect(const std::function<Complex(double)>& f,
                                     std::span<const double> ts, double h, double hbar) {
    const Complex ih(0.0, hbar);
    double worst = 0.0;
    double scale = 0.0;
    for (double t : ts) {
        auto tf = [&](double s) { return s * f(s); };
        const Complex d_tf =
            fourth_order_derivative(tf(t - 2 * h), tf(t - h), tf(t + h), tf(t + 2 * h), h);
        const Complex d_f =
            fourth_order_derivative(f(t - 2 * h), f(t - h), f(t + h), f(t + 2 * h), h);
        const Complex ft = f(t);
        worst = std::max(worst, std::abs(ih * d_tf - t * ih * d_f - ih * ft));
        scale = std::max(scale, std::abs(hbar * ft));
    }
    return scale > 0.0 ? worst / scale : worst;
}

}  // namespace chronon::timeobs
