#include "chronon/kg_position/kg_position.hpp"

#include "chronon/kernels/kernels.hpp"
#include "chronon/numcore/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chronon::kg_position {

namespace {

const Complex kI(0.0, 1.0);

Error invalid(const std::string& what) {
    return Error("kg_position", "InvalidParams", what, ErrorKind::Config);
}

// Per-node quantities shared by every observable.
struct NodeTable {
    std::vector<Vec3> p;
    std::vector<double> p0;
    std::vector<double> w;  // h^3 / p0
};

NodeTable nodes(const MomentumPacket3D& phi) {
    const MomentumGrid& g = phi.grid;
    const double h3 = std::pow(g.spacing(), 3);
    NodeTable t;
    t.p.resize(g.size());
    t.p0.resize(g.size());
    t.w.resize(g.size());
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = 0; j < g.n; ++j) {
            for (std::size_t k = 0; k < g.n; ++k) {
                const std::size_t q = g.index(i, j, k);
                t.p[q] = Vec3(g.coord(i), g.coord(j), g.coord(k));
                t.p0[q] = std::sqrt(t.p[q].squaredNorm() + phi.mass * phi.mass);
                t.w[q] = h3 / t.p0[q];
            }
        }
    }
    return t;
}

template <typename T, typename F>
T reduce(std::size_t n, F&& term) {
    return kernels::reduce_omp<T>(n, std::forward<F>(term));
}

void require_same_grid(const MomentumPacket3D& a, const MomentumPacket3D& b) {
    if (!(a.grid == b.grid) || a.mass != b.mass || a.phi.size() != b.phi.size()) {
        throw Error("kg_position", "GridMismatch", "packets differ in grid or mass",
                    ErrorKind::Config);
    }
}

void require_shape(const MomentumPacket3D& phi) {
    if (phi.grid.n < 8 || phi.grid.n % 2 != 0) throw invalid("grid needs an even n >= 8");
    if (!(phi.grid.half_width > 0.0)) throw invalid("grid half-width must be positive");
    if (!(phi.mass > 0.0)) throw invalid("mass must be positive");
    if (phi.phi.size() != phi.grid.size()) throw invalid("amplitude count does not match grid");
}

std::vector<double> spectral_for(const MomentumGrid& g) {
    return spectral_derivative(g.n, 2.0 * g.half_width);
}

// Components of x_h phi along each axis with derivative matrix d.
std::array<std::vector<Complex>, 3> apply_x_h(const MomentumPacket3D& phi, const NodeTable& t,
                                              const std::vector<double>& d) {
    std::array<std::vector<Complex>, 3> out;
    for (int a = 0; a < 3; ++a) {
        out[a] = derivative(phi, d, a);
        for (std::size_t q = 0; q < phi.phi.size(); ++q) {
            out[a][q] = kI * out[a][q] -
                        0.5 * kI * (t.p[q](a) / (t.p0[q] * t.p0[q])) * phi.phi[q];
        }
    }
    return out;
}

// || x_h_a phi ||^2 per axis.
Vec3 second_moments(const MomentumPacket3D& phi, const NodeTable& t,
                    const std::vector<double>& d) {
    const auto xs = apply_x_h(phi, t, d);
    Vec3 m;
    for (int a = 0; a < 3; ++a) {
        m(a) = reduce<double>(phi.phi.size(),
                              [&](std::size_t q) { return t.w[q] * std::norm(xs[a][q]); });
    }
    return m;
}

CVec3 expectation_of(const MomentumPacket3D& phi, const NodeTable& t,
                     const std::array<std::vector<Complex>, 3>& applied) {
    CVec3 out;
    for (int a = 0; a < 3; ++a) {
        out(a) = reduce<Complex>(phi.phi.size(), [&](std::size_t q) {
            return t.w[q] * std::conj(phi.phi[q]) * applied[a][q];
        });
    }
    return out;
}

}  // namespace

double grid_half_width_for(const GaussianShape& shape, double margin) {
    // |phi| = exp(-(p - c)^2 / (4 sigma^2)) drops to kSurfaceDecay at 2 sigma sqrt(ln(1/decay)).
    const double reach = 2.0 * std::sqrt(std::log(1.0 / kSurfaceDecay));
    double hw = 0.0;
    for (int a = 0; a < 3; ++a) {
        hw = std::max(hw, std::abs(shape.center(a)) + reach * shape.widths(a));
    }
    return margin * hw;
}

MomentumPacket3D gaussian_packet(const MomentumGrid& grid, double mass, const GaussianShape& shape) {
    if (!(shape.widths.minCoeff() > 0.0)) throw invalid("Gaussian widths must be positive");
    MomentumPacket3D out{grid, mass, std::vector<Complex>(grid.size())};
    require_shape(out);
    for (std::size_t i = 0; i < grid.n; ++i) {
        for (std::size_t j = 0; j < grid.n; ++j) {
            for (std::size_t k = 0; k < grid.n; ++k) {
                const Vec3 p(grid.coord(i), grid.coord(j), grid.coord(k));
                const Vec3 z = (p - shape.center).cwiseQuotient(shape.widths);
                out.phi[grid.index(i, j, k)] =
                    std::exp(-0.25 * z.squaredNorm()) * std::exp(-kI * p.dot(shape.shift));
            }
        }
    }
    const double norm = std::sqrt(inner_product(out, out).real());
    if (!(norm > 0.0) || !std::isfinite(norm)) throw invalid("packet has zero norm on this grid");
    for (Complex& v : out.phi) v /= norm;
    return out;
}

Complex inner_product(const MomentumPacket3D& psi, const MomentumPacket3D& phi) {
    require_same_grid(psi, phi);
    require_shape(phi);
    const MomentumGrid& g = phi.grid;
    const double h3 = std::pow(g.spacing(), 3);
    const double m2 = phi.mass * phi.mass;
    return reduce<Complex>(g.size(), [&](std::size_t q) {
        const std::size_t i = q / (g.n * g.n);
        const std::size_t j = (q / g.n) % g.n;
        const std::size_t k = q % g.n;
        const double p2 = g.coord(i) * g.coord(i) + g.coord(j) * g.coord(j) +
                          g.coord(k) * g.coord(k);
        return h3 / std::sqrt(p2 + m2) * std::conj(psi.phi[q]) * phi.phi[q];
    });
}

double surface_ratio(const MomentumPacket3D& phi) {
    require_shape(phi);
    const MomentumGrid& g = phi.grid;
    double peak = 0.0;
    double edge = 0.0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = 0; j < g.n; ++j) {
            for (std::size_t k = 0; k < g.n; ++k) {
                const double a = std::abs(phi.phi[g.index(i, j, k)]);
                peak = std::max(peak, a);
                const bool face = i == 0 || j == 0 || k == 0 || i == g.n - 1 || j == g.n - 1 ||
                                  k == g.n - 1;
                if (face) edge = std::max(edge, a);
            }
        }
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

void require_surface_decay(const MomentumPacket3D& phi) {
    const double r = surface_ratio(phi);
    if (!(r <= kSurfaceDecay)) {
        throw Error("kg_position", "SurfaceTermViolation",
                    "boundary amplitude ratio " + std::to_string(r) + " exceeds 1e-10",
                    ErrorKind::Numerical);
    }
}

std::vector<double> spectral_derivative(std::size_t n, double length) {
    if (n < 2 || n % 2 != 0) throw invalid("spectral derivative needs even n");
    std::vector<double> d(n * n, 0.0);
    const double scale = 2.0 * std::numbers::pi / length;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            if (j == k) continue;
            const long diff = static_cast<long>(j) - static_cast<long>(k);
            const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
            d[j * n + k] = 0.5 * sign * scale /
                           std::tan(static_cast<double>(diff) * std::numbers::pi /
                                    static_cast<double>(n));
        }
    }
    return d;
}

std::vector<double> fd6_derivative(std::size_t n, double h) {
    if (n < 7) throw invalid("sixth-order stencil needs n >= 7");
    static constexpr double c[3] = {3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
    std::vector<double> d(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t s = 1; s <= 3; ++s) {
            d[j * n + (j + s) % n] += c[s - 1] / h;
            d[j * n + (j + n - s) % n] -= c[s - 1] / h;
        }
    }
    return d;
}

std::vector<Complex> derivative(const MomentumPacket3D& phi, const std::vector<double>& d,
                                int axis, bool parallel) {
    require_shape(phi);
    std::vector<Complex> out(phi.phi.size());
    if (parallel) {
        kernels::axis_apply_omp(d, phi.grid.n, axis, phi.phi, out);
    } else {
        kernels::axis_apply_serial(d, phi.grid.n, axis, phi.phi, out);
    }
    return out;
}

CVec3 position_expectation(const MomentumPacket3D& phi) {
    require_shape(phi);
    const NodeTable t = nodes(phi);
    const std::vector<double> d = spectral_for(phi.grid);
    std::array<std::vector<Complex>, 3> applied;
    for (int a = 0; a < 3; ++a) {
        applied[a] = derivative(phi, d, a);
        for (Complex& v : applied[a]) v *= kI;
    }
    return expectation_of(phi, t, applied);
}

CVec3 newton_wigner_expectation(const MomentumPacket3D& phi) {
    require_shape(phi);
    const NodeTable t = nodes(phi);
    return expectation_of(phi, t, apply_x_h(phi, t, spectral_for(phi.grid)));
}

Vec3 newton_wigner_mean(const MomentumPacket3D& phi) {
    require_surface_decay(phi);
    const CVec3 e = newton_wigner_expectation(phi);
    const double residue = e.imag().cwiseAbs().maxCoeff();
    if (residue > 1e-8) {
        throw Error("kg_position", "NonHermitian",
                    "imaginary residue " + std::to_string(residue) + " exceeds 1e-8",
                    ErrorKind::Numerical);
    }
    return e.real();
}

Vec3 newton_wigner_mean_bilinear(const MomentumPacket3D& phi) {
    require_surface_decay(phi);
    const NodeTable t = nodes(phi);
    const std::vector<double> d = spectral_for(phi.grid);
    Vec3 out;
    for (int a = 0; a < 3; ++a) {
        const std::vector<Complex> dphi = derivative(phi, d, a);
        // (i/2)(phi* dphi - phi dphi*) = -Im(phi* dphi).
        out(a) = reduce<double>(phi.phi.size(), [&](std::size_t q) {
            return -t.w[q] * std::imag(std::conj(phi.phi[q]) * dphi[q]);
        });
    }
    return out;
}

Vec3 localization_sizes(const MomentumPacket3D& phi) {
    require_surface_decay(phi);
    const NodeTable t = nodes(phi);
    Vec3 out;
    for (int a = 0; a < 3; ++a) {
        out(a) = reduce<double>(phi.phi.size(), [&](std::size_t q) {
            return t.w[q] * std::norm(phi.phi[q]) * 0.5 * t.p[q](a) / (t.p0[q] * t.p0[q]);
        });
    }
    return out;
}

LocalizationReport uncertainty_correlations(const MomentumPacket3D& phi) {
    require_surface_decay(phi);
    const NodeTable t = nodes(phi);
    const std::size_t N = phi.phi.size();
    LocalizationReport r;
    r.alpha = newton_wigner_mean(phi);
    r.beta = localization_sizes(phi);

    const Vec3 second = second_moments(phi, t, spectral_for(phi.grid));
    const Vec3 second_fd = second_moments(phi, t, fd6_derivative(phi.grid.n, phi.grid.spacing()));
    r.resolution_defect = ((second - second_fd).cwiseAbs().cwiseQuotient(second.cwiseAbs()))
                              .maxCoeff();
    if (!(r.resolution_defect <= kResolutionTolerance)) {
        throw Error("kg_position", "ResolutionError",
                    "sixth-order and spectral second moments differ by " +
                        std::to_string(r.resolution_defect) + "; refine the grid",
                    ErrorKind::Numerical);
    }
    for (int a = 0; a < 3; ++a) {
        r.delta_alpha(a) = std::sqrt(std::max(0.0, second(a) - r.alpha(a) * r.alpha(a)));
        const double y2 = reduce<double>(N, [&](std::size_t q) {
            const double y = 0.5 * t.p[q](a) / (t.p0[q] * t.p0[q]);
            return t.w[q] * std::norm(phi.phi[q]) * y * y;
        });
        r.delta_beta(a) = std::sqrt(std::max(0.0, y2 - r.beta(a) * r.beta(a)));
    }
    const Eigen::Matrix3cd oracle = commutator_oracle(phi);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r.rhs(i, j) = 0.5 * std::abs(oracle(i, j));
            r.slack(i, j) = r.delta_alpha(i) * r.delta_beta(j) - r.rhs(i, j);
        }
    }
    return r;
}

Eigen::Matrix3cd commutator_expectation(const MomentumPacket3D& phi) {
    require_surface_decay(phi);
    const NodeTable t = nodes(phi);
    const std::vector<double> d = spectral_for(phi.grid);
    const std::size_t N = phi.phi.size();
    const auto x_phi = apply_x_h(phi, t, d);
    Eigen::Matrix3cd out;
    for (int j = 0; j < 3; ++j) {
        // y_j phi, then x_h applied to it.
        MomentumPacket3D yphi = phi;
        for (std::size_t q = 0; q < N; ++q) {
            yphi.phi[q] *= 0.5 * t.p[q](j) / (t.p0[q] * t.p0[q]);
        }
        const auto x_yphi = apply_x_h(yphi, t, d);
        for (int i = 0; i < 3; ++i) {
            out(i, j) = reduce<Complex>(N, [&](std::size_t q) {
                const double y = 0.5 * t.p[q](j) / (t.p0[q] * t.p0[q]);
                return t.w[q] * std::conj(phi.phi[q]) * (x_yphi[i][q] - y * x_phi[i][q]);
            });
        }
    }
    return out;
}

Eigen::Matrix3cd commutator_oracle(const MomentumPacket3D& phi) {
    require_shape(phi);
    const NodeTable t = nodes(phi);
    Eigen::Matrix3cd out;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double v = reduce<double>(phi.phi.size(), [&](std::size_t q) {
                const double p02 = t.p0[q] * t.p0[q];
                const double delta = i == j ? 1.0 : 0.0;
                return t.w[q] * std::norm(phi.phi[q]) *
                       (delta - 2.0 * t.p[q](i) * t.p[q](j) / p02) / p02;
            });
            out(i, j) = 0.5 * kI * v;
        }
    }
    return out;
}

}  // namespace chronon::kg_position
