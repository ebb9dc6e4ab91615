#include "chronon/timeobs/field.hpp"

#include "chronon/kernels/kernels.hpp"
#include "chronon/numcore/error.hpp"
#include "chronon/numcore/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chronon::timeobs {

namespace {

// Group velocity used to bound the E-phase of phi(x, E); taken no lower than the
// velocity at a quarter of the mean wavenumber, below which amplitudes are negligible.
double reference_velocity(const SpectralPacket& p) {
    const double e_floor = p.energy(0.25 * p.k_mean);
    return p.group_velocity(std::max(p.e_min, e_floor));
}

}  // namespace

PacketField::PacketField(SpectralPacket packet, PiecewiseConstantPotential pot, double t_abs_max,
                         double x_abs_max, FieldOptions opts)
    : packet_(std::move(packet)), pot_(std::move(pot)), opts_(opts), t_abs_max_(t_abs_max),
      x_abs_max_(x_abs_max) {
    if (packet_.dispersion == Dispersion::Massive && packet_.mass != pot_.mass()) {
        throw Error("timeobs", "MassMismatch", "packet and potential carry different masses",
                    ErrorKind::Config);
    }
    const double hbar = packet_.constants.hbar;
    const double v_ref = reference_velocity(packet_);
    const double span = pot_.span_hi() - pot_.span_lo();
    const double reach = std::abs(x_abs_max) + std::abs(packet_.x0) +
                         2.0 * (span + std::abs(pot_.span_lo()) + std::abs(pot_.span_hi()));
    const double R = std::abs(t_abs_max) + reach / v_ref + 1.0 / (packet_.sigma_k * v_ref);
    const double width = packet_.e_max - packet_.e_min;
    const double h = std::min(width / 4.0, opts_.phase_per_panel * hbar / R);
    const auto panels = static_cast<std::size_t>(std::ceil(width / h));
    if (panels * opts_.nodes_per_panel > opts_.max_nodes) {
        throw Error("timeobs", "QuadratureFailure",
                    "energy rule would need " + std::to_string(panels * opts_.nodes_per_panel) +
                        " nodes (budget " + std::to_string(opts_.max_nodes) + ")");
    }
    const auto rule = numcore::composite_gauss_legendre(panels, opts_.nodes_per_panel,
                                                        packet_.e_min, packet_.e_max);

    // Unit time-integrated incident flux.
    const double flux_weight = numcore::integrate_real(
        [&](double E) { return std::norm(packet_.g(E)) * packet_.plane_wave_flux(E); },
        numcore::composite_gauss_legendre(64, 16, packet_.e_min, packet_.e_max));
    norm_ = 1.0 / std::sqrt(2.0 * std::numbers::pi * hbar * flux_weight);

    energy_ = rule.nodes;
    freq_.resize(rule.size());
    weighted_g_.resize(rule.size());
    states_.reserve(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        freq_[i] = energy_[i] / hbar;
        weighted_g_[i] = norm_ * rule.weights[i] * packet_.g(energy_[i]);
        states_.push_back(scattering_state(pot_, energy_[i], packet_.dispersion, packet_.constants));
    }
}

SensorSeries PacketField::sample_impl(double x, std::span<const double> t,
                                      bool forward_only) const {
    const std::size_t n = energy_.size();
    const std::size_t region = pot_.region_of(x);
    std::vector<Complex> c0(n);
    std::vector<Complex> c1(n);
    for (std::size_t i = 0; i < n; ++i) {
        const RegionWave& w = states_[i].regions[region];
        if (forward_only) {
            c0[i] = weighted_g_[i] * forward_value(w, x);
            c1[i] = weighted_g_[i] * forward_derivative(w, x);
        } else {
            c0[i] = weighted_g_[i] * wave_value(w, x);
            c1[i] = weighted_g_[i] * wave_derivative(w, x);
        }
    }
    SensorSeries s;
    s.x = x;
    s.t.assign(t.begin(), t.end());
    s.psi.resize(t.size());
    s.psi_x.resize(t.size());
    if (opts_.parallel) {
        kernels::exp_sum2_omp(c0, c1, freq_, t, s.psi, s.psi_x);
    } else {
        kernels::exp_sum2_serial(c0, c1, freq_, t, s.psi, s.psi_x);
    }
    if (packet_.dispersion == Dispersion::Massless) {
        std::vector<Complex> ct(n);
        for (std::size_t i = 0; i < n; ++i) ct[i] = Complex(0.0, -freq_[i]) * c0[i];
        s.psi_t.resize(t.size());
        if (opts_.parallel) {
            kernels::exp_sum_omp(ct, freq_, t, s.psi_t);
        } else {
            kernels::exp_sum_serial(ct, freq_, t, s.psi_t);
        }
    }
    return s;
}

SensorSeries PacketField::sample(double x, std::span<const double> t) const {
    return sample_impl(x, t, false);
}

SensorSeries PacketField::sample_forward(double x, std::span<const double> t) const {
    return sample_impl(x, t, true);
}

double PacketField::rho(const SensorSeries& s, std::size_t m) const {
    if (packet_.dispersion == Dispersion::Massive) return std::norm(s.psi[m]);
    const double c = packet_.constants.c;
    const double V = pot_.region_potential(pot_.region_of(s.x));
    const double q = V / (packet_.constants.hbar * c);
    const Complex e_field = -s.psi_t[m] / c;
    return 0.5 * (std::norm(e_field) + std::norm(s.psi_x[m]) + q * q * std::norm(s.psi[m]));
}

double PacketField::current(const SensorSeries& s, std::size_t m) const {
    if (packet_.dispersion == Dispersion::Massive) {
        return packet_.constants.hbar / pot_.mass() * std::imag(std::conj(s.psi[m]) * s.psi_x[m]);
    }
    const double c = packet_.constants.c;
    const Complex e_field = -s.psi_t[m] / c;
    return c * std::real(std::conj(e_field) * s.psi_x[m]);
}

Complex PacketField::value(double x, double t) const {
    const double ts[1] = {t};
    return sample(x, ts).psi[0];
}

FluxSample PacketField::flux(double x, double t) const {
    const double ts[1] = {t};
    const SensorSeries s = sample(x, ts);
    return FluxSample{x, t, rho(s, 0), current(s, 0)};
}

Eigen::MatrixXd PacketField::density_grid(std::span<const double> xs,
                                          std::span<const double> ts) const {
    const auto n = static_cast<Eigen::Index>(energy_.size());
    const auto nx = static_cast<Eigen::Index>(xs.size());
    const auto nt = static_cast<Eigen::Index>(ts.size());
    const bool massless = packet_.dispersion == Dispersion::Massless;

    Eigen::MatrixXcd phase(n, nt);
#pragma omp parallel for schedule(static) if (opts_.parallel)
    for (Eigen::Index m = 0; m < nt; ++m) {
        for (Eigen::Index i = 0; i < n; ++i) {
            const double ph = freq_[static_cast<std::size_t>(i)] * ts[static_cast<std::size_t>(m)];
            phase(i, m) = Complex(std::cos(ph), -std::sin(ph));
        }
    }

    Eigen::MatrixXcd c0(nx, n);
    Eigen::MatrixXcd c1(massless ? nx : 0, massless ? n : 0);
    for (Eigen::Index r = 0; r < nx; ++r) {
        const double x = xs[static_cast<std::size_t>(r)];
        const std::size_t region = pot_.region_of(x);
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto ii = static_cast<std::size_t>(i);
            const RegionWave& w = states_[ii].regions[region];
            c0(r, i) = weighted_g_[ii] * wave_value(w, x);
            if (massless) c1(r, i) = weighted_g_[ii] * wave_derivative(w, x);
        }
    }

    const Eigen::MatrixXcd psi = c0 * phase;
    if (!massless) return psi.cwiseAbs2();

    Eigen::VectorXcd minus_i_omega(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        minus_i_omega(i) = Complex(0.0, -freq_[static_cast<std::size_t>(i)]);
    }
    const Eigen::MatrixXcd psi_x = c1 * phase;
    const Eigen::MatrixXcd psi_t = (c0 * minus_i_omega.asDiagonal()) * phase;
    const double c = packet_.constants.c;
    Eigen::MatrixXd out(nx, nt);
    for (Eigen::Index r = 0; r < nx; ++r) {
        const double V = pot_.region_potential(pot_.region_of(xs[static_cast<std::size_t>(r)]));
        const double q = V / (packet_.constants.hbar * c);
        for (Eigen::Index m = 0; m < nt; ++m) {
            out(r, m) = 0.5 * (std::norm(psi_t(r, m)) / (c * c) + std::norm(psi_x(r, m)) +
                               q * q * std::norm(psi(r, m)));
        }
    }
    return out;
}

Complex synthesize(const SpectralPacket& packet, const PiecewiseConstantPotential& pot, double x,
                   double t) {
    if (!std::isfinite(x) || !std::isfinite(t)) {
        throw Error("timeobs", "QuadratureFailure", "x and t must be finite");
    }
    return PacketField(packet, pot, std::abs(t), std::abs(x)).value(x, t);
}

FluxSample flux_sample(const SpectralPacket& packet, const PiecewiseConstantPotential& pot,
                       double x, double t) {
    if (!std::isfinite(x) || !std::isfinite(t)) {
        throw Error("timeobs", "QuadratureFailure", "x and t must be finite");
    }
    return PacketField(packet, pot, std::abs(t), std::abs(x)).flux(x, t);
}

Complex synthesize_k(const SpectralPacket& packet, const PiecewiseConstantPotential& pot, double x,
                     double t, std::size_t panels, std::size_t nodes_per_panel) {
    const double hbar = packet.constants.hbar;
    const double k_lo = packet.wavenumber(packet.e_min);
    const double k_hi = packet.wavenumber(packet.e_max);
    const auto rule = numcore::composite_gauss_legendre(panels, nodes_per_panel, k_lo, k_hi);
    const double flux_weight = numcore::integrate_real(
        [&](double k) {
            const double E = packet.energy(k);
            return std::norm(packet.g(E)) * packet.plane_wave_flux(E) * packet.dE_dk(k);
        },
        rule);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * hbar * flux_weight);
    const std::size_t region = pot.region_of(x);
    return norm * numcore::integrate(
                      [&](double k) {
                          const double E = packet.energy(k);
                          const ScatteringState st =
                              scattering_state(pot, E, packet.dispersion, packet.constants);
                          return packet.g(E) * packet.dE_dk(k) *
                                 wave_value(st.regions[region], x) *
                                 std::exp(Complex(0.0, -E * t / hbar));
                      },
                      rule);
}

}  // namespace chronon::timeobs
