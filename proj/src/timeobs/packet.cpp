#include "chronon/timeobs/packet.hpp"

#include "chronon/numcore/error.hpp"
#include "chronon/numcore/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chronon::timeobs {

namespace {

Error invalid_packet(const std::string& what) {
    return Error("timeobs", "InvalidPacket", what, ErrorKind::Config);
}

numcore::QuadratureRule support_rule(const SpectralPacket& p) {
    return numcore::composite_gauss_legendre(64, 16, p.e_min, p.e_max);
}

}  // namespace

double SpectralPacket::wavenumber(double E) const {
    if (dispersion == Dispersion::Massive) return std::sqrt(2.0 * mass * E) / constants.hbar;
    return E / (constants.hbar * constants.c);
}

double SpectralPacket::energy(double k) const {
    if (dispersion == Dispersion::Massive) {
        return constants.hbar * constants.hbar * k * k / (2.0 * mass);
    }
    return constants.hbar * constants.c * k;
}

double SpectralPacket::dE_dk(double k) const {
    if (dispersion == Dispersion::Massive) return constants.hbar * constants.hbar * k / mass;
    return constants.hbar * constants.c;
}

double SpectralPacket::group_velocity(double E) const {
    return dE_dk(wavenumber(E)) / constants.hbar;
}

double SpectralPacket::plane_wave_flux(double E) const {
    const double k = wavenumber(E);
    if (dispersion == Dispersion::Massive) return constants.hbar * k / mass;
    return constants.c * k * k;
}

double SpectralPacket::sigma_x(double t) const {
    const double s0 = sigma_x0();
    if (dispersion == Dispersion::Massless) return s0;
    const double spread = constants.hbar * t / (2.0 * mass * s0 * s0);
    return s0 * std::sqrt(1.0 + spread * spread);
}

double packet_norm(const SpectralPacket& p) {
    return numcore::integrate_real([&](double E) { return std::norm(p.g(E)); }, support_rule(p));
}

EnergyMoments energy_moments(const SpectralPacket& p) {
    const auto rule = support_rule(p);
    const double w0 =
        numcore::integrate_real([&](double E) { return std::norm(p.g(E)) * p.plane_wave_flux(E); },
                                rule);
    const double w1 = numcore::integrate_real(
        [&](double E) { return E * std::norm(p.g(E)) * p.plane_wave_flux(E); }, rule);
    const double mean = w1 / w0;
    const double w2 = numcore::integrate_real(
        [&](double E) {
            return (E - mean) * (E - mean) * std::norm(p.g(E)) * p.plane_wave_flux(E);
        },
        rule);
    return EnergyMoments{mean, std::sqrt(std::max(0.0, w2 / w0)), w0};
}

SpectralPacket gaussian_packet(double k_mean, double sigma_k, double x0, Dispersion disp,
                               double mass, const PhysicalConstants& pc, double width_sigmas) {
    if (!(k_mean > 0.0) || !(sigma_k > 0.0)) {
        throw invalid_packet("k_mean and sigma_k must be positive");
    }
    if (disp == Dispersion::Massive && !(mass > 0.0)) throw invalid_packet("mass must be positive");

    SpectralPacket p;
    p.dispersion = disp;
    p.constants = pc;
    p.mass = mass;
    p.k_mean = k_mean;
    p.sigma_k = sigma_k;
    p.x0 = x0;

    const double e_mean = p.energy(k_mean);
    const double k_lo = k_mean - width_sigmas * sigma_k;
    const double k_hi = k_mean + width_sigmas * sigma_k;
    p.e_min = std::max(1e-6 * e_mean, k_lo > 0.0 ? p.energy(k_lo) : 0.0);
    p.e_max = p.energy(k_hi);

    const SpectralPacket shape = p;
    auto raw = [shape, k_mean, sigma_k, x0](double E) {
        const double k = shape.wavenumber(E);
        const double d = k - k_mean;
        const double amp = std::exp(-d * d / (4.0 * sigma_k * sigma_k)) / shape.dE_dk(k);
        return amp * std::exp(Complex(0.0, -k * x0));
    };
    p.g = raw;
    const double c = 1.0 / std::sqrt(packet_norm(p));
    p.g = [raw, c](double E) { return c * raw(E); };
    return p;
}

SpectralPacket make_packet(std::function<Complex(double)> g, double e_min, double e_max,
                           Dispersion disp, double mass, const PhysicalConstants& pc,
                           double x0_hint) {
    if (!(e_min > 0.0)) throw invalid_packet("e_min must be positive (E = 0 is excluded)");
    if (!(e_max > e_min)) throw invalid_packet("energy support is empty");
    SpectralPacket p;
    p.dispersion = disp;
    p.constants = pc;
    p.mass = mass;
    p.e_min = e_min;
    p.e_max = e_max;
    p.x0 = x0_hint;
    p.g = g;
    const double n = packet_norm(p);
    if (!(n > 0.0) || !std::isfinite(n)) throw invalid_packet("amplitude has zero norm");
    const double c = 1.0 / std::sqrt(n);
    p.g = [g, c](double E) { return c * g(E); };

    // Window-sizing parameters from the |g|^2 moments.
    const auto rule = support_rule(p);
    const double m1 = numcore::integrate_real([&](double E) { return E * std::norm(p.g(E)); }, rule);
    const double m2 = numcore::integrate_real(
        [&](double E) { return (E - m1) * (E - m1) * std::norm(p.g(E)); }, rule);
    p.k_mean = p.wavenumber(m1);
    p.sigma_k = std::max(std::sqrt(std::max(m2, 0.0)) / p.dE_dk(p.k_mean), 1e-12 * p.k_mean);
    return p;
}

}  // namespace chronon::timeobs
