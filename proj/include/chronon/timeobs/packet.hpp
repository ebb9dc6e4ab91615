#pragma once

#include "chronon/timeobs/potential.hpp"

#include <functional>

namespace chronon::timeobs {

// Energy-space amplitude g(E) of a moving 1D packet, supported on
// [e_min, e_max] with e_min > 0 and normalized so that the integral of |g|^2
// over E is 1. The packet itself is
//     Psi(x, t) = N * integral g(E) phi(x, E) exp(-i E t / hbar) dE,
// with N chosen so that the probability carried by the incident wave is 1.
struct SpectralPacket {
    Dispersion dispersion = Dispersion::Massive;
    PhysicalConstants constants;
    double mass = 1.0;  // ignored for Massless
    double e_min = 0.0;
    double e_max = 0.0;
    std::function<Complex(double)> g;

    // Nominal group velocity and spatial width at t = 0 (used to size windows).
    double k_mean = 0.0;
    double sigma_k = 0.0;
    double x0 = 0.0;

    double wavenumber(double E) const;     // asymptotic (V = 0) k(E)
    double energy(double k) const;         // inverse of wavenumber
    double dE_dk(double k) const;
    double group_velocity(double E) const; // dE/dk / hbar
    // Flux carried by a unit-amplitude plane wave: hbar k / mu (massive) or c k^2 (massless).
    double plane_wave_flux(double E) const;
    double mean_group_velocity() const { return group_velocity(energy(k_mean)); }
    double sigma_x0() const { return 0.5 / sigma_k; }
    // Packet width at time t for free motion (massless packets do not spread).
    double sigma_x(double t) const;
};

// Gaussian in k: a(k) = exp(-(k - k_mean)^2 / (4 sigma_k^2) - i k x0), so the
// spatial packet at t = 0 is centered on x0 with width 1 / (2 sigma_k). The
// energy support spans k_mean +- width_sigmas * sigma_k, clipped below at
// 1e-6 times the mean energy.
SpectralPacket gaussian_packet(double k_mean, double sigma_k, double x0, Dispersion disp,
                               double mass, const PhysicalConstants& pc = {},
                               double width_sigmas = 9.0);

// Packet with a caller-supplied amplitude; normalization is applied here.
// Errors: timeobs.InvalidPacket (e_min <= 0, empty support, zero norm).
SpectralPacket make_packet(std::function<Complex(double)> g, double e_min, double e_max,
                           Dispersion disp, double mass, const PhysicalConstants& pc,
                           double x0_hint = 0.0);

// Integral of |g|^2 dE by quadrature (1 after normalization).
double packet_norm(const SpectralPacket& p);
// Flux-weighted energy density moments: weights |g|^2 w(E).
struct EnergyMoments {
    double mean;
    double stddev;
    double flux_weight;  // integral |g|^2 w(E) dE
};
EnergyMoments energy_moments(const SpectralPacket& p);

}  // namespace chronon::timeobs
