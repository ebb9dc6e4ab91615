// Packet synthesis: Psi(x, t) as an energy quadrature over stationary
// scattering states, with the spatial derivative taken analytically inside
// each region.

#pragma once

#include "chronon/timeobs/packet.hpp"
#include "chronon/timeobs/potential.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace chronon::timeobs {

struct FluxSample {
    double x;
    double t;
    double rho;
    double j;
};

struct FieldOptions {
    std::size_t nodes_per_panel = 16;
    // Largest phase excursion (E-panel width times R / hbar) allowed per panel.
    double phase_per_panel = 8.0;
    std::size_t max_nodes = 40000;
    bool parallel = true;
};

// Values of Psi and its derivatives at one position over a set of times.
struct SensorSeries {
    double x = 0.0;
    std::vector<double> t;
    std::vector<Complex> psi;
    std::vector<Complex> psi_x;
    std::vector<Complex> psi_t;
};

class PacketField {
public:
    // The energy rule is sized so that the quadrature resolves |t| <= t_abs_max
    // and |x| <= x_abs_max. Errors: timeobs.QuadratureFailure (node budget).
    PacketField(SpectralPacket packet, PiecewiseConstantPotential pot, double t_abs_max,
                double x_abs_max, FieldOptions opts = {});

    const SpectralPacket& packet() const { return packet_; }
    const PiecewiseConstantPotential& potential() const { return pot_; }
    std::size_t energy_nodes() const { return energy_.size(); }
    double normalization() const { return norm_; }
    double t_abs_max() const { return t_abs_max_; }
    double x_abs_max() const { return x_abs_max_; }

    SensorSeries sample(double x, std::span<const double> t) const;
    // Forward-moving component of the local region wave only (incident flux at x).
    SensorSeries sample_forward(double x, std::span<const double> t) const;

    Complex value(double x, double t) const;
    FluxSample flux(double x, double t) const;
    // rho and j from a series; index m.
    double rho(const SensorSeries& s, std::size_t m) const;
    double current(const SensorSeries& s, std::size_t m) const;

    // rho on a grid of positions x (rows) and times t (columns). One phase table
    // exp(-i E_n t_m / hbar) is shared by every row (dense product).
    Eigen::MatrixXd density_grid(std::span<const double> xs, std::span<const double> ts) const;

private:
    SensorSeries sample_impl(double x, std::span<const double> t, bool forward_only) const;

    SpectralPacket packet_;
    PiecewiseConstantPotential pot_;
    FieldOptions opts_;
    double t_abs_max_;
    double x_abs_max_;
    double norm_ = 1.0;
    std::vector<double> energy_;
    std::vector<double> freq_;        // E / hbar
    std::vector<Complex> weighted_g_; // N * w_i * g(E_i)
    std::vector<ScatteringState> states_;
};

// Single-point synthesis and flux (builds a field sized for this x and t).
Complex synthesize(const SpectralPacket& packet, const PiecewiseConstantPotential& pot, double x,
                   double t);
FluxSample flux_sample(const SpectralPacket& packet, const PiecewiseConstantPotential& pot,
                       double x, double t);

// Same integral evaluated on a Gauss-Legendre grid in k instead of E
// (E = E(k), dE = E'(k) dk).
Complex synthesize_k(const SpectralPacket& packet, const PiecewiseConstantPotential& pot, double x,
                     double t, std::size_t panels = 64, std::size_t nodes_per_panel = 16);

}  // namespace chronon::timeobs
