// Piecewise-constant 1D potentials and their stationary scattering states.
//
// The line is split into regions: a free region to the left of the first
// segment, one region per segment, and a free region to the right. Inside
// region j the stationary solution is
//     phi(x) = A_j exp(i k_j (x - o_j)) + B_j exp(-i k_j (x - o_j)),
// or A_j + B_j (x - o_j) when k_j vanishes. The state is normalized to a unit
// incident wave exp(i k x) from the left, so A_0 = 1, B_0 = r and the
// rightmost region carries only t exp(i k x).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chronon::timeobs {

using Complex = std::complex<double>;

// massive: E = hbar^2 k^2 / 2 mu; massless: E = hbar c k (a segment's V acts as
// a cutoff energy, k^2 = (E^2 - V^2) / (hbar c)^2).
enum class Dispersion { Massive, Massless };

struct PhysicalConstants {
    double hbar = 1.0;
    double c = 1.0;
};

struct Segment {
    double x_start;
    double x_end;
    double V;
};

class PiecewiseConstantPotential {
public:
    // Throws timeobs.InvalidPotential for non-contiguous or empty segments.
    PiecewiseConstantPotential(std::vector<Segment> segments, double mass);

    static PiecewiseConstantPotential free(double mass);
    static PiecewiseConstantPotential rectangular_barrier(double x_start, double width, double V0,
                                                         double mass);

    const std::vector<Segment>& segments() const { return segments_; }
    double mass() const { return mass_; }
    bool is_free() const { return segments_.empty(); }

    // Number of regions including the two semi-infinite free ones.
    std::size_t region_count() const { return segments_.size() + 2; }
    // Region containing x. Points on an interface belong to the region on the left.
    std::size_t region_of(double x) const;
    double region_potential(std::size_t region) const;
    // Leftmost and rightmost interface (0, 0 for free motion).
    double span_lo() const;
    double span_hi() const;
    std::vector<double> interfaces() const;

private:
    std::vector<Segment> segments_;
    double mass_;
};

// Squared wavenumber in a region of potential V.
double wavenumber_squared(double E, double V, Dispersion disp, double mass,
                          const PhysicalConstants& pc);

struct RegionWave {
    Complex A;
    Complex B;
    Complex k;  // real > 0 propagating, i*kappa evanescent, 0 on the linear branch
    double origin = 0.0;
    bool linear = false;
};

struct ScatteringState {
    double E = 0.0;
    std::vector<RegionWave> regions;
    Complex t;  // transmission amplitude
    Complex r;  // reflection amplitude

    double transmission() const { return std::norm(t); }
    double reflection() const { return std::norm(r); }
};

// Errors: timeobs.DegenerateEnergy when E <= 0 (no incident wave).
ScatteringState scattering_state(const PiecewiseConstantPotential& pot, double E,
                                 Dispersion disp, const PhysicalConstants& pc);

// phi and d phi / dx at x. Region index from pot.region_of(x).
Complex wave_value(const RegionWave& w, double x);
Complex wave_derivative(const RegionWave& w, double x);
// Second derivative: -k^2 phi (0 on the linear branch).
Complex wave_second_derivative(const RegionWave& w, double x);
// Forward-moving part A exp(i k (x - o)) and its derivative (propagating regions only).
Complex forward_value(const RegionWave& w, double x);
Complex forward_derivative(const RegionWave& w, double x);

// Closed-form |T|^2 of a rectangular barrier below its top (massive dispersion).
double rectangular_barrier_transmission(double E, double V0, double width, double mass,
                                        double hbar);

}  // namespace chronon::timeobs
