// Time observable for discrete spectra: Poincare cycle detection, the
// periodic saw-tooth time, and the energy-time spread over one cycle.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace chronon::discretespec {

using Complex = std::complex<double>;

inline constexpr double kCommensurationTolerance = 1e-9;
inline constexpr long long kMaxDenominator = 1000;

// Levels strictly ascending; sum |a_n|^2 = 1 within 1e-10.
struct DiscreteSystem {
    std::vector<double> levels;
    std::vector<Complex> amplitudes;
    double hbar = 1.0;

    // Errors: discretespec.InvalidSystem.
    void validate() const;
    // psi(t) = sum a_n exp(-i (e_n - e_0) t / hbar)
    Complex psi(double t) const;
};

// Rescales the amplitudes to unit norm, then validates.
DiscreteSystem make_system(std::vector<double> levels, std::vector<Complex> amplitudes,
                           double hbar = 1.0);

struct PoincareCycle {
    double D;                         // largest common divisor of the spacings
    double T;                         // 2 pi hbar / D
    std::vector<long long> multiples; // (e_n - e_0) / D, n >= 1
};

// Errors: discretespec.Incommensurate, discretespec.InvalidSystem (< 2 levels).
PoincareCycle poincare_cycle(const std::vector<double>& levels, double hbar = 1.0,
                             double tol = kCommensurationTolerance,
                             long long max_denominator = kMaxDenominator);

// Saw-tooth time with cycles centred on gamma + n T; result in (gamma - T/2, gamma + T/2].
double sawtooth(double t, double T, double gamma = 0.0);

struct UncertaintyPair {
    double T;
    double delta_E;
    double delta_t;
    double product_sq;      // (delta_E)^2 (delta_t)^2
    double edge_fraction;   // T |psi(gamma + T/2)|^2 / integral of |psi|^2 over the cycle
    double rhs_linear;     // hbar^2 (1 - edge_fraction)
    double rhs_commutator;  // (hbar^2 / 4) (1 - edge_fraction)^2, from the cycle commutator
    bool linear_holds(double tol) const { return product_sq >= rhs_linear - tol; }
    bool commutator_holds(double tol) const { return product_sq >= rhs_commutator - tol; }
};

// Errors: discretespec.Incommensurate; discretespec.InvalidArgument (gamma outside (-T/2, T/2)).
UncertaintyPair uncertainty_pair(const DiscreteSystem& sys, double gamma = 0.0);
UncertaintyPair uncertainty_pair(const DiscreteSystem& sys, const PoincareCycle& cycle,
                                 double gamma = 0.0);

struct CycleSample {
    double t;
    double density;  // |psi(t)|^2
    double t_hat;
};

// Samples over [gamma - cycles T / 2, gamma + cycles T / 2].
std::vector<CycleSample> cycle_series(const DiscreteSystem& sys, const PoincareCycle& cycle,
                                      std::size_t samples, double cycles = 1.0,
                                      double gamma = 0.0);

}  // namespace chronon::discretespec
