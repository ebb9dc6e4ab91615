// Finite-difference (chronon) Schroedinger evolution on finite-dimensional
// Hamiltonians. Time-independent steppers work in the eigenbasis of H after a
// single decomposition.

#pragma once

#include "chronon/numcore/linalg.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace chronon::chronon_qm {

using numcore::Complex;
using numcore::ComplexMatrix;
using State = Eigen::VectorXcd;

enum class Scheme { Retarded, Symmetric, Advanced };

// How the second slice of the two-step symmetric recurrence is produced.
enum class SymmetricSeed {
    Stable,  // psi(tau) = exp(-i H_sym tau / hbar) psi(0): physical branch only
    Euler,   // psi(tau) = (1 - i tau H / hbar) psi(0): excites the alternating branch
};

class FiniteHamiltonian {
public:
    explicit FiniteHamiltonian(ComplexMatrix matrix, double hbar = 1.0);

    const ComplexMatrix& matrix() const { return matrix_; }
    const numcore::EigenSystem& eigensystem() const { return eig_; }
    const Eigen::VectorXd& levels() const { return eig_.eigenvalues; }
    double hbar() const { return hbar_; }
    Eigen::Index dim() const { return matrix_.rows(); }

private:
    ComplexMatrix matrix_;
    numcore::EigenSystem eig_;
    double hbar_;
};

struct ChrononParams {
    double tau;
    Scheme scheme = Scheme::Retarded;
};

// One step. Retarded/advanced map psi(t - tau) -> psi(t) and psi(t) -> psi(t + tau);
// symmetric maps (psi(t), psi(t - tau)) -> psi(t + tau) and needs prev2.
// Errors: chronon_qm.MissingSecondSlice, chronon_qm.DimensionMismatch.
State step(const FiniteHamiltonian& H, const ChrononParams& params, const State& prev,
           const State* prev2 = nullptr);

struct DiscreteTrajectory {
    double tau;
    Scheme scheme;
    std::vector<State> states;  // t = k tau, k = 0..K
    std::vector<double> norms;  // squared norms

    double time(std::size_t k) const { return tau * static_cast<double>(k); }
};

// K steps from psi0. Errors: chronon_qm.SpectralRadiusExceeded (stable seed with
// max |W| tau / hbar > 1).
DiscreteTrajectory evolve(const FiniteHamiltonian& H, const ChrononParams& params,
                          const State& psi0, std::size_t steps,
                          SymmetricSeed seed = SymmetricSeed::Stable);

// [1 + i tau H / hbar]^(-k) f, evaluated per eigenmode.
State retarded_closed_form(const FiniteHamiltonian& H, double tau, const State& f, long long k);

// gamma_n = ln(1 + tau^2 W_n^2 / hbar^2) / tau, ordered like H.levels().
Eigen::VectorXd norm_rates(const FiniteHamiltonian& H, double tau);

// Continuous generator reproducing the discrete scheme at t = n tau:
//   symmetric  (hbar / tau) arcsin(tau H / hbar)          (hermitian)
//   retarded   -(i hbar / tau) ln(1 + i tau H / hbar)     (decaying)
//   advanced    (i hbar / tau) ln(1 - i tau H / hbar)     (growing)
// It is diagonal in the eigenbasis of H; `values` holds its eigenvalues.
struct EquivalentHamiltonian {
    Scheme scheme;
    double hbar;
    Eigen::VectorXcd values;
    ComplexMatrix eigenvectors;
    ComplexMatrix matrix;

    // exp(-i H_eq t / hbar) psi0.
    State evolve(const State& psi0, double t) const;
};

// Errors: chronon_qm.SpectralRadiusExceeded (symmetric with max |W| tau / hbar > 1).
EquivalentHamiltonian equivalent_hamiltonian(const FiniteHamiltonian& H, double tau, Scheme scheme);

// exp(-i H t / hbar) psi0 for hermitian H.
State exact_evolution(const FiniteHamiltonian& H, const State& psi0, double t);

// Per-eigenmode occupations |<u_n|psi>|^2.
Eigen::VectorXd occupations(const FiniteHamiltonian& H, const State& psi);

struct UniformGrid {
    double x0;
    double dx;
    std::size_t n;

    double x(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
};

// e^{-gamma t} (-hbar^2 / 2m) L + e^{gamma t} diag(V), L the three-point Dirichlet
// Laplacian on the grid. Errors: chronon_qm.GridTooSmall (n < 3).
ComplexMatrix caldirola_kanai(const UniformGrid& grid, const std::vector<double>& V, double gamma,
                              double mass, double hbar, double t);

// Same step formulas for H(t), solved densely; each step uses H at the midpoint
// of the interval it spans.
DiscreteTrajectory evolve_time_dependent(const std::function<ComplexMatrix(double)>& H_of_t,
                                         double hbar, const ChrononParams& params,
                                         const State& psi0, std::size_t steps,
                                         SymmetricSeed seed = SymmetricSeed::Stable);

}  // namespace chronon::chronon_qm
