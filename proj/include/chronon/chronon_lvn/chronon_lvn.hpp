#pragma once

#include "chronon/numcore/linalg.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace chronon::chronon_lvn {

using numcore::Complex;
using numcore::ComplexMatrix;

// Density matrix in the energy eigenbasis: hermitian (1e-12), unit trace (1e-10),
// eigenvalues >= -1e-10. Construction through the factories below enforces these.
class DensityMatrix {
public:
    // Errors: chronon_lvn.InvalidDensity.
    static DensityMatrix from_matrix(const ComplexMatrix& rho);
    static DensityMatrix pure(const Eigen::VectorXcd& psi);
    // sum_k w_k |psi_k><psi_k| with w_k >= 0; vectors normalized first.
    static DensityMatrix mixture(const std::vector<double>& weights,
                                 const std::vector<Eigen::VectorXcd>& states);
    // Skips validation; used for evolved snapshots of a valid state.
    static DensityMatrix unchecked(ComplexMatrix rho) { return DensityMatrix(std::move(rho)); }

    const ComplexMatrix& matrix() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }
    Complex operator()(Eigen::Index r, Eigen::Index s) const { return rho_(r, s); }
    Complex trace() const { return rho_.trace(); }
    double min_eigenvalue() const;

private:
    explicit DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {}
    ComplexMatrix rho_;
};

// omega_rs = (E_r - E_s) / hbar; antisymmetric with zero diagonal.
class SpectralGaps {
public:
    SpectralGaps(const Eigen::VectorXd& energies, double hbar);
    const Eigen::MatrixXd& omega() const { return omega_; }
    Eigen::Index dim() const { return omega_.rows(); }

private:
    Eigen::MatrixXd omega_;
};

// rho_rs -> rho_rs / (1 + i omega_rs tau); diagonal untouched.
DensityMatrix lvn_step(const DensityMatrix& rho, const SpectralGaps& gaps, double tau);

// [1 + i omega_rs tau]^(-k) rho_rs(0) elementwise.
DensityMatrix evolve_to(const DensityMatrix& rho0, const SpectralGaps& gaps, double tau,
                        long long k);

struct Rates {
    Eigen::MatrixXd gamma;  // ln(1 + omega^2 tau^2) / (2 tau), symmetric, >= 0
    Eigen::MatrixXd nu;     // arctan(omega tau) / tau, antisymmetric
};
Rates rates(const SpectralGaps& gaps, double tau);

// Decay rate of one off-diagonal element with gap delta_E.
double decoherence_rate(double delta_E, double hbar, double tau);

struct DampingSample {
    double t;
    double ratio;  // |rho_01(t)| / |rho_01(0)|
};

// Samples at t = k tau with k = 0, stride, 2 stride, ... up to t_max.
// Errors: chronon_lvn.InvalidParams (t_max <= 0, tau <= 0, samples < 2).
std::vector<DampingSample> damping_series(double delta_E, double hbar, double tau, double t_max,
                                       std::size_t samples);

}  // namespace chronon::chronon_lvn
