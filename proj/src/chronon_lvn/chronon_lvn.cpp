#include "chronon/chronon_lvn/chronon_lvn.hpp"

#include "chronon/numcore/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace chronon::chronon_lvn {

namespace {

Error invalid_density(const std::string& what) {
    return Error("chronon_lvn", "InvalidDensity", what, ErrorKind::Config);
}

void require_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        throw Error("chronon_lvn", "InvalidParams", "tau must be positive and finite",
                    ErrorKind::Config);
    }
}

void require_match(const DensityMatrix& rho, const SpectralGaps& gaps) {
    if (rho.dim() != gaps.dim()) {
        throw Error("chronon_lvn", "DimensionMismatch", "density matrix and gaps differ in size",
                    ErrorKind::Config);
    }
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix& rho) {
    numcore::require_valid(rho);
    if (rho.rows() != rho.cols()) throw invalid_density("matrix must be square");
    if (numcore::hermiticity_defect(rho) > numcore::kHermiticityTolerance) {
        throw invalid_density("matrix is not hermitian");
    }
    ComplexMatrix h = 0.5 * (rho + rho.adjoint());
    if (std::abs(h.trace() - Complex(1.0, 0.0)) > 1e-10) {
        throw invalid_density("trace differs from 1");
    }
    DensityMatrix out(std::move(h));
    if (out.min_eigenvalue() < -1e-10) throw invalid_density("matrix is not positive semidefinite");
    return out;
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    const double n = psi.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw invalid_density("state vector has zero norm");
    const Eigen::VectorXcd u = psi / n;
    return DensityMatrix(u * u.adjoint());
}

DensityMatrix DensityMatrix::mixture(const std::vector<double>& weights,
                                     const std::vector<Eigen::VectorXcd>& states) {
    if (weights.empty() || weights.size() != states.size()) {
        throw invalid_density("weights and states must be non-empty and equal in number");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw invalid_density("mixture weights must be nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw invalid_density("mixture weights sum to zero");
    const Eigen::Index n = states.front().size();
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].size() != n) throw invalid_density("mixture states differ in dimension");
        const double norm = states[k].norm();
        if (!(norm > 0.0)) throw invalid_density("mixture state has zero norm");
        const Eigen::VectorXcd u = states[k] / norm;
        rho += (weights[k] / total) * (u * u.adjoint());
    }
    return DensityMatrix(std::move(rho));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

SpectralGaps::SpectralGaps(const Eigen::VectorXd& energies, double hbar) {
    if (!(hbar > 0.0)) {
        throw Error("chronon_lvn", "InvalidParams", "hbar must be positive", ErrorKind::Config);
    }
    const Eigen::Index n = energies.size();
    omega_.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index s = 0; s < n; ++s) omega_(r, s) = (energies(r) - energies(s)) / hbar;
    }
}

DensityMatrix lvn_step(const DensityMatrix& rho, const SpectralGaps& gaps, double tau) {
    require_tau(tau);
    require_match(rho, gaps);
    ComplexMatrix out = rho.matrix();
    const Eigen::Index n = out.rows();
    for (Eigen::Index s = 0; s < n; ++s) {
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == s) continue;
            out(r, s) /= Complex(1.0, gaps.omega()(r, s) * tau);
        }
    }
    return DensityMatrix::unchecked(std::move(out));
}

DensityMatrix evolve_to(const DensityMatrix& rho0, const SpectralGaps& gaps, double tau,
                        long long k) {
    require_tau(tau);
    require_match(rho0, gaps);
    if (k < 0) {
        throw Error("chronon_lvn", "InvalidParams", "k must be >= 0", ErrorKind::Config);
    }
    ComplexMatrix out = rho0.matrix();
    if (k == 0) return DensityMatrix::unchecked(std::move(out));
    const double kk = static_cast<double>(k);
    const Eigen::Index n = out.rows();
    for (Eigen::Index s = 0; s < n; ++s) {
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == s) continue;
            const double x = gaps.omega()(r, s) * tau;
            // (1 + i x)^(-k) = exp(-k (ln(1 + x^2) / 2 + i atan x))
            out(r, s) *= std::exp(-kk * Complex(0.5 * std::log1p(x * x), std::atan(x)));
        }
    }
    return DensityMatrix::unchecked(std::move(out));
}

Rates rates(const SpectralGaps& gaps, double tau) {
    require_tau(tau);
    const Eigen::Index n = gaps.dim();
    Rates out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index s = 0; s < n; ++s) {
            const double x = gaps.omega()(r, s) * tau;
            out.gamma(r, s) = 0.5 * std::log1p(x * x) / tau;
            out.nu(r, s) = std::atan(x) / tau;
        }
    }
    return out;
}

double decoherence_rate(double delta_E, double hbar, double tau) {
    require_tau(tau);
    const double x = delta_E / hbar * tau;
    return 0.5 * std::log1p(x * x) / tau;
}

std::vector<DampingSample> damping_series(double delta_E, double hbar, double tau, double t_max,
                                       std::size_t samples) {
    require_tau(tau);
    if (!(t_max > 0.0) || samples < 2) {
        throw Error("chronon_lvn", "InvalidParams", "need t_max > 0 and at least 2 samples",
                    ErrorKind::Config);
    }
    const auto last = static_cast<long long>(std::floor(t_max / tau));
    const long long stride = std::max<long long>(1, last / static_cast<long long>(samples - 1));
    const double x = delta_E / hbar * tau;
    const double log_mod = 0.5 * std::log1p(x * x);
    std::vector<DampingSample> out;
    for (long long k = 0; k <= last && out.size() < samples; k += stride) {
        out.push_back({tau * static_cast<double>(k), std::exp(-static_cast<double>(k) * log_mod)});
    }
    return out;
}

}  // namespace chronon::chronon_lvn
