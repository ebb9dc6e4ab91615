// Dense complex linear algebra shared by the evolution engines.
//
// Hermitian inputs are validated against a relative tolerance and then
// symmetrized before decomposition. Matrix functions are always evaluated in
// the eigenbasis: f(M) = U diag(f(lambda)) U^dagger.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>

namespace chronon::numcore {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermiticityTolerance = 1e-12;
inline constexpr Eigen::Index kMaxEigenDimension = 4096;

// Frobenius norm of M - M^dagger relative to the norm of M (0 for M = 0).
double hermiticity_defect(const ComplexMatrix& m);

bool all_finite(const ComplexMatrix& m);

// Throws numcore.NonFinite if any entry is NaN/Inf, numcore.ShapeError for an
// empty matrix.
void require_valid(const ComplexMatrix& m);

struct EigenSystem {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors; // orthonormal columns

    Eigen::Index dim() const { return eigenvalues.size(); }

    // U diag(lambda) U^dagger
    ComplexMatrix reconstruct() const;
    // ||U^dagger U - I||_F
    double orthonormality_defect() const;
    // Coefficients of v in the eigenbasis (U^dagger v), and back.
    ComplexVector to_eigenbasis(const ComplexVector& v) const;
    ComplexVector from_eigenbasis(const ComplexVector& c) const;
};

// Errors: numcore.NonHermitianInput, numcore.ConvergenceFailure,
// numcore.DimensionError (above kMaxEigenDimension).
EigenSystem eig_hermitian(const ComplexMatrix& m);

// U diag(f(lambda)) U^dagger for a real map. Throws numcore.DomainError when f
// yields a non-finite value on some eigenvalue.
ComplexMatrix spectral_function(const ComplexMatrix& m, const std::function<double(double)>& f);
ComplexMatrix spectral_function(const EigenSystem& es, const std::function<double(double)>& f);

// Same with a complex-valued map; the result is normal but generally not hermitian.
ComplexMatrix spectral_function_complex(const EigenSystem& es,
                                        const std::function<Complex(double)>& f);

}  // namespace chronon::numcore
