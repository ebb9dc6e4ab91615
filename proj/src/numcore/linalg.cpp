#include "chronon/numcore/linalg.hpp"

#include "chronon/numcore/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace chronon::numcore {

double hermiticity_defect(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    const double norm = m.norm();
    if (norm == 0.0) return 0.0;
    return (m - m.adjoint()).norm() / norm;
}

bool all_finite(const ComplexMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const Complex z = m(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    }
    return true;
}

void require_valid(const ComplexMatrix& m) {
    if (m.rows() < 1 || m.cols() < 1) {
        throw Error("numcore", "ShapeError", "matrix must have at least one row and column");
    }
    if (!all_finite(m)) {
        throw Error("numcore", "NonFinite", "matrix contains NaN or Inf entries");
    }
}

ComplexMatrix EigenSystem::reconstruct() const {
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

double EigenSystem::orthonormality_defect() const {
    const ComplexMatrix g = eigenvectors.adjoint() * eigenvectors;
    return (g - ComplexMatrix::Identity(g.rows(), g.cols())).norm();
}

ComplexVector EigenSystem::to_eigenbasis(const ComplexVector& v) const {
    return eigenvectors.adjoint() * v;
}

ComplexVector EigenSystem::from_eigenbasis(const ComplexVector& c) const {
    return eigenvectors * c;
}

EigenSystem eig_hermitian(const ComplexMatrix& m) {
    require_valid(m);
    if (m.rows() != m.cols()) {
        throw Error("numcore", "NonHermitianInput", "matrix is not square");
    }
    if (m.rows() > kMaxEigenDimension) {
        throw Error("numcore", "DimensionError",
                    "dimension " + std::to_string(m.rows()) + " exceeds " +
                        std::to_string(kMaxEigenDimension));
    }
    const double defect = hermiticity_defect(m);
    if (defect > kHermiticityTolerance) {
        throw Error("numcore", "NonHermitianInput",
                    "relative hermiticity defect " + std::to_string(defect));
    }
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error("numcore", "ConvergenceFailure", "hermitian eigensolver did not converge");
    }
    return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix spectral_function(const EigenSystem& es, const std::function<double(double)>& f) {
    RealVector fl(es.dim());
    for (Eigen::Index i = 0; i < es.dim(); ++i) {
        fl(i) = f(es.eigenvalues(i));
        if (!std::isfinite(fl(i))) {
            throw Error("numcore", "DomainError",
                        "map undefined at eigenvalue " + std::to_string(es.eigenvalues(i)));
        }
    }
    return es.eigenvectors * fl.cast<Complex>().asDiagonal() * es.eigenvectors.adjoint();
}

ComplexMatrix spectral_function(const ComplexMatrix& m, const std::function<double(double)>& f) {
    return spectral_function(eig_hermitian(m), f);
}

ComplexMatrix spectral_function_complex(const EigenSystem& es,
                                        const std::function<Complex(double)>& f) {
    ComplexVector fl(es.dim());
    for (Eigen::Index i = 0; i < es.dim(); ++i) {
        fl(i) = f(es.eigenvalues(i));
        if (!std::isfinite(fl(i).real()) || !std::isfinite(fl(i).imag())) {
            throw Error("numcore", "DomainError",
                        "map undefined at eigenvalue " + std::to_string(es.eigenvalues(i)));
        }
    }
    return es.eigenvectors * fl.asDiagonal() * es.eigenvectors.adjoint();
}

}  // namespace chronon::numcore
