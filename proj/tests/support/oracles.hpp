// Reference computations shared by the unit and acceptance tests. Nothing
// here calls into the library's own eigen or stepping code.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace chronon::test {

using Complex = std::complex<double>;

// GUE-like hermitian matrix with spectral radius `radius`.
inline Eigen::MatrixXcd random_hermitian(Eigen::Index n, std::mt19937_64& rng, double radius = 1.0) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) a(r, c) = {g(rng), g(rng)};
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    return h * (radius / es.eigenvalues().cwiseAbs().maxCoeff());
}

inline Eigen::VectorXcd random_state(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = {g(rng), g(rng)};
    return v.normalized();
}

// exp(-i H t / hbar) psi by Pade scaling and squaring.
inline Eigen::VectorXcd exact_propagate(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& psi,
                                        double t, double hbar = 1.0) {
    const Eigen::MatrixXcd A = Complex(0.0, -t / hbar) * H;
    return A.exp() * psi;
}

// Retarded recurrence (1 + i tau H / hbar) psi_k = psi_{k-1} by dense LU.
class RetardedReference {
public:
    RetardedReference(const Eigen::MatrixXcd& H, double tau, double hbar = 1.0)
        : lu_(Eigen::MatrixXcd::Identity(H.rows(), H.cols()) + Complex(0.0, tau / hbar) * H) {}
    Eigen::VectorXcd operator()(const Eigen::VectorXcd& prev) const { return lu_.solve(prev); }

private:
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

// Two-level cycle statistics for psi(t) = a0 + a1 exp(-i D t / hbar), |a0|^2 + |a1|^2 = 1,
// over the cycle centred on t = 0. Density (1 / T)(1 + 2 s cos(w t - alpha)), s = |a0 a1|,
// alpha = arg(conj(a0) a1), w = D / hbar.
struct TwoLevelMoments {
    double delta_E_sq;
    double delta_t_sq;
    double edge_fraction;
};

inline TwoLevelMoments two_level_moments(Complex a0, Complex a1, double D, double hbar) {
    const double p = std::norm(a0);
    const double q = std::norm(a1);
    const double s = std::abs(a0) * std::abs(a1);
    const double alpha = std::arg(std::conj(a0) * a1);
    const double w = D / hbar;
    const double T = 2.0 * std::numbers::pi / w;
    const double mean = 2.0 * s * std::sin(alpha) / w;
    const double second = T * T / 12.0 - 4.0 * s * std::cos(alpha) / (w * w);
    return {p * q * D * D, second - mean * mean, 1.0 - 2.0 * s * std::cos(alpha)};
}

// Least-squares slope of log(err) against log(h).
template <typename Range>
double fitted_order(const Range& h, const Range& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace chronon::test
