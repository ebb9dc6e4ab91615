// Klein-Gordon position operators in momentum space (natural units, c = 1).
//
// States live on a uniform periodic n^3 momentum grid with the invariant
// measure d^3p / p0, p0 = sqrt(p^2 + m0^2). On that measure i grad_p splits as
//   i grad_p = x_h + i y,   x_h = i grad_p - (i/2) p / p0^2 (hermitian),
//                           y   = p / (2 p0^2)              (real multiplier),
// so <i grad_p> = alpha + i beta with alpha = <x_h>, beta = <y>.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace chronon::kg_position {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;

inline constexpr double kSurfaceDecay = 1e-10;
// A sixth-order stencil that agrees with the spectral derivative to 1% sees a
// band well inside Nyquist, where the spectral result is converged.
inline constexpr double kResolutionTolerance = 1e-2;

// n points per axis at p = -half_width + i h, h = 2 half_width / n (periodic).
struct MomentumGrid {
    std::size_t n = 64;
    double half_width = 1.0;

    double spacing() const { return 2.0 * half_width / static_cast<double>(n); }
    double coord(std::size_t i) const { return -half_width + spacing() * static_cast<double>(i); }
    std::size_t size() const { return n * n * n; }
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * n + j) * n + k;
    }
    bool operator==(const MomentumGrid&) const = default;
};

struct MomentumPacket3D {
    MomentumGrid grid;
    double mass = 1.0;
    std::vector<Complex> phi;
};

struct GaussianShape {
    Vec3 center = Vec3::Zero();     // mean momentum
    Vec3 widths = Vec3::Constant(0.2);  // sigma_p per axis (of |phi|^2)
    Vec3 shift = Vec3::Zero();      // multiplies phi by exp(-i p . shift)
};

// Gaussian amplitude normalized to (phi, phi) = 1 under d^3p / p0.
// Errors: kg_position.InvalidParams.
MomentumPacket3D gaussian_packet(const MomentumGrid& grid, double mass, const GaussianShape& shape);

// Grid half-width at which the Gaussian falls below kSurfaceDecay of its peak, padded by `margin`.
double grid_half_width_for(const GaussianShape& shape, double margin = 1.15);

// Errors: kg_position.GridMismatch.
Complex inner_product(const MomentumPacket3D& psi, const MomentumPacket3D& phi);

// max boundary |phi| / max |phi|.
double surface_ratio(const MomentumPacket3D& phi);
// Errors: kg_position.SurfaceTermViolation when surface_ratio > kSurfaceDecay.
void require_surface_decay(const MomentumPacket3D& phi);

// First-derivative matrix of the periodic trigonometric interpolant, n even:
// D_jk = (1/2)(-1)^(j-k) cot((j-k) pi / n) (2 pi / L), L = n h.
std::vector<double> spectral_derivative(std::size_t n, double length);
// Sixth-order central differences on the same periodic grid.
std::vector<double> fd6_derivative(std::size_t n, double h);

// d phi / d p_axis with the given line operator.
std::vector<Complex> derivative(const MomentumPacket3D& phi, const std::vector<double>& d,
                                int axis, bool parallel = true);

// <i grad_p> = alpha + i beta.
CVec3 position_expectation(const MomentumPacket3D& phi);

// (phi, x_h phi); the imaginary residue reports discrete hermiticity.
CVec3 newton_wigner_expectation(const MomentumPacket3D& phi);
// Real part of newton_wigner_expectation. Errors: kg_position.SurfaceTermViolation,
// kg_position.NonHermitian (imaginary residue > 1e-8).
Vec3 newton_wigner_mean(const MomentumPacket3D& phi);
// (i/2) int d^3p / p0 (phi* grad phi - phi grad phi*).
Vec3 newton_wigner_mean_bilinear(const MomentumPacket3D& phi);

// beta_j = < p_j / (2 p0^2) >. Errors: kg_position.SurfaceTermViolation.
Vec3 localization_sizes(const MomentumPacket3D& phi);

struct LocalizationReport {
    Vec3 alpha;
    Vec3 beta;
    Vec3 delta_alpha;
    Vec3 delta_beta;
    Eigen::Matrix3d rhs;    // (1/4) |< (delta_ij - 2 p_i p_j / p0^2) / p0^2 >|
    Eigen::Matrix3d slack;  // delta_alpha_i delta_beta_j - rhs_ij
    double resolution_defect = 0.0;  // spectral vs sixth-order second moments, relative

    bool holds(double tol = 0.0) const { return slack.minCoeff() >= -tol; }
};

// Errors: kg_position.SurfaceTermViolation, kg_position.ResolutionError.
LocalizationReport uncertainty_correlations(const MomentumPacket3D& phi);

// < [x_h_i, y_j] > from the grid operators, and the closed form
// (i/2) < (delta_ij - 2 p_i p_j / p0^2) / p0^2 > by direct quadrature.
Eigen::Matrix3cd commutator_expectation(const MomentumPacket3D& phi);
Eigen::Matrix3cd commutator_oracle(const MomentumPacket3D& phi);

}  // namespace chronon::kg_position
