// Gauss-Legendre quadrature and reproducible summation.

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace chronon::numcore {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double a = 0.0;
    double b = 0.0;

    std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree <= 2n-1.
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

// `panels` equal panels of `n`-point Gauss-Legendre on [a, b].
QuadratureRule composite_gauss_legendre(std::size_t panels, std::size_t n, double a, double b);

// Composite rule over consecutive intervals [breaks[i], breaks[i+1]], each split
// into panels no wider than max_panel_width.
QuadratureRule composite_gauss_legendre(std::span<const double> breaks, double max_panel_width,
                                        std::size_t n);

// Sum w_i f(x_i). Throws numcore.NonFiniteSample if f is NaN/Inf at a node.
std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                               const QuadratureRule& rule);
double integrate_real(const std::function<double(double)>& f, const QuadratureRule& rule);

// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> xs);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs);

}  // namespace chronon::numcore
