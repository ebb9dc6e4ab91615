// Data-parallel inner loops. Every kernel has a plain serial reference
// (`*_serial`) kept for testing and an OpenMP version (`*_omp`). The OpenMP
// versions produce output independent of the thread count: reductions are
// split into fixed-size blocks whose partial sums are combined pairwise.

#pragma once

#include "chronon/numcore/quadrature.hpp"

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace chronon::kernels {

using Complex = std::complex<double>;

inline constexpr std::size_t kReductionBlock = 4096;

int max_threads();
void set_threads(int n);

// out[m] = sum_i coeff[i] * exp(-i * freq[i] * t[m])
void exp_sum_serial(std::span<const Complex> coeff, std::span<const double> freq,
                    std::span<const double> t, std::span<Complex> out);
void exp_sum_omp(std::span<const Complex> coeff, std::span<const double> freq,
                 std::span<const double> t, std::span<Complex> out);

// Two coefficient sets sharing the same frequencies (value and x-derivative).
void exp_sum2_serial(std::span<const Complex> c0, std::span<const Complex> c1,
                     std::span<const double> freq, std::span<const double> t,
                     std::span<Complex> out0, std::span<Complex> out1);
void exp_sum2_omp(std::span<const Complex> c0, std::span<const Complex> c1,
                  std::span<const double> freq, std::span<const double> t,
                  std::span<Complex> out0, std::span<Complex> out1);

// sum_i term(i), pairwise over all terms.
template <typename T, typename F>
T reduce_serial(std::size_t n, F&& term) {
    std::vector<T> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = term(i);
    return numcore::pairwise_sum(std::span<const T>(terms));
}

// Blocked reduction; block partials are computed in parallel.
template <typename T, typename F>
T reduce_omp(std::size_t n, F&& term) {
    const std::size_t nblocks = (n + kReductionBlock - 1) / kReductionBlock;
    std::vector<T> partial(nblocks);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReductionBlock;
        const std::size_t hi = std::min(n, lo + kReductionBlock);
        std::vector<T> terms(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) terms[i - lo] = term(i);
        partial[static_cast<std::size_t>(b)] = numcore::pairwise_sum(std::span<const T>(terms));
    }
    return numcore::pairwise_sum(std::span<const T>(partial));
}

// Elementwise a[i] *= f[i].
void hadamard_scale_serial(std::span<Complex> a, std::span<const Complex> f);
void hadamard_scale_omp(std::span<Complex> a, std::span<const Complex> f);

// Dense n x n real matrix applied along one axis of an n^3 cube stored
// row-major as (i0 * n + i1) * n + i2: out[.., a, ..] = sum_b m[a * n + b] in[.., b, ..].
void axis_apply_serial(std::span<const double> m, std::size_t n, int axis,
                       std::span<const Complex> in, std::span<Complex> out);
void axis_apply_omp(std::span<const double> m, std::size_t n, int axis,
                    std::span<const Complex> in, std::span<Complex> out);

}  // namespace chronon::kernels
