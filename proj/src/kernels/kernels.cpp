#include "chronon/kernels/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <stdexcept>

namespace chronon::kernels {

int max_threads() { return omp_get_max_threads(); }

void set_threads(int n) {
    if (n > 0) omp_set_num_threads(n);
}

namespace {

void check_sizes(std::size_t nc, std::size_t nf, std::size_t nt, std::size_t no) {
    if (nc != nf || nt != no) throw std::invalid_argument("exp_sum: size mismatch");
}

inline Complex row_sum(std::span<const Complex> coeff, std::span<const double> freq, double t) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        const double ph = freq[i] * t;
        acc += coeff[i] * Complex(std::cos(ph), -std::sin(ph));
    }
    return acc;
}

}  // namespace

void exp_sum_serial(std::span<const Complex> coeff, std::span<const double> freq,
                    std::span<const double> t, std::span<Complex> out) {
    check_sizes(coeff.size(), freq.size(), t.size(), out.size());
    for (std::size_t m = 0; m < t.size(); ++m) out[m] = row_sum(coeff, freq, t[m]);
}

void exp_sum_omp(std::span<const Complex> coeff, std::span<const double> freq,
                 std::span<const double> t, std::span<Complex> out) {
    check_sizes(coeff.size(), freq.size(), t.size(), out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t m = 0; m < static_cast<std::ptrdiff_t>(t.size()); ++m) {
        out[static_cast<std::size_t>(m)] = row_sum(coeff, freq, t[static_cast<std::size_t>(m)]);
    }
}

void exp_sum2_serial(std::span<const Complex> c0, std::span<const Complex> c1,
                     std::span<const double> freq, std::span<const double> t,
                     std::span<Complex> out0, std::span<Complex> out1) {
    check_sizes(c0.size(), freq.size(), t.size(), out0.size());
    check_sizes(c1.size(), freq.size(), t.size(), out1.size());
    for (std::size_t m = 0; m < t.size(); ++m) {
        Complex a0{0.0, 0.0};
        Complex a1{0.0, 0.0};
        for (std::size_t i = 0; i < freq.size(); ++i) {
            const double ph = freq[i] * t[m];
            const Complex e(std::cos(ph), -std::sin(ph));
            a0 += c0[i] * e;
            a1 += c1[i] * e;
        }
        out0[m] = a0;
        out1[m] = a1;
    }
}

void exp_sum2_omp(std::span<const Complex> c0, std::span<const Complex> c1,
                  std::span<const double> freq, std::span<const double> t,
                  std::span<Complex> out0, std::span<Complex> out1) {
    check_sizes(c0.size(), freq.size(), t.size(), out0.size());
    check_sizes(c1.size(), freq.size(), t.size(), out1.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t mm = 0; mm < static_cast<std::ptrdiff_t>(t.size()); ++mm) {
        const auto m = static_cast<std::size_t>(mm);
        Complex a0{0.0, 0.0};
        Complex a1{0.0, 0.0};
        for (std::size_t i = 0; i < freq.size(); ++i) {
            const double ph = freq[i] * t[m];
            const Complex e(std::cos(ph), -std::sin(ph));
            a0 += c0[i] * e;
            a1 += c1[i] * e;
        }
        out0[m] = a0;
        out1[m] = a1;
    }
}

void hadamard_scale_serial(std::span<Complex> a, std::span<const Complex> f) {
    if (a.size() != f.size()) throw std::invalid_argument("hadamard_scale: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= f[i];
}

void hadamard_scale_omp(std::span<Complex> a, std::span<const Complex> f) {
    if (a.size() != f.size()) throw std::invalid_argument("hadamard_scale: size mismatch");
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(a.size()); ++i) {
        a[static_cast<std::size_t>(i)] *= f[static_cast<std::size_t>(i)];
    }
}

namespace {

void check_axis(std::span<const double> m, std::size_t n, int axis, std::size_t nin,
                std::size_t nout) {
    if (m.size() != n * n || nin != n * n * n || nout != nin || axis < 0 || axis > 2) {
        throw std::invalid_argument("axis_apply: size mismatch");
    }
}

// One line: the n points sharing the two coordinates other than `axis`.
inline void axis_line(std::span<const double> m, std::size_t n, std::size_t base,
                      std::size_t stride, std::span<const Complex> in, std::span<Complex> out) {
    for (std::size_t a = 0; a < n; ++a) {
        Complex acc{0.0, 0.0};
        const double* row = m.data() + a * n;
        for (std::size_t b = 0; b < n; ++b) acc += row[b] * in[base + b * stride];
        out[base + a * stride] = acc;
    }
}

inline void line_origin(std::size_t line, std::size_t n, int axis, std::size_t& base,
                        std::size_t& stride) {
    const std::size_t u = line / n;
    const std::size_t v = line % n;
    switch (axis) {
        case 0: base = u * n + v; stride = n * n; break;
        case 1: base = u * n * n + v; stride = n; break;
        default: base = (u * n + v) * n; stride = 1; break;
    }
}

}  // namespace

void axis_apply_serial(std::span<const double> m, std::size_t n, int axis,
                       std::span<const Complex> in, std::span<Complex> out) {
    check_axis(m, n, axis, in.size(), out.size());
    for (std::size_t line = 0; line < n * n; ++line) {
        std::size_t base = 0;
        std::size_t stride = 0;
        line_origin(line, n, axis, base, stride);
        axis_line(m, n, base, stride, in, out);
    }
}

void axis_apply_omp(std::span<const double> m, std::size_t n, int axis,
                    std::span<const Complex> in, std::span<Complex> out) {
    check_axis(m, n, axis, in.size(), out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(n * n); ++l) {
        std::size_t base = 0;
        std::size_t stride = 0;
        line_origin(static_cast<std::size_t>(l), n, axis, base, stride);
        axis_line(m, n, base, stride, in, out);
    }
}

}  // namespace chronon::kernels
