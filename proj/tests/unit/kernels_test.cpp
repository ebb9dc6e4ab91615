#include "chronon/kernels/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace chronon::kernels;

TEST_CASE("OpenMP kernels reproduce their serial references") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t nodes = 777, times = 93;
    std::vector<Complex> c0(nodes), c1(nodes);
    std::vector<double> freq(nodes), t(times);
    for (std::size_t i = 0; i < nodes; ++i) {
        c0[i] = {u(rng), u(rng)};
        c1[i] = {u(rng), u(rng)};
        freq[i] = 3.0 * u(rng);
    }
    for (std::size_t m = 0; m < times; ++m) t[m] = 0.37 * static_cast<double>(m);

    std::vector<Complex> a(times), b(times), a1(times), b1(times);
    exp_sum_serial(c0, freq, t, a);
    exp_sum_omp(c0, freq, t, b);
    for (std::size_t m = 0; m < times; ++m) CHECK(std::abs(a[m] - b[m]) <= 1e-12);

    exp_sum2_serial(c0, c1, freq, t, a, a1);
    exp_sum2_omp(c0, c1, freq, t, b, b1);
    for (std::size_t m = 0; m < times; ++m) {
        CHECK(std::abs(a[m] - b[m]) <= 1e-12);
        CHECK(std::abs(a1[m] - b1[m]) <= 1e-12);
    }
}

TEST_CASE("blocked reduction is independent of the thread count") {
    auto term = [](std::size_t i) { return std::sin(0.001 * static_cast<double>(i)); };
    const std::size_t n = 3 * kReductionBlock + 17;
    const int saved = max_threads();
    set_threads(1);
    const double one = reduce_omp<double>(n, term);
    set_threads(4);
    const double four = reduce_omp<double>(n, term);
    set_threads(saved);
    CHECK(one == four);
    CHECK(std::abs(one - reduce_serial<double>(n, term)) < 1e-10);
}

TEST_CASE("hadamard scaling and axis application match a direct loop") {
    const std::size_t n = 6;
    std::vector<double> m(n * n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m[r * n + c] = std::cos(static_cast<double>(r * 7 + c));
    std::vector<Complex> in(n * n * n);
    for (std::size_t q = 0; q < in.size(); ++q) in[q] = {std::sin(0.3 * q), std::cos(0.2 * q)};

    for (int axis = 0; axis < 3; ++axis) {
        std::vector<Complex> s(in.size()), p(in.size());
        axis_apply_serial(m, n, axis, in, s);
        axis_apply_omp(m, n, axis, in, p);
        std::size_t idx[3];
        for (idx[0] = 0; idx[0] < n; ++idx[0])
            for (idx[1] = 0; idx[1] < n; ++idx[1])
                for (idx[2] = 0; idx[2] < n; ++idx[2]) {
                    Complex ref = 0.0;
                    std::size_t j[3] = {idx[0], idx[1], idx[2]};
                    for (std::size_t b = 0; b < n; ++b) {
                        j[axis] = b;
                        ref += m[idx[axis] * n + b] * in[(j[0] * n + j[1]) * n + j[2]];
                    }
                    const std::size_t q = (idx[0] * n + idx[1]) * n + idx[2];
                    CHECK(std::abs(s[q] - ref) < 1e-13);
                    CHECK(s[q] == p[q]);
                }
    }

    std::vector<Complex> x(100, Complex(1.0, 1.0)), y(100, Complex(1.0, 1.0));
    std::vector<Complex> f(100, Complex(0.0, 2.0));
    hadamard_scale_serial(x, f);
    hadamard_scale_omp(y, f);
    CHECK(x == y);
    CHECK(x[5] == Complex(-2.0, 2.0));
}
