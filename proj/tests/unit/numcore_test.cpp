#include "chronon/numcore/error.hpp"
#include "chronon/numcore/linalg.hpp"
#include "chronon/numcore/quadrature.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace chronon;
using namespace chronon::numcore;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
    for (std::size_t n : {1u, 2u, 5u, 16u}) {
        const auto rule = gauss_legendre(n, -0.5, 2.0);
        const int deg = static_cast<int>(2 * n - 1);
        const double got = integrate_real([&](double x) { return std::pow(x, deg); }, rule);
        const double exact = (std::pow(2.0, deg + 1) - std::pow(-0.5, deg + 1)) / (deg + 1);
        CHECK(got == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("composite rule over breakpoints respects panel width") {
    const std::vector<double> breaks{0.0, 1.0, 4.0};
    const auto rule = composite_gauss_legendre(breaks, 0.5, 8);
    CHECK(rule.size() == (2 + 6) * 8);
    CHECK(integrate_real([](double x) { return std::exp(-x); }, rule) ==
          doctest::Approx(1.0 - std::exp(-4.0)).epsilon(1e-14));
}

TEST_CASE("integrate rejects non-finite samples") {
    const auto rule = gauss_legendre(4, 0.0, 1.0);
    try {
        integrate_real([](double) { return std::numeric_limits<double>::quiet_NaN(); }, rule);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "numcore.NonFiniteSample");
    }
}

TEST_CASE("pairwise summation is order-defined and accurate") {
    std::vector<double> xs(1 << 20, 0.1);
    CHECK(std::abs(pairwise_sum(xs) - 0.1 * xs.size()) < 1e-9);
}

TEST_CASE("hermitian eigensystem reconstructs its input") {
    std::mt19937_64 rng(3);
    for (Eigen::Index n : {1, 3, 17}) {
        const Eigen::MatrixXcd h = test::random_hermitian(n, rng, 4.0);
        const auto es = eig_hermitian(h);
        CHECK(es.orthonormality_defect() < 1e-12);
        CHECK((es.reconstruct() - h).norm() < 1e-12 * h.norm() * n);
        for (Eigen::Index i = 1; i < n; ++i) CHECK(es.eigenvalues(i - 1) <= es.eigenvalues(i));
        const Eigen::VectorXcd v = test::random_state(n, rng);
        CHECK((es.from_eigenbasis(es.to_eigenbasis(v)) - v).norm() < 1e-13);
    }
}

TEST_CASE("non-hermitian input is refused") {
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, 2.0, 0.0, 1.0;
    CHECK(hermiticity_defect(m) > 0.5);
    try {
        eig_hermitian(m);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "numcore.NonHermitianInput");
    }
}

TEST_CASE("spectral functions compose like scalar functions") {
    std::mt19937_64 rng(5);
    const Eigen::MatrixXcd h = test::random_hermitian(6, rng, 1.0);
    const Eigen::MatrixXcd p = h * h + Eigen::MatrixXcd::Identity(6, 6);
    const auto root = spectral_function(p, [](double x) { return std::sqrt(x); });
    CHECK((root * root - p).norm() < 1e-12);
    const auto es = eig_hermitian(h);
    const auto u = spectral_function_complex(es, [](double x) { return std::exp(Complex(0.0, -x)); });
    const Eigen::MatrixXcd ref = (Complex(0.0, -1.0) * h).exp();
    CHECK((u - ref).norm() < 1e-12);
    try {
        spectral_function(h, [](double x) { return std::log(x); });
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "numcore.DomainError");
    }
}
