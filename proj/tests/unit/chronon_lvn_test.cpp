#include "chronon/chronon_lvn/chronon_lvn.hpp"
#include "chronon/numcore/error.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace chronon;
using namespace chronon::chronon_lvn;

TEST_CASE("rates: gamma symmetric and nonnegative, nu antisymmetric") {
    Eigen::VectorXd E(4);
    E << -1.0, 0.2, 0.5, 3.0;
    const SpectralGaps gaps(E, 0.8);
    const auto r = rates(gaps, 0.3);
    CHECK((r.gamma - r.gamma.transpose()).norm() == 0.0);
    CHECK((r.nu + r.nu.transpose()).norm() == 0.0);
    CHECK(r.gamma.minCoeff() >= 0.0);
    for (int i = 0; i < 4; ++i) CHECK(r.gamma(i, i) == 0.0);
    const double w = (3.0 + 1.0) / 0.8;
    CHECK(r.gamma(0, 3) == doctest::Approx(std::log1p(w * w * 0.09) / 0.6));
    CHECK(decoherence_rate(4.0, 0.8, 0.3) == doctest::Approx(r.gamma(0, 3)));
}

TEST_CASE("closed-form evolution of a pure two-level state") {
    Eigen::VectorXcd psi(2);
    psi << 1.0, Complex(0.0, 1.0);
    const auto rho0 = DensityMatrix::pure(psi);
    Eigen::VectorXd E(2);
    E << 0.0, 2.0;
    const SpectralGaps gaps(E, 1.0);
    const auto rho = evolve_to(rho0, gaps, 0.1, 40);
    const Complex expect = rho0(0, 1) * std::pow(Complex(1.0, -2.0 * 0.1), -40);
    CHECK(std::abs(rho(0, 1) - expect) < 1e-14);
    CHECK(std::abs(rho(1, 0) - std::conj(expect)) < 1e-14);
}

TEST_CASE("density factories validate their input") {
    Eigen::MatrixXcd bad(2, 2);
    bad << 0.5, 0.1, 0.3, 0.5;
    try {
        DensityMatrix::from_matrix(bad);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "chronon_lvn.InvalidDensity");
    }
    Eigen::MatrixXcd neg(2, 2);
    neg << 1.5, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS(DensityMatrix::from_matrix(neg), Error);
    CHECK_THROWS_AS(DensityMatrix::mixture({-1.0}, {Eigen::VectorXcd::Ones(2)}), Error);
}

TEST_CASE("damping series samples the exponential at multiples of tau") {
    const auto s = damping_series(1.0, 1.0, 0.2, 10.0, 11);
    REQUIRE(s.size() >= 2);
    CHECK(s.front().t == 0.0);
    CHECK(s.front().ratio == 1.0);
    const double g = decoherence_rate(1.0, 1.0, 0.2);
    for (const auto& x : s) {
        CHECK(std::fmod(x.t / 0.2 + 0.5, 1.0) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(x.ratio == doctest::Approx(std::exp(-g * x.t)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(damping_series(1.0, 1.0, -0.2, 10.0, 11), Error);
    CHECK_THROWS_AS(damping_series(1.0, 1.0, 0.2, 0.0, 11), Error);
    CHECK_THROWS_AS(damping_series(1.0, 1.0, 0.2, 10.0, 1), Error);
}

TEST_CASE("long runs approach the diagonal ensemble") {
    std::mt19937_64 rng(2);
    const auto rho0 = DensityMatrix::pure(test::random_state(3, rng));
    Eigen::VectorXd E(3);
    E << 0.0, 1.0, 2.5;
    const SpectralGaps gaps(E, 1.0);
    const auto late = evolve_to(rho0, gaps, 0.5, 2000);
    const Eigen::MatrixXcd off = late.matrix() - Eigen::MatrixXcd(late.matrix().diagonal().asDiagonal());
    CHECK(off.norm() < 1e-10);
    CHECK(late.min_eigenvalue() >= 0.0);
}
