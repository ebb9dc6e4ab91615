#include "chronon/discretespec/discretespec.hpp"
#include "chronon/numcore/error.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace chronon;
using namespace chronon::discretespec;

TEST_CASE("Poincare cycle from commensurate spacings") {
    const auto c = poincare_cycle({0.0, 0.6, 1.5});
    CHECK(c.D == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(c.T == doctest::Approx(2.0 * std::numbers::pi / 0.3).epsilon(1e-12));
    CHECK(c.multiples == std::vector<long long>{2, 5});

    const auto h = poincare_cycle({1.0, 1.0 + 2.0 / 7.0, 1.0 + 3.0 / 7.0}, 2.0);
    CHECK(h.D == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(h.T == doctest::Approx(2.0 * std::numbers::pi * 2.0 * 7.0).epsilon(1e-12));
}

TEST_CASE("incommensurate spectra have no cycle") {
    try {
        poincare_cycle({0.0, 1.0, std::sqrt(2.0)});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "discretespec.Incommensurate");
    }
}

TEST_CASE("the packet returns to itself after one cycle") {
    const auto sys = make_system({0.0, 0.6, 1.5}, {1.0, Complex(0.5, 0.5), -0.3});
    const auto c = poincare_cycle(sys.levels);
    for (double t : {0.0, 0.7, -3.1}) CHECK(std::abs(sys.psi(t + c.T) - sys.psi(t)) < 1e-12);
}

TEST_CASE("saw-tooth time is linear inside a cycle and jumps at its edge") {
    const double T = 4.0, g = 0.5;
    CHECK(sawtooth(g + 1.0, T, g) == g + 1.0);
    CHECK(sawtooth(g + T / 2, T, g) == g + T / 2);
    CHECK(sawtooth(g + T / 2 + 1e-9, T, g) == doctest::Approx(g - T / 2 + 1e-9));
    CHECK(sawtooth(g - T / 2, T, g) == g + T / 2);
}

TEST_CASE("two-level moments match the closed form") {
    const auto sys = make_system({0.0, 1.0}, {1.0, 1.0});
    const auto r = uncertainty_pair(sys);
    const auto m = test::two_level_moments(sys.amplitudes[0], sys.amplitudes[1], 1.0, 1.0);
    CHECK(r.product_sq == doctest::Approx(m.delta_E_sq * m.delta_t_sq).epsilon(1e-10));
    CHECK(r.edge_fraction == doctest::Approx(m.edge_fraction).epsilon(1e-10));
    // Equal weights: edge density vanishes, so the commutator bound is hbar^2 / 4.
    CHECK(r.rhs_commutator == doctest::Approx(0.25));
    CHECK(r.commutator_holds(0.0));
    CHECK_FALSE(r.linear_holds(0.0));
}

TEST_CASE("commutator bound holds on many-level packets") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        const int n = 2 + it % 4;
        std::vector<double> levels;
        std::vector<Complex> a;
        int e = 0;
        for (int k = 0; k < n; ++k) {
            e += 1 + static_cast<int>(1.5 * (u(rng) + 1.0));
            levels.push_back(0.7 * e);
            a.emplace_back(u(rng), u(rng));
        }
        const auto sys = make_system(levels, a);
        const auto c = poincare_cycle(levels);
        const auto r = uncertainty_pair(sys, c, 0.4 * u(rng) * c.T);
        CHECK(r.commutator_holds(1e-10));
        CHECK(r.edge_fraction >= 0.0);
    }
}

TEST_CASE("cycle samples span the requested window") {
    const auto sys = make_system({0.0, 2.0}, {1.0, 0.5});
    const auto c = poincare_cycle(sys.levels);
    const auto s = cycle_series(sys, c, 101, 2.0);
    REQUIRE(s.size() == 101);
    CHECK(s.front().t == doctest::Approx(-c.T));
    CHECK(s.back().t == doctest::Approx(c.T));
    for (const auto& x : s) {
        CHECK(x.density == doctest::Approx(std::norm(sys.psi(x.t))));
        CHECK(x.t_hat == sawtooth(x.t, c.T));
    }
}

TEST_CASE("invalid systems are refused") {
    CHECK_THROWS_AS(make_system({1.0, 0.5}, {1.0, 1.0}), Error);
    CHECK_THROWS_AS(make_system({0.0, 1.0}, {1.0}), Error);
    const auto sys = make_system({0.0, 1.0}, {1.0, 1.0});
    const double T = 2.0 * std::numbers::pi;
    CHECK_THROWS_AS(uncertainty_pair(sys, T), Error);
}
