#include "chronon/chronon_qm/chronon_qm.hpp"
#include "chronon/numcore/error.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace chronon;
using namespace chronon::chronon_qm;

namespace {

struct Fixture {
    std::mt19937_64 rng{17};
    Eigen::MatrixXcd Hm = test::random_hermitian(5, rng, 1.0);
    FiniteHamiltonian H{Hm, 1.3};
    State psi0 = test::random_state(5, rng);
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "single steps follow their defining recurrences") {
    const double tau = 0.2, th = tau / H.hbar();
    const State r = step(H, {tau, Scheme::Retarded}, psi0);
    CHECK((r + Complex(0.0, th) * (Hm * r) - psi0).norm() < 1e-13);
    const State a = step(H, {tau, Scheme::Advanced}, psi0);
    CHECK((a - (psi0 - Complex(0.0, th) * (Hm * psi0))).norm() < 1e-13);
    const State s = step(H, {tau, Scheme::Symmetric}, r, &psi0);
    CHECK((s - (psi0 - Complex(0.0, 2.0 * th) * (Hm * r))).norm() < 1e-13);
}

TEST_CASE_FIXTURE(Fixture, "symmetric step needs the earlier slice") {
    try {
        step(H, {0.1, Scheme::Symmetric}, psi0);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "chronon_qm.MissingSecondSlice");
    }
    State wrong = State::Ones(3);
    CHECK_THROWS_AS(step(H, {0.1, Scheme::Retarded}, wrong), Error);
}

TEST_CASE_FIXTURE(Fixture, "norm decays, grows or stays by scheme") {
    const auto r = evolve(H, {0.3, Scheme::Retarded}, psi0, 200);
    const auto a = evolve(H, {0.3, Scheme::Advanced}, psi0, 200);
    const auto s = evolve(H, {0.3, Scheme::Symmetric}, psi0, 200);
    for (std::size_t k = 1; k <= 200; ++k) {
        CHECK(r.norms[k] <= r.norms[k - 1]);
        CHECK(a.norms[k] >= a.norms[k - 1]);
        CHECK(s.norms[k] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE_FIXTURE(Fixture, "norm rates match per-mode decay") {
    const double tau = 0.4;
    const auto g = norm_rates(H, tau);
    const auto& es = H.eigensystem();
    for (Eigen::Index n = 0; n < H.dim(); ++n) {
        const State u = es.eigenvectors.col(n);
        const auto traj = evolve(H, {tau, Scheme::Retarded}, u, 10);
        CHECK(std::log(traj.norms[10]) / (10 * tau) == doctest::Approx(-g(n)).epsilon(1e-10));
    }
}

TEST_CASE_FIXTURE(Fixture, "occupations are conserved by every scheme up to per-mode factors") {
    const auto occ0 = occupations(H, psi0);
    CHECK(occ0.sum() == doctest::Approx(1.0));
    const auto s = evolve(H, {0.3, Scheme::Symmetric}, psi0, 50);
    CHECK((occupations(H, s.states.back()) - occ0).norm() < 1e-12);
}

TEST_CASE_FIXTURE(Fixture, "an Euler-seeded symmetric run carries a bounded alternating mode") {
    const auto s = evolve(H, {0.3, Scheme::Symmetric}, psi0, 2000, SymmetricSeed::Euler);
    double lo = 1e300, hi = 0.0;
    for (double n : s.norms) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    CHECK(hi > lo);
    CHECK(hi < 1.2);
    CHECK(lo > 0.8);
}

TEST_CASE_FIXTURE(Fixture, "equivalent Hamiltonians have the expected spectra") {
    const double tau = 0.5;
    const auto hs = equivalent_hamiltonian(H, tau, Scheme::Symmetric);
    const auto hr = equivalent_hamiltonian(H, tau, Scheme::Retarded);
    const auto ha = equivalent_hamiltonian(H, tau, Scheme::Advanced);
    CHECK((hs.matrix - hs.matrix.adjoint()).norm() < 1e-12);
    for (Eigen::Index n = 0; n < H.dim(); ++n) {
        CHECK(hr.values(n).imag() < 0.0);
        CHECK(ha.values(n).imag() > 0.0);
        CHECK(std::abs(hr.values(n).real() - ha.values(n).real()) < 1e-12);
    }
    // Small tau: all three approach H.
    const auto hsmall = equivalent_hamiltonian(H, 1e-5, Scheme::Retarded);
    CHECK((hsmall.matrix - Hm).norm() < 1e-4);
}

TEST_CASE_FIXTURE(Fixture, "arcsin form needs the spectrum inside the unit interval") {
    try {
        equivalent_hamiltonian(H, 2.0, Scheme::Symmetric);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "chronon_qm.SpectralRadiusExceeded");
    }
}

TEST_CASE_FIXTURE(Fixture, "exact evolution agrees with the matrix exponential") {
    CHECK((exact_evolution(H, psi0, 2.7) - test::exact_propagate(Hm, psi0, 2.7, 1.3)).norm() < 1e-12);
}

TEST_CASE("Caldirola-Kanai Hamiltonian scales kinetic and potential parts oppositely") {
    const UniformGrid grid{-1.0, 0.1, 21};
    std::vector<double> V(21);
    for (std::size_t i = 0; i < 21; ++i) V[i] = grid.x(i) * grid.x(i);
    const auto h0 = caldirola_kanai(grid, V, 0.3, 1.0, 1.0, 0.0);
    const auto h1 = caldirola_kanai(grid, V, 0.3, 1.0, 1.0, 2.0);
    CHECK((h0 - h0.adjoint()).norm() < 1e-14);
    CHECK(h1(3, 3).real() == doctest::Approx(std::exp(-0.6) / 0.01 + std::exp(0.6) * V[3]));
    CHECK(h1(3, 4).real() == doctest::Approx(-0.5 * std::exp(-0.6) / 0.01));
    CHECK_THROWS_AS(caldirola_kanai({0.0, 1.0, 2}, {0.0, 0.0}, 0.0, 1.0, 1.0, 0.0), Error);
}

TEST_CASE_FIXTURE(Fixture, "time-dependent stepping reduces to the constant case") {
    auto constant = [&](double) { return Hm; };
    for (Scheme s : {Scheme::Retarded, Scheme::Advanced, Scheme::Symmetric}) {
        const auto a = evolve(H, {0.1, s}, psi0, 30);
        const auto b = evolve_time_dependent(constant, H.hbar(), {0.1, s}, psi0, 30);
        CHECK((a.states.back() - b.states.back()).norm() < 1e-11);
    }
}
