#include "chronon/numcore/error.hpp"
#include "chronon/timeobs/statistics.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace chronon;
using namespace chronon::timeobs;

TEST_CASE("scattering states conserve flux for both dispersions") {
    const auto pot = PiecewiseConstantPotential({{0.0, 1.0, 0.8}, {1.0, 1.5, -0.4}, {1.5, 3.0, 1.2}}, 1.0);
    for (auto disp : {Dispersion::Massive, Dispersion::Massless}) {
        for (int i = 1; i <= 60; ++i) {
            const double E = 0.05 * i;
            const auto st = scattering_state(pot, E, disp, {});
            CHECK(std::abs(st.transmission() + st.reflection() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("stationary states are continuous with continuous slope") {
    const auto pot = PiecewiseConstantPotential::rectangular_barrier(0.0, 1.2, 1.0, 1.0);
    for (double E : {0.3, 1.0, 1.7}) {
        const auto st = scattering_state(pot, E, Dispersion::Massive, {});
        for (double xi : pot.interfaces()) {
            const auto& L = st.regions[pot.region_of(xi)];
            const auto& R = st.regions[pot.region_of(xi) + 1];
            CHECK(std::abs(wave_value(L, xi) - wave_value(R, xi)) < 1e-12);
            CHECK(std::abs(wave_derivative(L, xi) - wave_derivative(R, xi)) < 1e-11);
        }
    }
}

TEST_CASE("closed-form barrier transmission") {
    const double V0 = 1.0, a = 1.3;
    for (double E : {0.1, 0.5, 0.9}) {
        const auto st = scattering_state(PiecewiseConstantPotential::rectangular_barrier(0.0, a, V0, 1.0), E,
                                         Dispersion::Massive, {});
        const double kappa = std::sqrt(2.0 * (V0 - E));
        const double s = std::sinh(kappa * a);
        const double oracle = 1.0 / (1.0 + V0 * V0 * s * s / (4.0 * E * (V0 - E)));
        CHECK(st.transmission() == doctest::Approx(oracle).epsilon(1e-12));
        CHECK(rectangular_barrier_transmission(E, V0, a, 1.0, 1.0) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("invalid potentials and energies") {
    CHECK_THROWS_AS(PiecewiseConstantPotential({{0.0, 1.0, 1.0}, {1.5, 2.0, 1.0}}, 1.0), Error);
    CHECK_THROWS_AS(PiecewiseConstantPotential({{0.0, 0.0, 1.0}}, 1.0), Error);
    try {
        scattering_state(PiecewiseConstantPotential::free(1.0), 0.0, Dispersion::Massive, {});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "timeobs.DegenerateEnergy");
    }
}

TEST_CASE("packet amplitude is normalized and the synthesis is variable-independent") {
    const auto pk = gaussian_packet(1.5, 0.1, -20.0, Dispersion::Massive, 1.0);
    CHECK(packet_norm(pk) == doctest::Approx(1.0).epsilon(1e-12));
    const auto pot = PiecewiseConstantPotential::rectangular_barrier(0.0, 1.0, 0.6, 1.0);
    for (double x : {-20.0, -1.0, 0.5, 4.0}) {
        const Complex a = synthesize(pk, pot, x, 5.0);
        const Complex b = synthesize_k(pk, pot, x, 5.0);
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("free packet: flux-measure mean time equals the energy-representation form") {
    const auto pk = gaussian_packet(2.0, 0.1, -30.0, Dispersion::Massive, 1.0);
    const auto pot = PiecewiseConstantPotential::free(1.0);
    const PassageAnalysis pa(pk, pot, {10.0});
    const double flux_form = pa.mean_passage_time(10.0, FluxSign::Positive);
    const double energy_form = mean_passage_time_energy_form(pk, 10.0);
    CHECK(flux_form == doctest::Approx(energy_form).epsilon(1e-8));
    CHECK(flux_form == doctest::Approx(40.0 / pk.mean_group_velocity()).epsilon(0.01));
    CHECK(pa.passage_weight(10.0, FluxSign::Positive) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("massless packets travel undistorted at the light speed") {
    const auto pk = gaussian_packet(2.0, 0.1, -30.0, Dispersion::Massless, 1.0);
    const PassageAnalysis pa(pk, PiecewiseConstantPotential::free(1.0), {0.0, 25.0});
    CHECK(pa.traversal_and_reflection(0.0, 25.0).tau_T == doctest::Approx(25.0).epsilon(1e-8));
    CHECK(pa.uncertainty(25.0).product >= 0.5);
}

TEST_CASE("energy and time are conjugate on smooth signals") {
    auto f = [](double t) { return std::exp(Complex(-0.1 * t * t, 0.7 * t)); };
    std::vector<double> ts;
    for (int i = -20; i <= 20; ++i) ts.push_back(0.25 * i);
    CHECK(energy_time_commutator_defect(f, ts, 1e-3) < 1e-8);
}

TEST_CASE("reflection time is absent when nothing reflects") {
    const auto pk = gaussian_packet(2.0, 0.1, -30.0, Dispersion::Massive, 1.0);
    const PassageAnalysis pa(pk, PiecewiseConstantPotential::free(1.0), {-5.0, 5.0});
    const auto tr = pa.traversal_and_reflection(-5.0, 5.0);
    CHECK_FALSE(tr.tau_R.has_value());
    try {
        pa.mean_passage_time(-5.0, FluxSign::Negative);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "timeobs.ZeroFlux");
    }
}

TEST_CASE("barrier: reflected packet returns and both dwell forms agree") {
    const auto pk = gaussian_packet(1.0, 0.05, -60.0, Dispersion::Massive, 1.0);
    const auto pot = PiecewiseConstantPotential::rectangular_barrier(0.0, 1.0, 1.5, 1.0);
    // The far sensor sees the reflected packet clear of the incident one.
    const PassageAnalysis pa(pk, pot, {-2.0, 3.0, -150.0});
    const auto tr = pa.traversal_and_reflection(-2.0, 3.0);
    REQUIRE(tr.tau_R.has_value());
    CHECK(*tr.tau_R > 0.0);
    const double a = pa.dwell_time(-2.0, 3.0, DwellMethod::Density);
    const double b = pa.dwell_time(-2.0, 3.0, DwellMethod::FluxDifference);
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
    const double T = pa.passage_weight(3.0, FluxSign::Positive);
    const double R = -pa.passage_weight(-150.0, FluxSign::Negative);
    CHECK(T + R == doctest::Approx(1.0).epsilon(1e-6));
}
