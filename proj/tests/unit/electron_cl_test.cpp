#include "chronon/electron_cl/electron_cl.hpp"
#include "chronon/numcore/error.hpp"

#include <doctest.h>

#include <cmath>

using namespace chronon;
using namespace chronon::electron_cl;

namespace {

const ElectronConstants kNat = ElectronConstants::natural();

Mat4 eb_tensor(const Vec3& E, const Vec3& B) {
    return FieldConfig{FieldConfig::Kind::UniformEB, E, B}.tensor(0.0);
}

Vec4 mirrored(Vec4 u) {
    u.tail<3>() *= -1.0;
    return u;
}

}  // namespace

TEST_CASE("four-velocities sit on the mass shell") {
    const Vec4 u = four_velocity(Vec3(0.6, -0.3, 0.2), 1.0);
    CHECK(minkowski_dot(u, u) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(on_shell_defect(u, 1.0) < 1e-15);
    const Mat4 F = lower_first_index(eb_tensor(Vec3(1, 2, 3), Vec3(-1, 0.5, 2)));
    CHECK((F + F.transpose()).norm() == 0.0);
}

TEST_CASE("chronon constant scales inversely with the mass") {
    const auto e = ElectronConstants::electron();
    const double m_mu = 1.883531627e-25;
    const double th_e = chronon_constant(e.e, e.m0, e.c);
    const double th_mu = chronon_constant(e.e, m_mu, e.c);
    CHECK(th_mu / th_e == doctest::Approx(e.m0 / m_mu).epsilon(1e-14));
    CHECK(chronon_constant(1.0, 1.0, 1.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("advanced step undoes a retarded step under time reversal") {
    // Reversing v and B maps the retarded recurrence onto the advanced one.
    const Vec3 E(0.02, 0.0, 0.01), B(0.1, 0.3, 0.5);
    for (const Vec3& v : {Vec3(0.5, 0.2, -0.1), Vec3(0.0, 0.9, 0.3), Vec3(0.01, 0.0, 0.0)}) {
        const Vec4 u0 = four_velocity(v, 1.0);
        for (double tau : {0.01, 0.1, 0.5}) {
            const Vec4 u1 = electron_step(u0, eb_tensor(E, B), Scheme::Retarded, tau, kNat);
            const Vec4 back = electron_step(mirrored(u1), eb_tensor(E, -B), Scheme::Advanced, tau, kNat);
            CHECK((mirrored(back) - u0).norm() < 1e-13);
        }
    }
}

TEST_CASE("retarded step satisfies its implicit equation and stays on shell") {
    const Vec4 u0 = four_velocity(Vec3(0.3, 0.4, 0.0), 1.0);
    const Mat4 F = eb_tensor(Vec3(0.0, 0.1, 0.0), Vec3(0.0, 0.0, 0.7));
    StepReport rep;
    const Vec4 u1 = electron_step(u0, F, Scheme::Retarded, 0.05, kNat, nullptr, &rep);
    CHECK(on_shell_defect(u1, 1.0) < 1e-13);
    CHECK(rep.iterations >= 1);
    CHECK(rep.residual < 1e-11);
    const Vec4 d = u1 - u0;
    const Vec4 R = d - u1 * (minkowski_dot(u0, d)) / 1.0 - 0.05 * F * u1;
    CHECK(R.norm() < 1e-11);
}

TEST_CASE("zero field leaves the velocity untouched") {
    const Vec4 u0 = four_velocity(Vec3(0.3, 0.0, 0.1), 1.0);
    for (Scheme s : {Scheme::Retarded, Scheme::Advanced})
        CHECK(electron_step(u0, Mat4::Zero(), s, 0.1, kNat) == u0);
    CHECK_THROWS_AS(electron_step(u0, Mat4::Zero(), Scheme::Symmetric, 0.1, kNat), Error);
}

TEST_CASE("non-relativistic gyration: rotation and speed factor per scheme") {
    const double B = 2.0, tau = 0.05, w = B * tau;
    ScenarioParams p;
    p.relativistic = false;
    p.tau0 = tau;
    p.steps = 400;
    p.B = Vec3(0.0, 0.0, B);
    p.v0 = Vec3(0.01, 0.0, 0.0);

    p.scheme = Scheme::Retarded;
    auto r = run_scenario("uniform-B", p);
    CHECK(r.rotation_per_step == doctest::Approx(std::atan(w)).epsilon(1e-12));
    CHECK(r.speed_factor_per_step == doctest::Approx(1.0 / std::sqrt(1.0 + w * w)).epsilon(1e-12));

    p.scheme = Scheme::Advanced;
    p.steps = 100;
    r = run_scenario("uniform-B", p);
    CHECK(r.speed_factor_per_step == doctest::Approx(std::sqrt(1.0 + w * w)).epsilon(1e-12));

    p.scheme = Scheme::Symmetric;
    p.steps = 400;
    r = run_scenario("uniform-B", p);
    CHECK(r.rotation_per_step == doctest::Approx(std::asin(w)).epsilon(1e-12));
    CHECK(r.speed_factor_per_step == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("symmetric scheme keeps the speed over ten thousand steps") {
    ScenarioParams p;
    p.scheme = Scheme::Symmetric;
    p.tau0 = 0.02;
    p.steps = 10000;
    p.v0 = Vec3(0.8, 0.0, 0.1);
    p.B = Vec3(0.0, 0.0, 1.5);
    const auto r = run_scenario("uniform-B", p);
    const double s0 = r.worldline.nodes.front().u.tail<3>().norm();
    double worst = 0.0;
    for (const auto& nd : r.worldline.nodes) worst = std::max(worst, std::abs(nd.u.tail<3>().norm() - s0) / s0);
    CHECK(worst < 1e-9);
    CHECK(r.max_on_shell_defect < 1e-10);
}

TEST_CASE("symmetric gyrofrequency converges at second order") {
    // Proper-time gyrofrequency e B / (m0 c) = B in natural units.
    const double B = 1.0;
    double prev_err = 0.0;
    for (int k = 0; k < 4; ++k) {
        ScenarioParams p;
        p.scheme = Scheme::Symmetric;
        p.tau0 = 0.2 / (1 << k);
        p.steps = 200u << k;
        p.v0 = Vec3(0.5, 0.0, 0.0);
        p.B = Vec3(0.0, 0.0, B);
        const auto r = run_scenario("uniform-B", p);
        const double err = std::abs(r.cyclotron_frequency - B);
        if (k > 0) CHECK(std::log2(prev_err / err) == doctest::Approx(2.0).epsilon(0.05));
        prev_err = err;
    }
}

TEST_CASE("hyperbolic motion converges at second order with the symmetric scheme") {
    double prev = 0.0;
    for (int k = 0; k < 3; ++k) {
        ScenarioParams p;
        p.scheme = Scheme::Symmetric;
        p.tau0 = 0.04 / (1 << k);
        p.steps = 100u << k;
        p.v0 = Vec3::Zero();
        p.E = Vec3(0.5, 0.0, 0.0);
        const auto r = run_scenario("hyperbolic", p);
        if (k > 0) CHECK(std::log2(prev / r.max_hyperbola_deviation) == doctest::Approx(2.0).epsilon(0.1));
        prev = r.max_hyperbola_deviation;
    }
}

TEST_CASE("transmission laws") {
    const Vec4 x(1.0, 2.0, 3.0, 4.0);
    const Vec4 a = four_velocity(Vec3(0.1, 0.0, 0.0), 1.0);
    const Vec4 b = four_velocity(Vec3(0.3, 0.1, 0.0), 1.0);
    CHECK((transmit(x, a, b, 0.5, TransmissionLaw::Averaged) - (x + 0.25 * (a + b))).norm() < 1e-15);
    CHECK((transmit(x, a, b, 0.5, TransmissionLaw::Difference) - (x + 0.25 * (b - a))).norm() < 1e-15);
    // The difference form does not advance coordinate time for a free particle.
    CHECK(transmit(x, a, a, 0.5, TransmissionLaw::Difference) == x);
}

TEST_CASE("free motion advances time at the Lorentz rate") {
    ScenarioParams p;
    p.steps = 50;
    p.v0 = Vec3(0.6, 0.0, 0.0);
    const auto r = run_scenario("free", p);
    const auto& last = r.worldline.nodes.back();
    CHECK(last.x(0) == doctest::Approx(1.25 * 50 * p.tau0).epsilon(1e-12));
    CHECK(last.x(1) == doctest::Approx(0.75 * 50 * p.tau0).epsilon(1e-12));
}

TEST_CASE("internal solution constants") {
    const auto r = run_scenario("internal", {});
    CHECK(r.beta0_sq == 0.75);
    CHECK(r.anomalous_moment == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
    // One full turn per chronon.
    const auto& nodes = r.worldline.nodes;
    REQUIRE(nodes.size() > 64);
    CHECK((nodes[64].x.tail<3>() - nodes[0].x.tail<3>()).norm() < 1e-12);
}

TEST_CASE("scenario errors") {
    try {
        run_scenario("warp", {});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == "electron_cl.UnknownScenario");
        CHECK(e.kind() == ErrorKind::Config);
    }
    ScenarioParams p;
    p.tau0 = -1.0;
    CHECK_THROWS_AS(run_scenario("free", p), Error);
    CHECK_THROWS_AS(run_scenario("uniform-B", {}), Error);
}
