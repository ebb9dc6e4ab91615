// Classical finite-difference electron in external fields.
//
// Metric signature (-,+,+,+): u = (gamma c, gamma v), u.u = -c^2. Gaussian
// units with an explicit Coulomb factor k. Fields enter through the mixed
// tensor F^mu_nu, so the continuum equation reads du/dtau = (e / m0 c) F u.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace chronon::electron_cl {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

enum class Scheme { Retarded, Symmetric, Advanced };
enum class TransmissionLaw {
    Difference,  // dx = (tau0 / 2)(u_next - u_prev)
    Averaged,   // dx = (tau0 / 2)(u_next + u_prev)
};

struct ElectronConstants {
    double e;
    double m0;
    double c;
    double k = 1.0;

    // CGS electron (CODATA 2018).
    static ElectronConstants electron();
    // e = m0 = c = k = 1.
    static ElectronConstants natural();
};

// (2/3) k e^2 / (m0 c^3), half the chronon tau0.
double chronon_constant(double e, double m0, double c = ElectronConstants::electron().c,
                        double k = 1.0);

double minkowski_dot(const Vec4& a, const Vec4& b);
// |u.u + c^2| / c^2
double on_shell_defect(const Vec4& u, double c);
Vec4 four_velocity(const Vec3& v, double c);

struct FieldConfig {
    enum class Kind { None, UniformE, UniformB, UniformEB, Pulse };
    Kind kind = Kind::None;
    Vec3 E = Vec3::Zero();
    Vec3 B = Vec3::Zero();
    double t_on = 0.0;  // pulse: E switches on at coordinate time t_on

    static FieldConfig none() { return {}; }
    static FieldConfig uniform_E(const Vec3& E);
    static FieldConfig uniform_B(const Vec3& B);
    static FieldConfig pulse(const Vec3& E0, double t_on);

    bool active_at(double t) const;
    Vec3 E_at(double t) const;
    Vec3 B_at(double t) const;
    // Mixed tensor F^mu_nu at coordinate time t (zero when inactive).
    Mat4 tensor(double t) const;
};

// Lowered F_{mu nu} = eta F^. ; antisymmetric.
Mat4 lower_first_index(const Mat4& mixed);

struct StepReport {
    int iterations = 0;
    double residual = 0.0;
    std::vector<double> residual_history;
};

// Relativistic velocity update for one node; F is the mixed tensor at the node.
// Retarded: u_prev = u(tau - tau0) -> u(tau) by damped Newton.
// Advanced: u_prev = u(tau) -> u(tau + tau0) in closed form.
// Symmetric: (u_prev, u_prev2) = (u(tau), u(tau - tau0)) -> u(tau + tau0).
// Errors: electron_cl.NewtonDivergence, electron_cl.OnShellViolation,
// electron_cl.MissingSecondSlice.
Vec4 electron_step(const Vec4& u_prev, const Mat4& F, Scheme scheme, double tau0,
                   const ElectronConstants& k, const Vec4* u_prev2 = nullptr,
                   StepReport* report = nullptr);

// Non-relativistic velocity update (three-vectors).
Vec3 electron_step_nonrel(const Vec3& v_prev, const Vec3& E, const Vec3& B, Scheme scheme,
                          double tau0, const ElectronConstants& k, const Vec3* v_prev2 = nullptr);

// Second slice of the symmetric recurrence on its exact discrete mode for a
// constant field: u1 = (tau0 F' + sqrt(1 + tau0^2 F'^2)) u0, F' = (e / m0 c) F.
Vec4 symmetric_seed(const Vec4& u0, const Mat4& F, double tau0, const ElectronConstants& k);
Vec3 symmetric_seed_nonrel(const Vec3& v0, const Vec3& E, const Vec3& B, double tau0,
                           const ElectronConstants& k);

Vec4 transmit(const Vec4& x_prev, const Vec4& u_prev, const Vec4& u_next, double tau0,
              TransmissionLaw law = TransmissionLaw::Averaged);

struct Node {
    std::size_t n;
    double tau;  // proper time n tau0
    Vec4 x;      // (c t, r)
    Vec4 u;
};

struct Worldline {
    std::vector<Node> nodes;
};

struct ScenarioParams {
    Scheme scheme = Scheme::Retarded;
    bool relativistic = true;
    TransmissionLaw law = TransmissionLaw::Averaged;
    ElectronConstants constants = ElectronConstants::natural();
    double tau0 = 0.01;
    std::size_t steps = 1000;
    Vec3 v0 = Vec3(0.1, 0.0, 0.0);
    Vec3 E = Vec3::Zero();
    Vec3 B = Vec3::Zero();
    double t_on = 0.0;
};

struct ScenarioResult {
    std::string name;
    Worldline worldline;
    double max_on_shell_defect = 0.0;
    int max_newton_iterations = 0;
    // pulse
    double max_pre_pulse_deviation = 0.0;
    std::size_t pre_pulse_nodes = 0;
    // uniform-B
    double rotation_per_step = 0.0;
    double speed_factor_per_step = 0.0;
    double cyclotron_frequency = 0.0;
    // hyperbolic
    double max_hyperbola_deviation = 0.0;
    // internal
    double internal_gamma = 0.0;
    double beta0_sq = 0.0;
    double anomalous_moment = 0.0;
};

// Scenarios: free, pulse, uniform-B, hyperbolic, internal.
// Errors: electron_cl.UnknownScenario, electron_cl.InvalidParams.
ScenarioResult run_scenario(const std::string& name, const ScenarioParams& params);

}  // namespace chronon::electron_cl
