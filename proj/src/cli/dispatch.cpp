#include "chronon/cli/dispatch.hpp"

#include "chronon/chronon_lvn/chronon_lvn.hpp"
#include "chronon/chronon_qm/chronon_qm.hpp"
#include "chronon/cli/constants.hpp"
#include "chronon/discretespec/discretespec.hpp"
#include "chronon/electron_cl/electron_cl.hpp"
#include "chronon/kernels/kernels.hpp"
#include "chronon/kg_position/kg_position.hpp"
#include "chronon/timeobs/statistics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <random>

namespace chronon::cli {

namespace {

using Complex = std::complex<double>;

double hbar_for(UnitSystem u) {
    return u == UnitSystem::EvSeconds ? constant("hbar").value : 1.0;
}

void check(ResultEnvelope& env, std::string name, double value, double limit, bool pass) {
    env.checks.push_back({std::move(name), value, limit, pass});
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// ---- lvn ---------------------------------------------------------------

ResultEnvelope run_lvn_damping(const RunConfig& cfg) {
    ResultEnvelope env;
    const double hbar = hbar_for(cfg.units);
    const double dE = cfg.number("lvn.delta_E");
    std::vector<double> taus = cfg.list("lvn.tau");
    const auto samples = static_cast<std::size_t>(cfg.integer("lvn.samples", 200));
    if (samples < 2) throw ConfigError("SchemaError", 0, "lvn.samples", "must be >= 2");

    std::vector<double> gammas;
    for (double tau : taus) gammas.push_back(chronon_lvn::decoherence_rate(dE, hbar, tau));
    const double t_max = cfg.number("lvn.t_max", 4.0 / *std::min_element(gammas.begin(), gammas.end()));

    env.data.columns = {"tau", "t", "ratio", "exp_minus_gamma_t", "rel_err"};
    Json per_tau = Json::array();
    double worst = 0.0;
    // Two-level state with |rho_01(0)| = 1/2; evolve_to applies [1 + i omega tau]^(-k).
    Eigen::VectorXcd psi(2);
    psi << 1.0, 1.0;
    const auto rho0 = chronon_lvn::DensityMatrix::pure(psi);
    Eigen::VectorXd levels(2);
    levels << 0.0, dE;
    const chronon_lvn::SpectralGaps gaps(levels, hbar);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const double tau = taus[i];
        const auto series = chronon_lvn::damping_series(dE, hbar, tau, t_max, samples);
        double tau_worst = 0.0;
        for (const auto& s : series) {
            const auto k = static_cast<long long>(std::llround(s.t / tau));
            const auto rho = chronon_lvn::evolve_to(rho0, gaps, tau, k);
            const double ratio = std::abs(rho(0, 1)) / std::abs(rho0(0, 1));
            const double expected = std::exp(-gammas[i] * tau * static_cast<double>(k));
            const double err = expected > 0.0 ? std::abs(ratio - expected) / expected : 0.0;
            tau_worst = std::max(tau_worst, err);
            env.data.add({tau, tau * static_cast<double>(k), ratio, expected, err});
        }
        worst = std::max(worst, tau_worst);
        per_tau.push_back({{"tau", tau}, {"gamma", gammas[i]}, {"max_rel_err", tau_worst}});
    }
    bool ordered = true;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        for (std::size_t j = 0; j < taus.size(); ++j) {
            if (taus[i] > taus[j] && !(gammas[i] > gammas[j])) ordered = false;
        }
    }
    env.record = {{"delta_E", dE}, {"hbar", hbar}, {"t_max", t_max}, {"series", per_tau}};
    check(env, "series_matches_exponential", worst, 1e-12, worst <= 1e-12);
    check(env, "larger_tau_decays_faster", ordered ? 1.0 : 0.0, 1.0, ordered);
    return env;
}

ResultEnvelope run_lvn(const RunConfig& cfg) {
    ResultEnvelope env;
    const double hbar = hbar_for(cfg.units);
    const std::vector<double> lv = cfg.list("lvn.levels");
    const double tau = cfg.number("lvn.tau");
    const auto steps = cfg.integer("lvn.steps", 1);
    const auto n = static_cast<Eigen::Index>(lv.size());

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;
    std::vector<Eigen::VectorXcd> states(2, Eigen::VectorXcd(n));
    for (auto& s : states) {
        for (Eigen::Index i = 0; i < n; ++i) s(i) = Complex(normal(rng), normal(rng));
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double w = unit(rng);
    auto rho = chronon_lvn::DensityMatrix::mixture({w, 1.0 - w}, states);
    const Eigen::VectorXd diag0 = rho.matrix().diagonal().real();
    const chronon_lvn::SpectralGaps gaps(Eigen::Map<const Eigen::VectorXd>(lv.data(), n), hbar);

    env.data.columns = {"n", "t", "trace_re", "trace_im", "max_diag_drift", "min_eigenvalue",
                        "abs_rho_01"};
    double trace_drift = 0.0;
    double diag_drift = 0.0;
    double min_eig = 1.0;
    for (long long k = 0; k <= steps; ++k) {
        if (k > 0) rho = chronon_lvn::lvn_step(rho, gaps, tau);
        const Complex tr = rho.trace();
        const double dd = (rho.matrix().diagonal().real() - diag0).cwiseAbs().maxCoeff();
        const double me = rho.min_eigenvalue();
        trace_drift = std::max(trace_drift, std::abs(tr - Complex(1.0, 0.0)));
        diag_drift = std::max(diag_drift, dd);
        min_eig = std::min(min_eig, me);
        env.data.add({k, tau * static_cast<double>(k), tr.real(), tr.imag(), dd, me,
                      std::abs(rho(0, 1))});
    }
    env.record = {{"dim", n}, {"tau", tau}, {"steps", steps}, {"trace_drift", trace_drift},
                  {"diag_drift", diag_drift}, {"min_eigenvalue", min_eig}};
    check(env, "trace_preserved", trace_drift, 1e-12, trace_drift <= 1e-12);
    check(env, "diagonal_constant", diag_drift, 0.0, diag_drift == 0.0);
    check(env, "positivity", min_eig, -1e-10, min_eig >= -1e-10);
    return env;
}

// ---- discretespec ------------------------------------------------------

ResultEnvelope run_discretespec(const RunConfig& cfg) {
    ResultEnvelope env;
    const double hbar = hbar_for(cfg.units);
    std::vector<double> levels = cfg.list("discretespec.levels");
    std::vector<double> amps_re = cfg.list("discretespec.amplitudes");
    if (amps_re.empty()) amps_re.assign(levels.size(), 1.0);
    if (amps_re.size() != levels.size()) {
        throw ConfigError("SchemaError", 0, "discretespec.amplitudes",
                          "needs one amplitude per level");
    }
    std::vector<Complex> amps(amps_re.begin(), amps_re.end());
    const auto sys = discretespec::make_system(levels, amps, hbar);
    const double gamma = cfg.number("discretespec.gamma", 0.0);
    const auto samples = static_cast<std::size_t>(cfg.integer("discretespec.samples", 1000));
    const double cycles = cfg.number("discretespec.cycles", 1.0);

    const auto pair = levels.size() >= 2 ? discretespec::uncertainty_pair(
                                               sys, discretespec::poincare_cycle(levels, hbar), gamma)
                                         : discretespec::uncertainty_pair(sys, gamma);
    env.record = {{"T", pair.T},
                  {"delta_E", pair.delta_E},
                  {"delta_t", pair.delta_t},
                  {"product_sq", pair.product_sq},
                  {"edge_fraction", pair.edge_fraction},
                  {"rhs_commutator", pair.rhs_commutator},
                  {"rhs_linear", pair.rhs_linear},
                  {"linear_form_holds", pair.linear_holds(1e-10)}};
    if (levels.size() >= 2) {
        const auto cycle = discretespec::poincare_cycle(levels, hbar);
        env.record["D"] = cycle.D;
        env.data.columns = {"t", "density", "t_hat"};
        for (const auto& s : discretespec::cycle_series(sys, cycle, samples, cycles, gamma)) {
            env.data.add({s.t, s.density, s.t_hat});
        }
    }
    const double slack = pair.product_sq - pair.rhs_commutator;
    check(env, "commutator_bound", slack, -1e-10, pair.commutator_holds(1e-10));
    env.diagnostics["linear_form_slack"] = pair.product_sq - pair.rhs_linear;
    return env;
}

// ---- chronon-evolve ----------------------------------------------------

chronon_qm::Scheme parse_scheme(const std::string& s) {
    if (s == "symmetric") return chronon_qm::Scheme::Symmetric;
    if (s == "advanced") return chronon_qm::Scheme::Advanced;
    return chronon_qm::Scheme::Retarded;
}

ResultEnvelope run_chronon_evolve(const RunConfig& cfg) {
    ResultEnvelope env;
    const auto dim = static_cast<Eigen::Index>(cfg.integer("chronon.dim", 4));
    const double tau = cfg.number("chronon.tau");
    const auto steps = static_cast<std::size_t>(cfg.integer("chronon.steps", 1));
    const double spread = cfg.number("chronon.spread", 1.0);
    const std::string scheme_name = cfg.text("chronon.scheme", "retarded");
    const auto scheme = parse_scheme(scheme_name);
    const bool euler = cfg.text("chronon.seed_mode", "stable") == "euler";

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;
    numcore::ComplexMatrix A(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) A(i, j) = Complex(normal(rng), normal(rng));
    }
    numcore::ComplexMatrix Hm = 0.5 * (A + A.adjoint());
    const chronon_qm::FiniteHamiltonian raw(Hm);
    Hm *= spread / raw.levels().cwiseAbs().maxCoeff();
    const chronon_qm::FiniteHamiltonian H(Hm);
    Eigen::VectorXcd psi0(dim);
    for (Eigen::Index i = 0; i < dim; ++i) psi0(i) = Complex(normal(rng), normal(rng));
    psi0.normalize();

    const auto tr = chronon_qm::evolve(H, {tau, scheme}, psi0, steps,
                                       euler ? chronon_qm::SymmetricSeed::Euler
                                             : chronon_qm::SymmetricSeed::Stable);
    const bool equivalent_defined = !(scheme == chronon_qm::Scheme::Symmetric && euler);
    std::optional<chronon_qm::EquivalentHamiltonian> heq;
    if (equivalent_defined) heq = chronon_qm::equivalent_hamiltonian(H, tau, scheme);

    env.data.columns = {"n", "t", "norm_sq", "error_vs_exact", "deviation_from_equivalent"};
    double worst_eq = 0.0;
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        const double t = tr.time(k);
        const double err = (tr.states[k] - chronon_qm::exact_evolution(H, psi0, t)).norm();
        double dev = std::nan("");
        if (heq) {
            dev = (tr.states[k] - heq->evolve(psi0, t)).norm() /
                  std::max(1.0, tr.states[k].norm());
            worst_eq = std::max(worst_eq, dev);
        }
        env.data.add({static_cast<long long>(k), t, tr.norms[k], err, dev});
    }
    env.record = {{"dim", dim}, {"tau", tau}, {"steps", steps}, {"scheme", scheme_name},
                  {"theta_max", spread * tau}, {"final_norm_sq", tr.norms.back()}};
    if (heq) check(env, "equivalent_hamiltonian_fidelity", worst_eq, 1e-9, worst_eq <= 1e-9);
    return env;
}

// ---- timeobs / dwell ---------------------------------------------------

struct TimeobsSetup {
    timeobs::SpectralPacket packet;
    timeobs::PiecewiseConstantPotential pot;
    double x_i;
    double x_f;
    std::optional<double> x_r;
    bool free;
};

TimeobsSetup timeobs_setup(const RunConfig& cfg) {
    const bool massless = cfg.text("timeobs.dispersion", "massive") == "massless";
    const double mass = cfg.number("timeobs.mass", 1.0);
    const auto disp = massless ? timeobs::Dispersion::Massless : timeobs::Dispersion::Massive;
    const double V0 = cfg.number("timeobs.barrier_V0", 0.0);
    const bool free = V0 == 0.0;
    auto packet = timeobs::gaussian_packet(cfg.number("timeobs.k_mean"),
                                           cfg.number("timeobs.sigma_k"),
                                           cfg.number("timeobs.x0"), disp, mass);
    auto pot = free ? timeobs::PiecewiseConstantPotential::free(mass)
                    : timeobs::PiecewiseConstantPotential::rectangular_barrier(
                          cfg.number("timeobs.barrier_start", 0.0),
                          cfg.number("timeobs.barrier_width", 1.0), V0, mass);
    std::optional<double> x_r;
    if (cfg.has("timeobs.x_r")) x_r = cfg.number("timeobs.x_r");
    return {std::move(packet), std::move(pot), cfg.number("timeobs.x_i"),
            cfg.number("timeobs.x_f"), x_r, free};
}

ResultEnvelope run_timeobs(const RunConfig& cfg, bool free_check) {
    ResultEnvelope env;
    TimeobsSetup s = timeobs_setup(cfg);
    if (free_check && !s.free) {
        throw ConfigError("SchemaError", cfg.values.at("timeobs.barrier_V0").line,
                          "timeobs.barrier_V0", "timeobs-free runs without a barrier");
    }
    std::vector<double> sensors{s.x_i, s.x_f};
    if (s.x_r) sensors.push_back(*s.x_r);
    const timeobs::PassageAnalysis pa(s.packet, s.pot, sensors);
    const auto trr = pa.traversal_and_reflection(s.x_i, s.x_f, s.x_r);
    const double dwell_rho = pa.dwell_time(s.x_i, s.x_f, timeobs::DwellMethod::Density);
    const double dwell_flux = pa.dwell_time(s.x_i, s.x_f, timeobs::DwellMethod::FluxDifference);
    const auto unc = pa.uncertainty(s.x_f);
    const double v = s.packet.mean_group_velocity();
    const double ref = (s.x_f - s.x_i) / v;

    env.record = {{"tau_T", trr.tau_T},
                  {"tau_R", optional_number(trr.tau_R)},
                  {"mean_passage_x_i", pa.mean_passage_time(s.x_i, timeobs::FluxSign::Positive)},
                  {"mean_passage_x_f", pa.mean_passage_time(s.x_f, timeobs::FluxSign::Positive)},
                  {"dwell_density", dwell_rho},
                  {"dwell_flux_difference", dwell_flux},
                  {"incident_flux", pa.incident_flux(s.x_i)},
                  {"transmitted_weight", pa.passage_weight(s.x_f, timeobs::FluxSign::Positive)},
                  {"delta_E", unc.delta_E},
                  {"delta_t", unc.delta_t},
                  {"delta_E_delta_t", unc.product},
                  {"free_flight_reference", ref}};
    env.diagnostics = {{"energy_nodes", pa.field().energy_nodes()},
                       {"time_nodes", pa.time_rule().nodes.size()},
                       {"window", {pa.window().t_lo, pa.window().t_hi}}};

    const auto series = pa.series(s.x_f);
    const auto stride = static_cast<std::size_t>(cfg.integer("timeobs.series_stride", 1));
    env.data.columns = {"t", "weight", "rho", "j"};
    for (std::size_t i = 0; i < series.t.size(); i += stride) {
        env.data.add({series.t[i], series.w[i], series.rho[i], series.j[i]});
    }
    const double hbar = s.packet.constants.hbar;
    check(env, "energy_time_spread", unc.product, hbar / 2.0, unc.product >= hbar / 2.0);
    if (free_check) {
        const double rel = std::abs(trr.tau_T - ref) / ref;
        check(env, "traversal_matches_free_flight", rel, 0.01, rel <= 0.01);
    }
    return env;
}

ResultEnvelope run_dwell(const RunConfig& cfg) {
    ResultEnvelope env;
    TimeobsSetup s = timeobs_setup(cfg);
    const timeobs::PassageAnalysis pa(s.packet, s.pot, {s.x_i, s.x_f});
    const double a = pa.dwell_time(s.x_i, s.x_f, timeobs::DwellMethod::Density);
    const double b = pa.dwell_time(s.x_i, s.x_f, timeobs::DwellMethod::FluxDifference);
    const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
    env.record = {{"dwell_density", a},
                  {"dwell_flux_difference", b},
                  {"relative_difference", rel},
                  {"incident_flux", pa.incident_flux(s.x_i)}};
    const auto fi = pa.series(s.x_i);
    const auto ff = pa.series(s.x_f);
    env.data.columns = {"t", "j_x_i", "j_x_f"};
    for (std::size_t i = 0; i < fi.t.size(); ++i) env.data.add({fi.t[i], fi.j[i], ff.j[i]});
    check(env, "dwell_forms_agree", rel, 1e-4, rel <= 1e-4);
    return env;
}

// ---- electron ----------------------------------------------------------

electron_cl::Vec3 vec3(const RunConfig& cfg, const std::string& key, electron_cl::Vec3 fallback) {
    const auto v = cfg.list(key);
    return v.empty() ? fallback : electron_cl::Vec3(v[0], v[1], v[2]);
}

ResultEnvelope run_electron(const RunConfig& cfg, bool pulse_alias) {
    ResultEnvelope env;
    using namespace electron_cl;
    ScenarioParams p;
    p.constants = cfg.units == UnitSystem::Cgs ? ElectronConstants::electron()
                                               : ElectronConstants::natural();
    const double c = p.constants.c;
    const double theta0 =
        chronon_constant(p.constants.e, p.constants.m0, p.constants.c, p.constants.k);
    std::string scenario = cfg.text("electron.scenario", pulse_alias ? "pulse" : "free");
    if (pulse_alias && scenario != "pulse") {
        throw ConfigError("SchemaError", cfg.values.at("electron.scenario").line,
                          "electron.scenario", "electron-pulse runs the pulse scenario only");
    }
    const std::string scheme = cfg.text("electron.scheme", "retarded");
    p.scheme = scheme == "symmetric" ? Scheme::Symmetric
               : scheme == "advanced" ? Scheme::Advanced
                                      : Scheme::Retarded;
    p.relativistic = cfg.flag("electron.relativistic", true);
    p.law = cfg.text("electron.law", "averaged") == "difference" ? TransmissionLaw::Difference
                                                                 : TransmissionLaw::Averaged;
    // Natural units keep the step explicit; cgs defaults to the electron chronon 2 theta0.
    p.tau0 = cfg.number("electron.tau0", cfg.units == UnitSystem::Cgs ? 2.0 * theta0 : 0.01);
    p.steps = static_cast<std::size_t>(cfg.integer("electron.steps", 1000));
    p.v0 = vec3(cfg, "electron.v0",
                scenario == "hyperbolic" ? Vec3::Zero() : Vec3(0.1 * c, 0.0, 0.0));
    p.E = vec3(cfg, "electron.E", Vec3::Zero());
    p.B = vec3(cfg, "electron.B", Vec3::Zero());
    p.t_on = cfg.number("electron.t_on", 100.0 * p.tau0);

    const ScenarioResult r = run_scenario(scenario, p);
    env.data.columns = {"n", "tau", "x0", "x1", "x2", "x3", "u0", "u1", "u2", "u3",
                        "speed", "on_shell_defect"};
    for (const Node& nd : r.worldline.nodes) {
        const double speed = p.relativistic || scenario == "internal"
                                 ? c * nd.u.tail<3>().norm() / nd.u(0)
                                 : nd.u.tail<3>().norm();
        const double defect =
            p.relativistic || scenario == "internal" ? on_shell_defect(nd.u, c) : 0.0;
        env.data.add({static_cast<long long>(nd.n), nd.tau, nd.x(0), nd.x(1), nd.x(2), nd.x(3),
                      nd.u(0), nd.u(1), nd.u(2), nd.u(3), speed, defect});
    }
    env.record = {{"scenario", scenario},
                  {"scheme", scheme},
                  {"relativistic", p.relativistic},
                  {"tau0", p.tau0},
                  {"theta0", theta0},
                  {"max_on_shell_defect", r.max_on_shell_defect}};
    env.diagnostics["max_newton_iterations"] = r.max_newton_iterations;
    if (p.relativistic || scenario == "internal") {
        check(env, "on_shell", r.max_on_shell_defect, 1e-8, r.max_on_shell_defect <= 1e-8);
    }
    if (scenario == "pulse") {
        env.record["pre_pulse_nodes"] = r.pre_pulse_nodes;
        env.record["max_pre_pulse_deviation"] = r.max_pre_pulse_deviation;
        check(env, "no_pre_acceleration", r.max_pre_pulse_deviation, 0.0,
              r.max_pre_pulse_deviation == 0.0 && r.pre_pulse_nodes > 0);
    } else if (scenario == "uniform-B") {
        env.record["rotation_per_step"] = r.rotation_per_step;
        env.record["speed_factor_per_step"] = r.speed_factor_per_step;
        env.record["rotation_frequency"] = r.cyclotron_frequency;
        env.record["cyclotron_frequency"] = p.constants.e * p.B.norm() / (p.constants.m0 * c);
    } else if (scenario == "hyperbolic") {
        env.record["max_hyperbola_deviation"] = r.max_hyperbola_deviation;
    } else if (scenario == "internal") {
        env.record["gamma"] = r.internal_gamma;
        env.record["beta0_sq"] = r.beta0_sq;
        env.record["anomalous_moment"] = r.anomalous_moment;
        check(env, "beta0_sq_three_quarters", r.beta0_sq, 0.75, r.beta0_sq == 0.75);
    }
    return env;
}

// ---- kg-localize -------------------------------------------------------

ResultEnvelope run_kg(const RunConfig& cfg, const RunOptions& opts) {
    ResultEnvelope env;
    using namespace kg_position;
    GaussianShape shape;
    const auto c = cfg.list("kg.center");
    const auto w = cfg.list("kg.widths");
    const auto a = cfg.list("kg.shift");
    if (!c.empty()) shape.center = Vec3(c[0], c[1], c[2]);
    if (!w.empty()) shape.widths = Vec3(w[0], w[1], w[2]);
    if (!a.empty()) shape.shift = Vec3(a[0], a[1], a[2]);
    const double mass = cfg.number("kg.mass", 1.0);
    const auto n = static_cast<std::size_t>(
        cfg.integer("kg.n", opts.profile == ToleranceProfile::Fast ? 32 : 64));
    const MomentumGrid grid{n, grid_half_width_for(shape)};
    const auto phi = gaussian_packet(grid, mass, shape);

    const LocalizationReport rep = uncertainty_correlations(phi);
    const CVec3 nw = newton_wigner_expectation(phi);
    const Vec3 bil = newton_wigner_mean_bilinear(phi);
    const double residue = nw.imag().cwiseAbs().maxCoeff();
    const double equivalence = (nw - bil.cast<Complex>()).cwiseAbs().maxCoeff();
    const Eigen::Matrix3cd comm = commutator_expectation(phi);
    const double comm_err = (comm - commutator_oracle(phi)).cwiseAbs().maxCoeff();

    auto vec = [](const Vec3& v) { return Json::array({v(0), v(1), v(2)}); };
    auto mat = [](const Eigen::Matrix3d& m) {
        Json rows = Json::array();
        for (int i = 0; i < 3; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2)});
        return rows;
    };
    env.record = {{"mass", mass},
                  {"grid", {{"n", n}, {"half_width", grid.half_width}}},
                  {"alpha", vec(rep.alpha)},
                  {"beta", vec(rep.beta)},
                  {"delta_alpha", vec(rep.delta_alpha)},
                  {"delta_beta", vec(rep.delta_beta)},
                  {"rhs", mat(rep.rhs)},
                  {"slack", mat(rep.slack)},
                  {"holds", rep.holds()}};
    env.diagnostics = {{"surface_ratio", surface_ratio(phi)},
                       {"norm", inner_product(phi, phi).real()},
                       {"resolution_defect", rep.resolution_defect},
                       {"hermiticity_residue", residue},
                       {"bilinear_equivalence", equivalence},
                       {"commutator_error", comm_err}};
    check(env, "uncertainty_correlations", rep.slack.minCoeff(), 0.0, rep.holds());
    check(env, "hermiticity", residue, 1e-8, residue <= 1e-8);
    check(env, "bilinear_equivalence", equivalence, 1e-8, equivalence <= 1e-8);
    check(env, "commutator", comm_err, 1e-6, comm_err <= 1e-6);
    return env;
}

// ---- constants ---------------------------------------------------------

ResultEnvelope run_constants() {
    ResultEnvelope env;
    env.data.columns = {"name", "value", "unit", "source"};
    for (const auto& e : constants_table()) env.data.add({e.name, e.value, e.unit, e.source});
    const double theta0 = constant("theta0").value;
    const double rel = std::abs(theta0 - 6.266e-24) / 6.266e-24;
    env.record = {{"theta0", theta0}, {"theta0_reference", 6.266e-24}};
    check(env, "theta0_reference", rel, 1e-3, rel <= 1e-3);
    return env;
}

}  // namespace

bool ResultEnvelope::tolerance_ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ResultEnvelope dispatch(const RunConfig& cfg, const RunOptions& opts) {
    const Subcommand& sc = find_subcommand(cfg.subcommand);
    if (opts.threads > 0) kernels::set_threads(opts.threads);
    ResultEnvelope env;
    const std::string& name = sc.name;
    if (name == "lvn-fig2") {
        env = run_lvn_damping(cfg);
    } else if (name == "lvn") {
        env = run_lvn(cfg);
    } else if (name == "discretespec") {
        env = run_discretespec(cfg);
    } else if (name == "chronon-evolve") {
        env = run_chronon_evolve(cfg);
    } else if (name == "timeobs" || name == "timeobs-free") {
        env = run_timeobs(cfg, name == "timeobs-free");
    } else if (name == "dwell") {
        env = run_dwell(cfg);
    } else if (name == "electron" || name == "electron-pulse") {
        env = run_electron(cfg, name == "electron-pulse");
    } else if (name == "kg-localize") {
        env = run_kg(cfg, opts);
    } else {
        env = run_constants();
    }
    env.metadata = {{"version", kVersion},
                    {"subcommand", cfg.subcommand},
                    {"units", to_string(cfg.units)},
                    {"seed", cfg.seed},
                    {"tolerance_profile", opts.profile == ToleranceProfile::Fast ? "fast" : "strict"},
                    {"config", emit_config(cfg)}};
    if (env.diagnostics.is_null()) env.diagnostics = Json::object();
    return env;
}

Json envelope_to_json(const ResultEnvelope& env, bool with_timestamp) {
    Json meta = env.metadata;
    if (with_timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        meta["timestamp"] = buf;
    }
    Json checks = Json::array();
    for (const Check& c : env.checks) {
        checks.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", c.pass}});
    }
    Json doc = {{"meta", meta},
                {"diagnostics", env.diagnostics},
                {"checks", checks},
                {"record", env.record}};
    if (!env.data.empty()) doc["data"] = table_to_json(env.data);
    return doc;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config: return 2;
        case ErrorKind::Numerical: return 3;
        case ErrorKind::Tolerance: return 4;
    }
    return 3;
}

}  // namespace chronon::cli
