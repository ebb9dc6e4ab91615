// Flux-measure time statistics at fixed sensor positions: passage-time
// moments, traversal and reflection durations, dwell times, and the
// energy-time spread of the arrival distribution.

#pragma once

#include "chronon/numcore/quadrature.hpp"
#include "chronon/timeobs/field.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace chronon::timeobs {

enum class FluxSign { Positive, Negative, Both };
enum class DwellMethod { Density, FluxDifference };

struct StatisticsOptions {
    // Window edges must carry |j| and rho * v below this fraction of the sensor peak.
    double edge_cutoff = 1e-12;
    double initial_sigmas = 10.0;
    int max_widenings = 10;
    // Composite Gauss-Legendre in t: panel width = panel_sigmas * sigma_t.
    double panel_sigmas = 0.5;
    std::size_t nodes_per_panel = 16;
    // j_sign integrals below this fraction of the integral of |j| count as absent.
    double zero_flux_fraction = 1e-10;
    FieldOptions field;
};

struct TimeWindow {
    double t_lo;
    double t_hi;
};

// Flux at one sensor on the t-quadrature nodes.
struct FluxSeries {
    double x = 0.0;
    std::vector<double> t;
    std::vector<double> w;
    std::vector<double> rho;
    std::vector<double> j;
};

struct TraversalReflection {
    double tau_T;
    std::optional<double> tau_R;  // empty when no negative flux reaches the reflection sensor
};

struct UncertaintyReport {
    double delta_E;
    double delta_t;
    double product;  // delta_E * delta_t, compare with hbar / 2
};

// Analysis of one packet over a fixed set of sensor positions. Construction
// picks a single time window valid for every sensor and an energy rule sized
// for it; everything afterwards is a pure function of that state.
// Errors: timeobs.UnresolvedWindow, timeobs.QuadratureFailure.
class PassageAnalysis {
public:
    PassageAnalysis(SpectralPacket packet, PiecewiseConstantPotential pot,
                    std::vector<double> sensors, StatisticsOptions opts = {});

    const PacketField& field() const { return *field_; }
    const SpectralPacket& packet() const { return field_->packet(); }
    const PiecewiseConstantPotential& potential() const { return field_->potential(); }
    TimeWindow window() const { return window_; }
    const numcore::QuadratureRule& time_rule() const { return t_rule_; }
    double sigma_t() const { return sigma_t_; }

    FluxSeries series(double x) const;

    // <t^n> under the j_sign measure. Errors: timeobs.ZeroFlux.
    double passage_moment(double x, FluxSign sign, int n) const;
    double mean_passage_time(double x, FluxSign sign) const {
        return passage_moment(x, sign, 1);
    }
    // Integral of j_sign over the window.
    double passage_weight(double x, FluxSign sign) const;

    // Reflection sensor defaults to x_i.
    TraversalReflection traversal_and_reflection(double x_i, double x_f,
                                                 std::optional<double> x_r = {}) const;

    // Denominator shared by both dwell forms: time integral of the incident
    // (forward) wave component at x_i.
    double incident_flux(double x_i) const;
    double dwell_time(double x_i, double x_f, DwellMethod method) const;

    // Spread of arrival times under W = j / integral j at x, and the
    // flux-weighted energy spread of the packet.
    UncertaintyReport uncertainty(double x) const;

    // Max |d rho/dt + dj/dx| over the given (x, t) points, in units of
    // rho_peak * v / sigma_x. Points must sit at least 2e-3 sigma_x from interfaces.
    double continuity_residual(std::span<const double> xs, std::span<const double> ts) const;

private:
    void build_field(double t_abs_max);
    double edge_defect(double x, bool lower) const;

    std::vector<double> sensors_;
    StatisticsOptions opts_;
    std::unique_ptr<PacketField> field_;
    TimeWindow window_{};
    numcore::QuadratureRule t_rule_;
    double sigma_t_ = 0.0;
    double x_reach_ = 0.0;
};

// Convenience wrappers, each building an analysis over the sensors it needs.
double mean_passage_time(const SpectralPacket& packet, const PiecewiseConstantPotential& pot,
                         double x, FluxSign sign, int n = 1);
TraversalReflection traversal_and_reflection_times(const SpectralPacket& packet,
                                                   const PiecewiseConstantPotential& pot,
                                                   double x_i, double x_f,
                                                   std::optional<double> x_r = {});
double dwell_time(const SpectralPacket& packet, const PiecewiseConstantPotential& pot, double x_i,
                  double x_f, DwellMethod method);

// Mean passage time through x for free motion, evaluated in the energy
// representation: Re integral G* (-i hbar d/dE)(B) dE over the flux weight,
// with G = g(E) exp(i k x) and B the current-carrying partner of G. Valid for
// unidirectional packets only.
double mean_passage_time_energy_form(const SpectralPacket& packet, double x);

// max_t |i hbar d/dt (t f) - t i hbar df/dt - i hbar f| / max|hbar f| on a grid,
// derivatives by fourth-order central differences with step h.
double energy_time_commutator_defect(const std::function<Complex(double)>& f,
                                     std::span<const double> ts, double h, double hbar = 1.0);

}  // namespace chronon::timeobs
