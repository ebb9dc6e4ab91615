#include "chronon/timeobs/potential.hpp"

#include "chronon/numcore/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace chronon::timeobs {

namespace {

constexpr double kBranchTolerance = 1e-12;

Error invalid(const std::string& what) {
    return Error("timeobs", "InvalidPotential", what, ErrorKind::Config);
}

}  // namespace

PiecewiseConstantPotential::PiecewiseConstantPotential(std::vector<Segment> segments, double mass)
    : segments_(std::move(segments)), mass_(mass) {
    if (!(mass_ > 0.0) || !std::isfinite(mass_)) throw invalid("mass must be positive");
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (!std::isfinite(s.x_start) || !std::isfinite(s.x_end) || !std::isfinite(s.V)) {
            throw invalid("segment " + std::to_string(i) + " has non-finite fields");
        }
        if (!(s.x_start < s.x_end)) {
            throw invalid("segment " + std::to_string(i) + " has x_start >= x_end");
        }
        if (i > 0 && segments_[i - 1].x_end != s.x_start) {
            throw invalid("segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                          " are not contiguous");
        }
    }
}

PiecewiseConstantPotential PiecewiseConstantPotential::free(double mass) {
    return PiecewiseConstantPotential({}, mass);
}

PiecewiseConstantPotential PiecewiseConstantPotential::rectangular_barrier(double x_start,
                                                                           double width,
                                                                           double V0,
                                                                           double mass) {
    return PiecewiseConstantPotential({Segment{x_start, x_start + width, V0}}, mass);
}

std::size_t PiecewiseConstantPotential::region_of(double x) const {
    if (segments_.empty() || x <= segments_.front().x_start) return 0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        if (x <= segments_[i].x_end) return i + 1;
    }
    return segments_.size() + 1;
}

double PiecewiseConstantPotential::region_potential(std::size_t region) const {
    if (region == 0 || region > segments_.size()) return 0.0;
    return segments_[region - 1].V;
}

double PiecewiseConstantPotential::span_lo() const {
    return segments_.empty() ? 0.0 : segments_.front().x_start;
}

double PiecewiseConstantPotential::span_hi() const {
    return segments_.empty() ? 0.0 : segments_.back().x_end;
}

std::vector<double> PiecewiseConstantPotential::interfaces() const {
    std::vector<double> xs;
    for (const Segment& s : segments_) {
        if (xs.empty() || xs.back() != s.x_start) xs.push_back(s.x_start);
        xs.push_back(s.x_end);
    }
    return xs;
}

double wavenumber_squared(double E, double V, Dispersion disp, double mass,
                          const PhysicalConstants& pc) {
    if (disp == Dispersion::Massive) return 2.0 * mass * (E - V) / (pc.hbar * pc.hbar);
    const double hc = pc.hbar * pc.c;
    return (E - V) * (E + V) / (hc * hc);
}

Complex wave_value(const RegionWave& w, double x) {
    const double d = x - w.origin;
    if (w.linear) return w.A + w.B * d;
    const Complex e = std::exp(Complex(0.0, 1.0) * w.k * d);
    return w.A * e + w.B / e;
}

Complex wave_derivative(const RegionWave& w, double x) {
    const double d = x - w.origin;
    if (w.linear) return w.B;
    const Complex ik = Complex(0.0, 1.0) * w.k;
    const Complex e = std::exp(ik * d);
    return ik * (w.A * e - w.B / e);
}

Complex wave_second_derivative(const RegionWave& w, double x) {
    if (w.linear) return Complex(0.0, 0.0);
    return -w.k * w.k * wave_value(w, x);
}

Complex forward_value(const RegionWave& w, double x) {
    if (w.linear) return Complex(0.0, 0.0);
    return w.A * std::exp(Complex(0.0, 1.0) * w.k * (x - w.origin));
}

Complex forward_derivative(const RegionWave& w, double x) {
    if (w.linear) return Complex(0.0, 0.0);
    const Complex ik = Complex(0.0, 1.0) * w.k;
    return ik * w.A * std::exp(ik * (x - w.origin));
}

ScatteringState scattering_state(const PiecewiseConstantPotential& pot, double E,
                                 Dispersion disp, const PhysicalConstants& pc) {
    if (!(E > 0.0) || !std::isfinite(E)) {
        throw Error("timeobs", "DegenerateEnergy",
                    "energy must be positive and finite (got " + std::to_string(E) + ")");
    }
    const std::size_t nreg = pot.region_count();
    ScatteringState st;
    st.E = E;
    st.regions.resize(nreg);

    for (std::size_t j = 0; j < nreg; ++j) {
        RegionWave& w = st.regions[j];
        const double V = pot.region_potential(j);
        const double k2 = wavenumber_squared(E, V, disp, pot.mass(), pc);
        const double scale = std::max(std::abs(E), std::abs(V));
        // k vanishes at E = V, and for massless dispersion also at E = -V.
        const double gap = disp == Dispersion::Massless ? std::min(std::abs(E - V), std::abs(E + V))
                                                        : std::abs(E - V);
        if (gap <= kBranchTolerance * scale) {
            w.linear = true;
            w.k = Complex(0.0, 0.0);
        } else if (k2 > 0.0) {
            w.k = Complex(std::sqrt(k2), 0.0);
        } else {
            w.k = Complex(0.0, std::sqrt(-k2));
        }
        // Free outer regions use the global origin so the incident wave is exactly exp(ikx).
        w.origin = (j == 0 || j + 1 == nreg) ? 0.0 : pot.segments()[j - 1].x_start;
    }

    // Unnormalized: unit transmitted amplitude, then match leftwards.
    st.regions.back().A = Complex(1.0, 0.0);
    st.regions.back().B = Complex(0.0, 0.0);
    for (std::size_t j = nreg - 1; j > 0; --j) {
        // Interface between region j-1 and j sits at the start of region j.
        const double x_if = (j == nreg - 1) ? pot.span_hi() : pot.segments()[j - 1].x_start;
        const Complex v = wave_value(st.regions[j], x_if);
        const Complex d = wave_derivative(st.regions[j], x_if);
        RegionWave& L = st.regions[j - 1];
        const double dx = x_if - L.origin;
        if (L.linear) {
            L.B = d;
            L.A = v - d * dx;
        } else {
            const Complex ik = Complex(0.0, 1.0) * L.k;
            const Complex e = std::exp(ik * dx);
            L.A = 0.5 * (v + d / ik) / e;
            L.B = 0.5 * (v - d / ik) * e;
        }
    }

    const Complex a0 = st.regions.front().A;
    if (std::abs(a0) == 0.0 || !std::isfinite(std::abs(a0))) {
        throw Error("timeobs", "DegenerateEnergy", "transfer matrix is singular at this energy");
    }
    for (RegionWave& w : st.regions) {
        w.A /= a0;
        w.B /= a0;
    }
    st.t = st.regions.back().A;
    st.r = st.regions.front().B;
    return st;
}

double rectangular_barrier_transmission(double E, double V0, double width, double mass,
                                        double hbar) {
    const double kappa = std::sqrt(2.0 * mass * (V0 - E)) / hbar;
    const double s = std::sinh(kappa * width);
    return 1.0 / (1.0 + V0 * V0 * s * s / (4.0 * E * (V0 - E)));
}

}  // namespace chronon::timeobs
