#include "chronon/discretespec/discretespec.hpp"

#include "chronon/numcore/error.hpp"
#include "chronon/numcore/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace chronon::discretespec {

namespace {

Error invalid_system(const std::string& what) {
    return Error("discretespec", "InvalidSystem", what, ErrorKind::Config);
}

struct Fraction {
    long long p;
    long long q;
};

// First continued-fraction convergent p/q of r with |r - p/q| <= tol |r| and q <= q_max.
bool rational_approximation(double r, double tol, long long q_max, Fraction& out) {
    long long p0 = 1, q0 = 0;
    long long p1 = static_cast<long long>(std::floor(r)), q1 = 1;
    double rem = r - std::floor(r);
    while (true) {
        if (std::abs(r - static_cast<double>(p1) / static_cast<double>(q1)) <= tol * std::abs(r)) {
            out = {p1, q1};
            return true;
        }
        if (rem == 0.0) return false;
        const double inv = 1.0 / rem;
        const auto a = static_cast<long long>(std::floor(inv));
        rem = inv - std::floor(inv);
        const long long p2 = a * p1 + p0;
        const long long q2 = a * q1 + q0;
        if (q2 > q_max) return false;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
}

}  // namespace

void DiscreteSystem::validate() const {
    if (levels.empty()) throw invalid_system("at least one level is required");
    if (levels.size() != amplitudes.size()) {
        throw invalid_system("levels and amplitudes differ in length");
    }
    if (!(hbar > 0.0)) throw invalid_system("hbar must be positive");
    for (std::size_t n = 0; n < levels.size(); ++n) {
        if (!std::isfinite(levels[n]) || !std::isfinite(std::abs(amplitudes[n]))) {
            throw invalid_system("non-finite level or amplitude");
        }
        if (n > 0 && !(levels[n] > levels[n - 1])) {
            throw invalid_system("levels must be strictly ascending");
        }
    }
    double norm = 0.0;
    for (const Complex& a : amplitudes) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-10) {
        throw invalid_system("amplitudes are not normalized (sum |a|^2 = " +
                             std::to_string(norm) + ")");
    }
}

Complex DiscreteSystem::psi(double t) const {
    Complex s(0.0, 0.0);
    for (std::size_t n = 0; n < levels.size(); ++n) {
        s += amplitudes[n] * std::exp(Complex(0.0, -(levels[n] - levels[0]) * t / hbar));
    }
    return s;
}

DiscreteSystem make_system(std::vector<double> levels, std::vector<Complex> amplitudes,
                           double hbar) {
    double norm = 0.0;
    for (const Complex& a : amplitudes) norm += std::norm(a);
    if (!(norm > 0.0)) throw invalid_system("amplitudes are all zero");
    const double scale = 1.0 / std::sqrt(norm);
    for (Complex& a : amplitudes) a *= scale;
    DiscreteSystem sys{std::move(levels), std::move(amplitudes), hbar};
    sys.validate();
    return sys;
}

PoincareCycle poincare_cycle(const std::vector<double>& levels, double hbar, double tol,
                             long long max_denominator) {
    if (levels.size() < 2) throw invalid_system("a cycle needs at least two levels");
    std::vector<double> gaps;
    for (std::size_t n = 1; n < levels.size(); ++n) {
        const double g = levels[n] - levels[0];
        if (!(g > 0.0)) throw invalid_system("levels must be strictly ascending");
        gaps.push_back(g);
    }

    // Ratios to the first spacing as fractions p_n / q_n over a common denominator.
    std::vector<Fraction> fr;
    long long Q = 1;
    for (double g : gaps) {
        Fraction f{};
        if (!rational_approximation(g / gaps[0], tol, max_denominator, f)) {
            throw Error("discretespec", "Incommensurate",
                        "spacing ratio " + std::to_string(g / gaps[0]) +
                            " has no rational approximation with denominator <= " +
                            std::to_string(max_denominator));
        }
        fr.push_back(f);
        Q = std::lcm(Q, f.q);
    }
    std::vector<long long> m(fr.size());
    long long G = 0;
    for (std::size_t n = 0; n < fr.size(); ++n) {
        m[n] = fr[n].p * (Q / fr[n].q);
        G = std::gcd(G, m[n]);
    }
    for (long long& k : m) k /= G;

    // Least-squares D over all spacings, then every spacing must sit on its multiple.
    double num = 0.0;
    double den = 0.0;
    for (std::size_t n = 0; n < m.size(); ++n) {
        num += static_cast<double>(m[n]) * gaps[n];
        den += static_cast<double>(m[n]) * static_cast<double>(m[n]);
    }
    const double D = num / den;
    for (std::size_t n = 0; n < m.size(); ++n) {
        if (std::abs(gaps[n] - static_cast<double>(m[n]) * D) > tol * gaps[n]) {
            throw Error("discretespec", "Incommensurate",
                        "spacing " + std::to_string(n + 1) + " is not a multiple of D");
        }
    }
    return PoincareCycle{D, 2.0 * std::numbers::pi * hbar / D, m};
}

double sawtooth(double t, double T, double gamma) {
    const double s = t - gamma;
    const double n = std::ceil((s - 0.5 * T) / T);
    return gamma + (s - n * T);
}

UncertaintyPair uncertainty_pair(const DiscreteSystem& sys, double gamma) {
    sys.validate();
    if (sys.levels.size() == 1) {
        // One level: no cycle; |psi|^2 is flat and the energy spread vanishes.
        const double T = 1.0;
        return uncertainty_pair(sys, PoincareCycle{2.0 * std::numbers::pi * sys.hbar / T, T, {}},
                                gamma);
    }
    return uncertainty_pair(sys, poincare_cycle(sys.levels, sys.hbar), gamma);
}

UncertaintyPair uncertainty_pair(const DiscreteSystem& sys, const PoincareCycle& cycle,
                                 double gamma) {
    sys.validate();
    const double T = cycle.T;
    if (!(gamma > -0.5 * T && gamma < 0.5 * T)) {
        throw Error("discretespec", "InvalidArgument", "gamma must lie in (-T/2, T/2)",
                    ErrorKind::Config);
    }

    double e1 = 0.0;
    double e2 = 0.0;
    for (std::size_t n = 0; n < sys.levels.size(); ++n) {
        const double w = std::norm(sys.amplitudes[n]);
        e1 += w * sys.levels[n];
    }
    for (std::size_t n = 0; n < sys.levels.size(); ++n) {
        const double d = sys.levels[n] - e1;
        e2 += std::norm(sys.amplitudes[n]) * d * d;
    }

    // |psi|^2 has harmonics up to M (2 pi / T); two panels per shortest period.
    long long M = 1;
    for (long long k : cycle.multiples) M = std::max(M, k);
    const auto rule = numcore::composite_gauss_legendre(static_cast<std::size_t>(2 * M + 4), 16,
                                                        gamma - 0.5 * T, gamma + 0.5 * T);
    const double norm = numcore::integrate_real([&](double t) { return std::norm(sys.psi(t)); },
                                                rule);
    const double mean =
        numcore::integrate_real([&](double t) { return t * std::norm(sys.psi(t)); }, rule) / norm;
    const double var = numcore::integrate_real(
                           [&](double t) {
                               return (t - mean) * (t - mean) * std::norm(sys.psi(t));
                           },
                           rule) /
                       norm;

    const double X = T * std::norm(sys.psi(gamma + 0.5 * T)) / norm;
    const double h2 = sys.hbar * sys.hbar;
    UncertaintyPair out{};
    out.T = T;
    out.delta_E = std::sqrt(e2);
    out.delta_t = std::sqrt(std::max(var, 0.0));
    out.product_sq = e2 * var;
    out.edge_fraction = X;
    out.rhs_linear = h2 * (1.0 - X);
    out.rhs_commutator = 0.25 * h2 * (1.0 - X) * (1.0 - X);
    return out;
}

std::vector<CycleSample> cycle_series(const DiscreteSystem& sys, const PoincareCycle& cycle,
                                      std::size_t samples, double cycles, double gamma) {
    if (samples < 2) {
        throw Error("discretespec", "InvalidArgument", "need at least two samples",
                    ErrorKind::Config);
    }
    std::vector<CycleSample> out(samples);
    const double lo = gamma - 0.5 * cycles * cycle.T;
    const double step = cycles * cycle.T / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = lo + step * static_cast<double>(i);
        out[i] = CycleSample{t, std::norm(sys.psi(t)), sawtooth(t, cycle.T, gamma)};
    }
    return out;
}

}  // namespace chronon::discretespec
