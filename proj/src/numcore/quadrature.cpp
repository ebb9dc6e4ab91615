#include "chronon/numcore/quadrature.hpp"

#include "chronon/numcore/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace chronon::numcore {

namespace {

// Legendre P_n(x) and its derivative by the three-term recurrence.
void legendre(std::size_t n, double x, double& p, double& dp) {
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
}

template <typename T>
T pairwise_impl(const T* xs, std::size_t n) {
    if (n <= 8) {
        T s{};
        for (std::size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_impl(xs, half) + pairwise_impl(xs + half, n - half);
}

}  // namespace

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
    if (n == 0) throw Error("numcore", "QuadratureError", "rule needs at least one node");
    if (!(b > a)) throw Error("numcore", "QuadratureError", "interval must satisfy a < b");

    QuadratureRule rule;
    rule.a = a;
    rule.b = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const std::size_t m = (n + 1) / 2;
    for (std::size_t i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double p = 0.0;
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            legendre(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = mid - half * x;
        rule.nodes[n - 1 - i] = mid + half * x;
        rule.weights[i] = half * w;
        rule.weights[n - 1 - i] = half * w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = mid;
    return rule;
}

QuadratureRule composite_gauss_legendre(std::size_t panels, std::size_t n, double a, double b) {
    if (panels == 0) throw Error("numcore", "QuadratureError", "need at least one panel");
    if (!(b > a)) throw Error("numcore", "QuadratureError", "interval must satisfy a < b");
    const QuadratureRule ref = gauss_legendre(n, -1.0, 1.0);
    QuadratureRule rule;
    rule.a = a;
    rule.b = b;
    rule.nodes.reserve(panels * n);
    rule.weights.reserve(panels * n);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double hi = (p + 1 == panels) ? b : lo + h;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < n; ++i) {
            rule.nodes.push_back(mid + half * ref.nodes[i]);
            rule.weights.push_back(half * ref.weights[i]);
        }
    }
    return rule;
}

QuadratureRule composite_gauss_legendre(std::span<const double> breaks, double max_panel_width,
                                        std::size_t n) {
    if (breaks.size() < 2) throw Error("numcore", "QuadratureError", "need at least two breaks");
    if (!(max_panel_width > 0.0)) {
        throw Error("numcore", "QuadratureError", "panel width must be positive");
    }
    QuadratureRule rule;
    rule.a = breaks.front();
    rule.b = breaks.back();
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        const double lo = breaks[s];
        const double hi = breaks[s + 1];
        if (!(hi > lo)) continue;
        const auto panels =
            static_cast<std::size_t>(std::max(1.0, std::ceil((hi - lo) / max_panel_width)));
        const QuadratureRule part = composite_gauss_legendre(panels, n, lo, hi);
        rule.nodes.insert(rule.nodes.end(), part.nodes.begin(), part.nodes.end());
        rule.weights.insert(rule.weights.end(), part.weights.begin(), part.weights.end());
    }
    return rule;
}

std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                               const QuadratureRule& rule) {
    std::vector<std::complex<double>> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const std::complex<double> v = f(rule.nodes[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw Error("numcore", "NonFiniteSample",
                        "integrand not finite at x = " + std::to_string(rule.nodes[i]));
        }
        terms[i] = rule.weights[i] * v;
    }
    return pairwise_sum(std::span<const std::complex<double>>(terms));
}

double integrate_real(const std::function<double(double)>& f, const QuadratureRule& rule) {
    std::vector<double> terms(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double v = f(rule.nodes[i]);
        if (!std::isfinite(v)) {
            throw Error("numcore", "NonFiniteSample",
                        "integrand not finite at x = " + std::to_string(rule.nodes[i]));
        }
        terms[i] = rule.weights[i] * v;
    }
    return pairwise_sum(std::span<const double>(terms));
}

double pairwise_sum(std::span<const double> xs) { return pairwise_impl(xs.data(), xs.size()); }

std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs) {
    return pairwise_impl(xs.data(), xs.size());
}

}  // namespace chronon::numcore
