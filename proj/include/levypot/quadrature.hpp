#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <type_traits>
#include <span>
#include <vector>

namespace levypot {

struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 0.0;
    std::size_t max_subdivisions = 2000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;

    QuadResult& operator+=(const QuadResult& o) {
        value += o.value;
        error += o.error;
        return *this;
    }
};

namespace detail {
using RawIntegrand = double (*)(double, void*);
QuadResult integrate_raw(RawIntegrand f, void* ctx, double a, double b, const QuadratureConfig& cfg);
QuadResult integrate_oscillatory_raw(RawIntegrand f, void* ctx, double a, double b, double omega, bool sine,
                                     const QuadratureConfig& cfg);
[[noreturn]] void throw_divergent(double s);
}

// Adaptive integral of f over [a, b]; either end may be infinite.
// Throws NonConvergentQuadrature when the tolerance cannot be met.
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureConfig& cfg = {}) {
    using Fn = std::remove_reference_t<F>;
    auto tramp = [](double x, void* p) -> double { return (*static_cast<Fn*>(p))(x); };
    return detail::integrate_raw(tramp, const_cast<void*>(static_cast<const void*>(&f)), a, b, cfg);
}

// Integral of f(x) cos(omega x) (or sin) over a finite [a, b], for smooth f
// and any number of oscillations.
template <class F>
QuadResult integrate_oscillatory(F&& f, double a, double b, double omega, bool sine,
                                 const QuadratureConfig& cfg = {}) {
    using Fn = std::remove_reference_t<F>;
    auto tramp = [](double x, void* p) -> double { return (*static_cast<Fn*>(p))(x); };
    return detail::integrate_oscillatory_raw(tramp, const_cast<void*>(static_cast<const void*>(&f)), a, b, omega,
                                             sine, cfg);
}

// Sorted, de-duplicated cut points of (a, b) from `breaks`, always including 1.
std::vector<double> radial_nodes(double a, double b, std::span<const double> breaks);

// Integral of f(s) ds over [a, b] with 0 <= a < b <= inf, done in the
// variable u = log s piece by piece between the cut points.
template <class F>
QuadResult integrate_radial(F&& f, double a, double b, std::span<const double> breaks,
                            const QuadratureConfig& cfg = {}) {
    QuadResult total;
    if (!(b > a)) return total;
    auto nodes = radial_nodes(a, b, breaks);
    if (nodes.front() == 0.0) {
        // Integrands here behave like C s^q near the origin; close the first
        // decades analytically instead of sampling down to overflow.
        double st = nodes[1] * 1e-8;
        double ft = f(st);
        while (!std::isfinite(ft) && st < 1e-2 * nodes[1]) ft = f(st *= 10.0);
        const double fe = f(st / std::numbers::e);
        if (ft != 0.0) {
            const double q = std::log(std::abs(ft / fe));
            if (!(q > -1.0) || ft * fe < 0.0) detail::throw_divergent(st);
            total.value += ft * st / (q + 1.0);
        }
        nodes.front() = st;
    }
    if (std::isinf(nodes.back())) {
        // Same idea for the far tail, where the integrand decays like C s^q, q < -1.
        const double last = nodes[nodes.size() - 2];
        const double st = std::max(last, 1.0) * 1e8;
        const double ft = f(st);
        if (ft != 0.0 && std::isfinite(ft)) {
            const double q = std::log(std::abs(f(st * std::numbers::e) / ft));
            if (!(q < -1.0)) detail::throw_divergent(st);
            total.value -= ft * st / (q + 1.0);
        }
        nodes.back() = st;
    }
    auto g = [&f](double u) {
        const double s = std::exp(u);
        return f(s) * s;
    };
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        total += integrate(g, std::log(nodes[i]), std::log(nodes[i + 1]), cfg);
    return total;
}

} // namespace levypot
