#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "levypot/process.hpp"
#include "levypot/quadrature.hpp"
#include "levypot/special.hpp"

namespace levypot {

inline constexpr QuadratureConfig kRadialQuad{1e-11, 0.0, 4000};

struct PruittValues {
    double r = 0.0;
    double K = 0.0;
    double L = 0.0;
    double sum = 0.0;
    double h = 0.0;   // 1 / sqrt(K + L)
};

// K(r) = sigma2 d / r^2 + r^{-2} * integral over |z| < r of |z|^2 nu(z) dz
double pruitt_K(const ProcessSpec& spec, double r, const QuadratureConfig& cfg = kRadialQuad);
// L(r) = nu({|z| >= r})
double pruitt_L(const ProcessSpec& spec, double r, const QuadratureConfig& cfg = kRadialQuad);
PruittValues pruitt(const ProcessSpec& spec, double r, const QuadratureConfig& cfg = kRadialQuad);

// Integral of |z|^2 nu(z) over |z| < eps (jump part only).
double small_jump_moment(const ProcessSpec& spec, double eps, const QuadratureConfig& cfg = kRadialQuad);

// Characteristic exponent Psi(rho), E exp(i xi.X_t) = exp(-t Psi(|xi|)).
double psi(const ProcessSpec& spec, double rho, const QuadratureConfig& cfg = kRadialQuad);

// Intensity of jumps from a point at distance h > 0 from a half-space
// (outside it) that land in the half-space.
double halfspace_jump_rate(const ProcessSpec& spec, double h, const QuadratureConfig& cfg = kRadialQuad);
// Intensity of jumps from a point y, |y| = t outside [a, b], that land in the
// annulus a <= |z| < b; b may be infinite.
double annulus_jump_rate(const ProcessSpec& spec, double t, double a, double b,
                         const QuadratureConfig& cfg = kRadialQuad);

struct KernelValue {
    double value = 0.0;
    double error = 0.0;
};

// Potential kernel U(|x|) by radial Fourier inversion of 1/Psi. Oscillatory
// tails are summed between Bessel zeros with Euler averaging, which gives the
// Abel-summed value when the terms do not decay. Needs d >= 3.
KernelValue potential_kernel_fourier(const ProcessSpec& spec, double x, const QuadratureConfig& cfg = {1e-9, 0.0, 2000});

// Sum of sum_k a(k) for an (eventually) alternating series, by repeated
// averaging of partial sums. Stops once the estimate is stable to `tol`
// (relative to `scale`) or after `max_terms` terms.
struct SeriesResult {
    double value = 0.0;
    double error = 0.0;
    int terms = 0;
};
SeriesResult sum_alternating(const std::function<double(int)>& term, double tol, double scale, int max_terms = 400);

// Mean of the radial function f over the sphere of radius t centred at a
// point with |x| = rho, written as a one-dimensional integral over u = |y|.
template <class F>
double spherical_mean(int d, F&& f, double rho, double t, std::span<const double> kinks = {},
                      const QuadratureConfig& cfg = {1e-11, 0.0, 1000}) {
    if (t == 0.0) return f(rho);
    if (rho == 0.0) return f(t);
    const double lo = std::abs(rho - t), hi = rho + t;
    if (d == 1) return 0.5 * (f(lo) + f(hi));
    const double cd = cosine_density_constant(d);
    const double two_rt = 2.0 * rho * t;
    const double expo = 0.5 * (d - 3);
    auto w = [&](double u) {
        if (d == 3) return f(u) * u / two_rt;
        const double c = std::clamp((u - rho - t) * (u + rho + t) / two_rt + 1.0, -1.0, 1.0);
        const double one_m_c2 = (1.0 - c) * (1.0 + c);
        return cd * f(u) * 2.0 * u / two_rt * std::pow(one_m_c2, expo);
    };
    std::vector<double> nodes{lo, hi};
    for (double k : kinks)
        if (k > lo && k < hi) nodes.push_back(k);
    std::sort(nodes.begin(), nodes.end());
    QuadratureConfig qc = cfg;
    double size = std::abs(f(rho));
    for (double x : nodes) size = std::max(size, std::abs(f(x)));
    qc.abs_tol = std::max(qc.abs_tol, 1e-3 * cfg.rel_tol * size);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
        if (nodes[i + 1] > nodes[i]) total += integrate(w, nodes[i], nodes[i + 1], qc).value;
    return total;
}

// A radial test function F(|x|) with its first two derivatives.
struct RadialFunction {
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    double inner_scale = 1.0;      // length over which F varies appreciably
    double support = kInf;         // F = 0 beyond this radius
    std::vector<double> kinks;     // radii where F'' is not smooth

    double laplacian(int d, double rho) const {
        if (rho == 0.0) return d * d2(0.0);
        return d2(rho) + (d - 1) * d1(rho) / rho;
    }
};

RadialFunction gaussian_function(double scale = 1.0);
// 1 on [0, r], 0 beyond 2r, quintic C^2 transition.
RadialFunction smooth_bump(double r);

// General smooth test function on R^d (d <= 3) with its Laplacian.
struct TestFunction {
    std::function<double(std::span<const double>)> value;
    std::function<double(std::span<const double>)> laplacian;
    double inner_scale = 1.0;
};

struct GeneratorOptions {
    double epsilon = 0.0;   // small-jump split; 0 means min(1, inner_scale) / 64
    QuadratureConfig quad{1e-10, 0.0, 2000};
};

struct GeneratorValue {
    double value = 0.0;
    double error = 0.0;
};

// Af = sigma2 Lap f + integral (f(x+z) - f(x) - z.grad f(x) 1{|z|<1}) nu(z) dz.
// Jumps below epsilon are replaced by their second-order Taylor term.
GeneratorValue generator_apply(const ProcessSpec& spec, const RadialFunction& f, double rho,
                               const GeneratorOptions& opt = {});
GeneratorValue generator_apply(const ProcessSpec& spec, const TestFunction& f, std::span<const double> x,
                               const GeneratorOptions& opt = {});

} // namespace levypot
