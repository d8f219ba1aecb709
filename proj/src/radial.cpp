#include "levypot/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "levypot/errors.hpp"
#include "levypot/special.hpp"

namespace levypot {

namespace {

std::vector<double> scaled(std::span<const double> xs, double factor) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(x * factor);
    return out;
}

} // namespace

double small_jump_moment(const ProcessSpec& spec, double eps, const QuadratureConfig& cfg) {
    const auto& nu = spec.nu;
    if (nu.vanishes() || eps <= 0.0) return 0.0;
    const int d = spec.d;
    auto f = [&](double s) { return std::pow(s, d + 1) * nu(s); };
    return sphere_area(d) * integrate_radial(f, 0.0, std::min(eps, nu.support_radius), nu.breakpoints, cfg).value;
}

double pruitt_K(const ProcessSpec& spec, double r, const QuadratureConfig& cfg) {
    if (!(r > 0.0)) throw DomainError("pruitt_K needs r > 0");
    return (spec.sigma2 * spec.d + small_jump_moment(spec, r, cfg)) / (r * r);
}

double pruitt_L(const ProcessSpec& spec, double r, const QuadratureConfig& cfg) {
    if (!(r > 0.0)) throw DomainError("pruitt_L needs r > 0");
    const auto& nu = spec.nu;
    if (nu.vanishes() || r >= nu.support_radius) return 0.0;
    const int d = spec.d;
    auto f = [&](double s) { return std::pow(s, d - 1) * nu(s); };
    return sphere_area(d) * integrate_radial(f, r, nu.support_radius, nu.breakpoints, cfg).value;
}

PruittValues pruitt(const ProcessSpec& spec, double r, const QuadratureConfig& cfg) {
    PruittValues v;
    v.r = r;
    v.K = pruitt_K(spec, r, cfg);
    v.L = pruitt_L(spec, r, cfg);
    v.sum = v.K + v.L;
    v.h = 1.0 / std::sqrt(v.sum);
    return v;
}

SeriesResult sum_alternating(const std::function<double(int)>& term, double tol, double scale, int max_terms) {
    constexpr int kWindow = 24;
    std::vector<double> partial;
    partial.reserve(max_terms);
    double sum = 0.0;
    double prev = NAN, prev_delta = INFINITY;
    std::array<double, kWindow> buf{};
    for (int n = 0; n < max_terms; ++n) {
        sum += term(n);
        partial.push_back(sum);
        if (n < 8 || n % 2 == 0) continue;
        const int m = std::min<int>(kWindow, static_cast<int>(partial.size()));
        std::copy(partial.end() - m, partial.end(), buf.begin());
        for (int level = m - 1; level > 0; --level)
            for (int i = 0; i < level; ++i) buf[i] = 0.5 * (buf[i] + buf[i + 1]);
        const double est = buf[0];
        const double delta = std::abs(est - prev);
        const double bound = tol * std::max(std::abs(est), scale);
        if (delta <= bound && prev_delta <= 10.0 * bound) return {est, std::max(delta, prev_delta), n + 1};
        prev = est;
        prev_delta = delta;
    }
    throw NonConvergentQuadrature("oscillatory series did not settle after " + std::to_string(max_terms) + " terms");
}

double halfspace_jump_rate(const ProcessSpec& spec, double h, const QuadratureConfig& cfg) {
    if (!(h > 0.0)) throw DomainError("halfspace_jump_rate needs a point outside the half-space");
    const auto& nu = spec.nu;
    const int d = spec.d;
    if (nu.vanishes() || h >= nu.support_radius) return 0.0;
    auto f = [&](double s) { return nu(s) * std::pow(s, d - 1) * sphere_cap_fraction(d, h / s); };
    return sphere_area(d) * integrate_radial(f, h, nu.support_radius, nu.breakpoints, cfg).value;
}

double annulus_jump_rate(const ProcessSpec& spec, double t, double a, double b, const QuadratureConfig& cfg) {
    if (!(a >= 0.0 && b > a && t >= 0.0)) throw DomainError("annulus_jump_rate needs 0 <= a < b and t >= 0");
    if (t >= a && t <= b) throw DomainError("annulus_jump_rate needs a start point off the closed annulus");
    const auto& nu = spec.nu;
    const int d = spec.d;
    if (nu.vanishes()) return 0.0;
    // Fraction of the sphere of radius s around y that lies inside B_c.
    auto inside = [&](double c, double s) {
        if (std::isinf(c)) return 1.0;
        if (t == 0.0) return s < c ? 1.0 : 0.0;
        return 1.0 - sphere_cap_fraction(d, (c * c - t * t - s * s) / (2.0 * t * s));
    };
    auto f = [&](double s) { return nu(s) * std::pow(s, d - 1) * (inside(b, s) - inside(a, s)); };
    const double lo = t < a ? a - t : t - b;
    const double hi = std::min(b + t, nu.support_radius);
    if (!(hi > lo)) return 0.0;
    std::vector<double> breaks = nu.breakpoints;
    for (double k : {std::abs(a - t), a + t, std::abs(b - t), b + t})
        if (std::isfinite(k)) breaks.push_back(k);
    return sphere_area(d) * integrate_radial(f, lo, hi, breaks, cfg).value;
}

double psi(const ProcessSpec& spec, double rho, const QuadratureConfig& cfg) {
    rho = std::abs(rho);
    if (rho == 0.0) return 0.0;
    const int d = spec.d;
    const double gauss = spec.sigma2 * rho * rho;
    const auto& nu = spec.nu;
    if (nu.vanishes()) return gauss;

    const double omega = sphere_area(d);
    const double usup = rho * nu.support_radius;
    auto breaks = scaled(nu.breakpoints, rho);
    // u = rho is where the density sees s = 1; the near-origin closure needs it.
    breaks.push_back(rho);
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const double z1 = sphere_character_zero(d, 1);
    auto density = [&](double u) { return std::pow(u, d - 1) * nu(u / rho); };

    // First lobe with 1 - j(u); beyond it the two parts separately.
    auto lobe = [&](double u) { return density(u) * one_minus_sphere_character(d, u); };
    const double a = integrate_radial(lobe, 0.0, std::min(z1, usup), breaks, cfg).value;
    if (usup <= z1) return gauss + omega * std::pow(rho, -d) * a;

    const double b = std::pow(rho, d) * pruitt_L(spec, z1 / rho, cfg) / omega;
    auto wave = [&](double u) { return density(u) * sphere_character(d, u); };
    auto half_wave = [&](int k) {
        const double lo = sphere_character_zero(d, k + 1);
        const double hi = std::min(sphere_character_zero(d, k + 2), usup);
        if (!(hi > lo)) return 0.0;
        std::vector<double> nodes{lo};
        for (double x : breaks)
            if (x > lo && x < hi) nodes.push_back(x);
        nodes.push_back(hi);
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) s += integrate(wave, nodes[i], nodes[i + 1], cfg).value;
        return s;
    };
    double c = 0.0;
    if (std::isfinite(usup)) {
        // Explicit half-waves up to u = 40, then the Hankel split of j with
        // Filon-type quadrature, so huge rho * support costs nothing extra.
        int k = 0;
        for (; sphere_character_zero(d, k + 1) < usup && sphere_character_zero(d, k + 1) < 40.0; ++k)
            c += half_wave(k);
        const double ua = sphere_character_zero(d, k + 1);
        if (ua < usup) {
            std::vector<double> nodes{ua};
            for (double x : breaks)
                if (x > ua && x < usup) nodes.push_back(x);
            nodes.push_back(usup);
            auto cos_part = [&](double u) { return density(u) * sphere_character_split(d, u).cos_coeff; };
            auto sin_part = [&](double u) { return density(u) * sphere_character_split(d, u).sin_coeff; };
            QuadratureConfig osc = cfg;
            osc.abs_tol = std::max(cfg.abs_tol, 1e-2 * cfg.rel_tol * std::abs(a + b));
            for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
                c += integrate_oscillatory(cos_part, nodes[i], nodes[i + 1], 1.0, false, osc).value;
                c += integrate_oscillatory(sin_part, nodes[i], nodes[i + 1], 1.0, true, osc).value;
            }
        }
    } else {
        c = sum_alternating(half_wave, 10.0 * cfg.rel_tol, std::abs(a + b)).value;
    }
    return gauss + omega * std::pow(rho, -d) * (a + b - c);
}

KernelValue potential_kernel_fourier(const ProcessSpec& spec, double x, const QuadratureConfig& cfg) {
    const int d = spec.d;
    if (d < 3) throw TransienceNotGuaranteed("potential kernel inversion needs d >= 3");
    if (!(x > 0.0)) throw DomainError("potential kernel needs |x| > 0");
    const double pref = sphere_area(d) / std::pow(2.0 * std::numbers::pi, d) * std::pow(x, -d);
    const QuadratureConfig inner{std::min(1e-11, 0.01 * cfg.rel_tol), 0.0, 4000};
    auto g = [&](double t) { return sphere_character(d, t) * std::pow(t, d - 1) / psi(spec, t / x, inner); };

    const double z1 = sphere_character_zero(d, 1);
    const auto head = integrate_radial(g, 0.0, z1, {}, cfg);
    auto half_wave = [&](int k) {
        return integrate(g, sphere_character_zero(d, k + 1), sphere_character_zero(d, k + 2), cfg).value;
    };
    const auto tail = sum_alternating(half_wave, 10.0 * cfg.rel_tol, std::abs(head.value));
    return {pref * (head.value + tail.value), pref * (head.error + tail.error)};
}

RadialFunction gaussian_function(double scale) {
    const double c = 1.0 / (scale * scale);
    RadialFunction f;
    f.value = [c](double r) { return std::exp(-c * r * r); };
    f.d1 = [c](double r) { return -2.0 * c * r * std::exp(-c * r * r); };
    f.d2 = [c](double r) { return (-2.0 * c + 4.0 * c * c * r * r) * std::exp(-c * r * r); };
    f.inner_scale = scale;
    return f;
}

RadialFunction smooth_bump(double r) {
    RadialFunction f;
    f.value = [r](double x) {
        const double u = x / r - 1.0;
        if (u <= 0.0) return 1.0;
        if (u >= 1.0) return 0.0;
        return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
    };
    f.d1 = [r](double x) {
        const double u = x / r - 1.0;
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return -30.0 * u * u * (1.0 - u) * (1.0 - u) / r;
    };
    f.d2 = [r](double x) {
        const double u = x / r - 1.0;
        if (u <= 0.0 || u >= 1.0) return 0.0;
        return -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u) / (r * r);
    };
    f.inner_scale = r;
    f.support = 2.0 * r;
    f.kinks = {r, 2.0 * r};
    return f;
}

namespace {

double default_epsilon(const GeneratorOptions& opt, double inner_scale) {
    return opt.epsilon > 0.0 ? opt.epsilon : std::min(1.0, inner_scale) / 64.0;
}

// Rough size of the first neglected Taylor term of the small-jump part.
double taylor_error(int d, double lap, double m2, double eps, double scale) {
    const double ratio = eps / scale;
    return std::abs(lap) * m2 / (2.0 * d) * ratio * ratio / (4.0 * (d + 2));
}

} // namespace

GeneratorValue generator_apply(const ProcessSpec& spec, const RadialFunction& f, double rho,
                               const GeneratorOptions& opt) {
    const int d = spec.d;
    const auto& nu = spec.nu;
    const double eps = default_epsilon(opt, f.inner_scale);
    const double lap = f.laplacian(d, rho);
    const double m2 = small_jump_moment(spec, eps, opt.quad);
    GeneratorValue out;
    out.value = (spec.sigma2 + m2 / (2.0 * d)) * lap;
    out.error = taylor_error(d, lap, m2, eps, f.inner_scale);
    if (nu.vanishes() || eps >= nu.support_radius) return out;

    const double f0 = f.value(rho);
    std::vector<double> kinks = f.kinks;
    if (std::isfinite(f.support)) kinks.push_back(f.support);
    std::vector<double> breaks = nu.breakpoints;
    for (double k : kinks) {
        breaks.push_back(std::abs(rho - k));
        breaks.push_back(rho + k);
    }
    const double far = rho + f.support;   // spheres beyond this miss the support of f
    const double top = std::min(nu.support_radius, far);
    double fscale = std::abs(f0) + std::abs(f.value(0.0));
    for (double k : kinks) fscale = std::max(fscale, std::abs(f.value(0.5 * k)));
    const QuadratureConfig inner{std::min(1e-12, 0.01 * opt.quad.rel_tol), 1e-14 * fscale, 1000};
    auto integrand = [&](double s) {
        const double m = spherical_mean(d, f.value, rho, s, kinks, inner);
        return std::pow(s, d - 1) * nu(s) * (m - f0);
    };
    const double omega = sphere_area(d);
    if (top > eps) {
        // The integrand can vanish identically (flat parts of f); give the
        // quadrature an absolute floor tied to the size of the jump part.
        QuadratureConfig qc = opt.quad;
        const double size = std::abs(f0) + std::abs(lap) * f.inner_scale * f.inner_scale;
        qc.abs_tol = std::max(qc.abs_tol, 1e-13 * size * (pruitt_L(spec, eps) + m2 / (eps * eps)) / omega);
        const auto q = integrate_radial(integrand, eps, top, breaks, qc);
        out.value += omega * q.value;
        out.error += omega * q.error;
    }
    if (far < nu.support_radius) out.value -= f0 * pruitt_L(spec, std::max(eps, far), opt.quad);
    return out;
}

GeneratorValue generator_apply(const ProcessSpec& spec, const TestFunction& f, std::span<const double> x,
                               const GeneratorOptions& opt) {
    const int d = spec.d;
    if (d > 3) throw DomainError("general test functions are supported for d <= 3");
    if (static_cast<int>(x.size()) != d) throw DomainError("point dimension does not match the process");
    const auto& nu = spec.nu;
    const double eps = default_epsilon(opt, f.inner_scale);
    const double lap = f.laplacian(x);
    const double m2 = small_jump_moment(spec, eps, opt.quad);
    GeneratorValue out;
    out.value = (spec.sigma2 + m2 / (2.0 * d)) * lap;
    out.error = taylor_error(d, lap, m2, eps, f.inner_scale);
    if (nu.vanishes() || eps >= nu.support_radius) return out;

    // Direction rule on the unit sphere: weights sum to one.
    std::vector<std::array<double, 3>> dirs;
    std::vector<double> wts;
    if (d == 1) {
        dirs = {{1, 0, 0}, {-1, 0, 0}};
        wts = {0.5, 0.5};
    } else if (d == 2) {
        constexpr int n = 96;
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * std::numbers::pi * i / n;
            dirs.push_back({std::cos(a), std::sin(a), 0});
            wts.push_back(1.0 / n);
        }
    } else {
        using GL = boost::math::quadrature::gauss<double, 24>;
        constexpr int nphi = 48;
        std::vector<std::pair<double, double>> cosines;
        for (std::size_t i = 0; i < GL::abscissa().size(); ++i) {
            cosines.emplace_back(GL::abscissa()[i], GL::weights()[i]);
            if (GL::abscissa()[i] != 0.0) cosines.emplace_back(-GL::abscissa()[i], GL::weights()[i]);
        }
        for (auto [c, w] : cosines) {
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (int j = 0; j < nphi; ++j) {
                const double a = 2.0 * std::numbers::pi * (j + 0.5) / nphi;
                dirs.push_back({s * std::cos(a), s * std::sin(a), c});
                wts.push_back(0.5 * w / nphi);
            }
        }
    }
    const double f0 = f.value(x);
    std::array<double, 3> y{};
    auto mean_diff = [&](double s) {
        double acc = 0.0;
        for (std::size_t k = 0; k < dirs.size(); ++k) {
            for (int i = 0; i < d; ++i) y[i] = x[i] + s * dirs[k][i];
            acc += wts[k] * (f.value(std::span<const double>(y.data(), d)) - f0);
        }
        return acc;
    };
    auto integrand = [&](double s) { return std::pow(s, d - 1) * nu(s) * mean_diff(s); };
    const auto q = integrate_radial(integrand, eps, nu.support_radius, nu.breakpoints, opt.quad);
    const double omega = sphere_area(d);
    out.value += omega * q.value;
    out.error += omega * q.error;
    return out;
}

} // namespace levypot
