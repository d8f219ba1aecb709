#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "levypot/errors.hpp"
#include "levypot/radial.hpp"

using namespace levypot;
using std::numbers::pi;

namespace {

ProcessSpec stable3(double alpha, double A = 1.0) {
    return make_family(Family::stable, 3, {{"alpha", alpha}, {"A", A}});
}

// Density constant of the fractional Laplacian (-Lap)^{alpha/2} in R^d.
double frac_lap_constant(int d, double alpha) {
    return std::pow(2.0, alpha) * std::tgamma(0.5 * (d + alpha)) /
           (std::pow(pi, 0.5 * d) * std::abs(std::tgamma(-0.5 * alpha)));
}

double riesz_constant(int d, double alpha) {
    return std::tgamma(0.5 * (d - alpha)) / (std::pow(2.0, alpha) * std::pow(pi, 0.5 * d) * std::tgamma(0.5 * alpha));
}

} // namespace

TEST_CASE("stable Pruitt functions follow the power law") {
    auto spec = stable3(1.0);
    CHECK(pruitt_K(spec, 1.0) == doctest::Approx(4.0 * pi).epsilon(1e-10));
    CHECK(pruitt_L(spec, 1.0) == doctest::Approx(4.0 * pi).epsilon(1e-10));
    for (double alpha : {0.5, 1.5})
        for (double r : {1e-3, 0.7, 40.0}) {
            auto s = stable3(alpha, 2.0);
            const double base = 2.0 * 4.0 * pi * std::pow(r, -alpha);
            CHECK(pruitt_K(s, r) == doctest::Approx(base / (2.0 - alpha)).epsilon(1e-9));
            CHECK(pruitt_L(s, r) == doctest::Approx(base / alpha).epsilon(1e-9));
        }
    auto v = pruitt(spec, 4.0);
    CHECK(v.sum == doctest::Approx(2.0 * pi));
    CHECK(v.h == doctest::Approx(1.0 / std::sqrt(2.0 * pi)));
}

TEST_CASE("Brownian and compound Poisson Pruitt functions") {
    auto bm = make_family(Family::brownian, 3);
    CHECK(pruitt_K(bm, 2.0) == doctest::Approx(0.75));
    CHECK(pruitt_L(bm, 2.0) == 0.0);

    const double lambda = 2.0, R = 4.0;
    auto two = make_family(Family::two_uniform_cp, 3, {{"lambda", lambda}, {"R", R}});
    for (double r : {4.0, 7.5})
        CHECK(pruitt_K(two, r) == doctest::Approx(0.6 / (r * r) * (1.0 + lambda * R * R)).epsilon(1e-10));
    CHECK(pruitt_L(two, 5.0) == 0.0);
    // Below the small ball everything beyond r is still reachable.
    CHECK(pruitt_L(two, 0.5) == doctest::Approx(1.0 - 0.125 + lambda * (1.0 - 0.125 / 64.0)).epsilon(1e-10));
}

TEST_CASE("derivative identity (K+L)' = -2K/r") {
    std::vector<ProcessSpec> specs{
        stable3(1.0),
        make_family(Family::slow_decay, 3, {{"alpha", 1.0}}),
        make_family(Family::variance_gamma, 3),
        make_family(Family::gauss_plus_uniform, 3, {{"lambda", 1.0}, {"R", 3.0}}),
    };
    for (const auto& spec : specs)
        for (double r : {0.1, 1.0, 10.0}) {
            const double h = 1e-4 * r;
            const double dsum = (pruitt(spec, r + h).sum - pruitt(spec, r - h).sum) / (2.0 * h);
            const double rhs = -2.0 * pruitt_K(spec, r) / r;
            INFO(spec.label << " r=" << r);
            CHECK(dsum == doctest::Approx(rhs).epsilon(1e-6));
        }
}

TEST_CASE("characteristic exponent against closed forms") {
    auto bm = make_family(Family::brownian, 3, {{"sigma2", 0.5}});
    CHECK(psi(bm, 3.0) == doctest::Approx(4.5));

    for (double alpha : {0.5, 1.0, 1.5}) {
        auto spec = stable3(alpha);
        const double c = 1.0 / frac_lap_constant(3, alpha);
        for (double rho : {0.1, 1.0, 10.0}) {
            INFO("alpha=" << alpha << " rho=" << rho);
            CHECK(psi(spec, rho) == doctest::Approx(c * std::pow(rho, alpha)).epsilon(1e-8));
        }
    }
    // Gamma-subordinated Brownian motion: Psi = log(1 + rho^2).
    auto vg = make_family(Family::variance_gamma, 3);
    for (double rho : {0.01, 0.5, 3.0, 100.0})
        CHECK(psi(vg, rho) == doctest::Approx(std::log1p(rho * rho)).epsilon(1e-7));

    // Uniform ball: 1 - 3 (sin u - u cos u) / u^3.
    auto two = make_family(Family::two_uniform_cp, 3, {{"lambda", 2.0}, {"R", 4.0}});
    auto ball = [](double u) { return 3.0 * (std::sin(u) - u * std::cos(u)) / (u * u * u); };
    for (double rho : {0.3, 2.0, 25.0, 1e3, 1e7})
        CHECK(psi(two, rho) == doctest::Approx(1.0 - ball(rho) + 2.0 * (1.0 - ball(4.0 * rho))).epsilon(1e-9));
}

TEST_CASE("stable characteristic exponent is homogeneous") {
    auto spec = stable3(1.5, 0.3);
    const double base = psi(spec, 1.0);
    for (double lam : {0.01, 7.0})
        CHECK(psi(spec, lam) == doctest::Approx(std::pow(lam, 1.5) * base).epsilon(1e-8));
}

TEST_CASE("potential kernel by Fourier inversion") {
    auto bm = make_family(Family::brownian, 3);
    for (double x : {0.5, 1.0, 2.0}) {
        auto u = potential_kernel_fourier(bm, x);
        CHECK(u.value == doctest::Approx(1.0 / (4.0 * pi * x)).epsilon(1e-8));
    }
    for (double alpha : {0.5, 1.0, 1.5}) {
        auto spec = stable3(alpha);
        const double c = frac_lap_constant(3, alpha) * riesz_constant(3, alpha);
        for (double x : {0.5, 1.0, 2.0}) {
            INFO("alpha=" << alpha << " x=" << x);
            CHECK(potential_kernel_fourier(spec, x).value == doctest::Approx(c * std::pow(x, alpha - 3.0)).epsilon(1e-4));
        }
    }
    auto cal = stable3(1.0, 1.0 / (pi * pi));
    CHECK(potential_kernel_fourier(cal, 1.0).value == doctest::Approx(1.0 / (2.0 * pi * pi)).epsilon(1e-4));
    CHECK_THROWS_AS(potential_kernel_fourier(make_family(Family::brownian, 2), 1.0), TransienceNotGuaranteed);
}

TEST_CASE("alternating series summation") {
    auto r = sum_alternating([](int k) { return (k % 2 ? -1.0 : 1.0) / (k + 1.0); }, 1e-12, 1.0);
    CHECK(r.value == doctest::Approx(std::log(2.0)).epsilon(1e-11));
    auto abel = sum_alternating([](int k) { return k % 2 ? -1.0 : 1.0; }, 1e-12, 1.0);
    CHECK(abel.value == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("spherical means of Newtonian kernels") {
    for (int d : {3, 5}) {
        auto f = [d](double u) { return std::pow(u, 2.0 - d); };
        for (auto [rho, t] : {std::pair{1.0, 0.3}, {1.0, 2.5}, {4.0, 3.9}}) {
            const double k[] = {std::abs(rho - t)};
            CHECK(spherical_mean(d, f, rho, t, k) == doctest::Approx(std::pow(std::max(rho, t), 2.0 - d)).epsilon(1e-9));
        }
    }
    // Mean of |y|^2 over a sphere: rho^2 + t^2 in any dimension.
    for (int d : {2, 4})
        CHECK(spherical_mean(d, [](double u) { return u * u; }, 1.5, 0.7) == doctest::Approx(1.5 * 1.5 + 0.49).epsilon(1e-9));
}

TEST_CASE("generator on Gaussians") {
    auto g = gaussian_function();
    auto bm = make_family(Family::brownian, 3);
    CHECK(generator_apply(bm, g, 0.0).value == doctest::Approx(-6.0));
    CHECK(generator_apply(bm, g, 0.8).value == doctest::Approx(g.laplacian(3, 0.8)));

    // Fourier side: Af(0) = -(2 pi)^{-d} int Psi(xi) pi^{d/2} exp(-|xi|^2/4) dxi.
    for (double alpha : {0.5, 1.0, 1.5}) {
        auto spec = stable3(alpha);
        const double c = 1.0 / frac_lap_constant(3, alpha);
        const double exact =
            -std::pow(2.0 * pi, -3.0) * c * 4.0 * pi * std::pow(pi, 1.5) * std::pow(2.0, alpha + 2.0) * std::tgamma(0.5 * (alpha + 3.0));
        auto v = generator_apply(spec, g, 0.0, {1e-3});
        INFO("alpha=" << alpha);
        CHECK(v.value == doctest::Approx(exact).epsilon(1e-4));
    }

    // General path agrees with the radial one.
    auto spec = stable3(1.0);
    TestFunction tf;
    tf.value = [](std::span<const double> x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); };
    tf.laplacian = [](std::span<const double> x) {
        const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        return (4.0 * r2 - 6.0) * std::exp(-r2);
    };
    const double x[] = {0.3, 0.2, -0.1};
    const double rho = std::sqrt(0.14);
    CHECK(generator_apply(spec, tf, x).value == doctest::Approx(generator_apply(spec, g, rho).value).epsilon(1e-5));
}

TEST_CASE("generator on a bump is bounded by |f''| r^2 K(r)") {
    for (auto spec : {stable3(1.0), make_family(Family::variance_gamma, 3), make_family(Family::brownian, 3)}) {
        for (double r : {0.5, 2.0}) {
            auto f = smooth_bump(r);
            double sup_af = -INFINITY, sup_f2 = 0.0;
            for (int i = 0; i <= 60; ++i) {
                const double rho = 3.0 * r * i / 60.0;
                sup_af = std::max(sup_af, generator_apply(spec, f, rho).value);
                sup_f2 = std::max({sup_f2, std::abs(f.d2(rho)), rho > 0 ? std::abs(f.d1(rho) / rho) : 0.0});
            }
            const double ratio = sup_af / (sup_f2 * r * r * pruitt_K(spec, r));
            INFO(spec.label << " r=" << r << " ratio=" << ratio);
            CHECK(ratio > 0.0);
            CHECK(ratio < 10.0);
        }
    }
}

TEST_CASE("jump intensities into half-spaces and annuli") {
    CHECK(sphere_cap_fraction(3, 0.3) == doctest::Approx(0.35).epsilon(1e-14));
    CHECK(sphere_cap_fraction(3, -0.3) == doctest::Approx(0.65).epsilon(1e-14));
    // d = 5: cap density is proportional to (1 - u^2).
    CHECK(sphere_cap_fraction(5, 0.5) == doctest::Approx((2.0 / 3.0 - (0.5 - std::pow(0.5, 3) / 3.0)) * 0.75)
                                             .epsilon(1e-12));

    // nu(s) = s^-3 on the unit ball: 2 pi (log(1/h) - 1 + h).
    const auto lk = make_family(Family::log_kernel, 3);
    for (double h : {0.05, 0.5, 0.95}) CHECK(halfspace_jump_rate(lk, h) == doctest::Approx(2.0 * pi * (std::log(1.0 / h) - 1.0 + h)).epsilon(1e-9));
    CHECK(halfspace_jump_rate(lk, 1.5) == 0.0);
    // Stable alpha = 1, nu(s) = s^-4: pi / h.
    CHECK(halfspace_jump_rate(stable3(1.0), 0.7) == doctest::Approx(pi / 0.7).epsilon(1e-9));

    // Uniform jumps in the unit ball from |y| = 1.5 into 2 <= |z| < 3: the part
    // of B(y, 1) outside B_2, a lens complement.
    const auto cp = make_family(Family::two_uniform_cp, 3, {{"lambda", 0.0}, {"R", 5.0}});
    auto lens = [](double r1, double r2, double dist) {
        return pi * std::pow(r1 + r2 - dist, 2) *
               (dist * dist + 2.0 * dist * (r1 + r2) - 3.0 * (r1 - r2) * (r1 - r2)) / (12.0 * dist);
    };
    const double vol1 = 4.0 * pi / 3.0;
    CHECK(annulus_jump_rate(cp, 1.5, 2.0, 3.0) == doctest::Approx(1.0 - lens(1.0, 2.0, 1.5) / vol1).epsilon(1e-9));
    CHECK(annulus_jump_rate(cp, 0.5, 2.0, 3.0) == 0.0);
    CHECK(annulus_jump_rate(cp, 4.0, 0.0, 3.5) == doctest::Approx(lens(1.0, 3.5, 4.0) / vol1).epsilon(1e-9));
    // Stable alpha = 1 from the centre beyond radius 2: L(2) = 2 pi.
    CHECK(annulus_jump_rate(stable3(1.0), 0.0, 2.0, kInf) == doctest::Approx(2.0 * pi).epsilon(1e-9));
    CHECK_THROWS_AS(annulus_jump_rate(cp, 2.5, 2.0, 3.0), DomainError);
}
