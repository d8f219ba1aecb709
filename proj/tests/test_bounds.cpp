#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "levypot/bounds.hpp"
#include "levypot/errors.hpp"

using namespace levypot;
using std::numbers::pi;

namespace {

ProcessSpec stable3(double alpha) { return make_family(Family::stable, 3, {{"alpha", alpha}}); }

Point at(double a, double b, double c) {
    Point p;
    p[0] = a;
    p[1] = b;
    p[2] = c;
    return p;
}

Estimate exact(double v, double se = 0.0) {
    Estimate e;
    e.mean = v;
    e.stderr_ = se;
    e.n = 1;
    return e;
}

} // namespace

TEST_CASE("closed-form bounds for stable alpha = 1") {
    // K(s) = L(s) = 4 pi / s and nu(s) = s^-4.
    const auto s = stable3(1.0);
    const auto ret = ret_bounds(s, 1.0, 2.0);
    CHECK(ret.upper == doctest::Approx(1.0 / 8.0).epsilon(1e-9));
    CHECK(ret.lower == doctest::Approx(1.0 / (32.0 * pi)).epsilon(1e-9));
    CHECK(std::isnan(ret_bounds(s, 1.0, 1.5).upper));

    const auto pot = pot_bounds(s, 1.0);
    CHECK(pot.upper == doctest::Approx(1.0 / (16.0 * pi)).epsilon(1e-9));
    CHECK(pot.lower == doctest::Approx(1.0 / (64.0 * pi * pi)).epsilon(1e-9));

    const auto g = green_ball_bounds(s, 1.0, Point{}, at(0.5, 0, 0));
    CHECK(g.upper == doctest::Approx(1.0 / pi).epsilon(1e-9));
    CHECK(g.lower == doctest::Approx(1.0 / (16.0 * pi * pi)).epsilon(1e-9));

    const auto sup = sup_bounds(s, 1.0, 0.0);
    CHECK(sup.upper_coeff == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(sup.lower_coeff == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-9));
    // The window ratio is K / (r^d nu) = 4 pi.
    CHECK(sup.creg_upper / sup.creg_lower == doctest::Approx(4.0 * pi).epsilon(1e-9));
}

TEST_CASE("Brownian lower bounds are degenerate") {
    const auto b = make_family(Family::brownian, 3);
    CHECK(ret_bounds(b, 1.0, 2.0).lower == 0.0);
    CHECK(std::isfinite(ret_bounds(b, 1.0, 2.0).upper));
    CHECK(pot_bounds(b, 1.0).lower == 0.0);
    CHECK(pot_bounds(b, 1.0).upper > 0.0);
    CHECK(sup_bounds(b, 1.0, 0.5).lower_coeff == 0.0);
    const auto rep = sandwich("pot", "brownian", "x=1", pot_bounds(b, 1.0), exact(1.0 / (4.0 * pi)), 1e4);
    CHECK(rep.status == "degenerate");
}

TEST_CASE("bounds are homogeneous under stable scaling") {
    const double alpha = 1.5;
    const auto s = stable3(alpha);
    for (double lambda : {0.1, 3.0, 50.0}) {
        const auto a = ret_bounds(s, 1.0, 3.0), b = ret_bounds(s, lambda, 3.0 * lambda);
        CHECK(b.upper == doctest::Approx(a.upper).epsilon(1e-8));
        CHECK(b.lower == doctest::Approx(a.lower).epsilon(1e-8));
        const auto p = pot_bounds(s, 1.0), q = pot_bounds(s, lambda);
        CHECK(q.upper == doctest::Approx(p.upper * std::pow(lambda, alpha - 3.0)).epsilon(1e-8));
        CHECK(q.lower == doctest::Approx(p.lower * std::pow(lambda, alpha - 3.0)).epsilon(1e-8));
    }
}

TEST_CASE("Green bounds are symmetric") {
    const auto s = stable3(0.7);
    const Point x = at(0.3, -0.2, 0.1), y = at(-0.5, 0.4, 0.2);
    const auto a = green_ball_bounds(s, 1.0, x, y), b = green_ball_bounds(s, 1.0, y, x);
    CHECK(a.upper == doctest::Approx(b.upper).epsilon(1e-14));
    CHECK(a.lower == doctest::Approx(b.lower).epsilon(1e-14));
    CHECK_THROWS_AS(green_ball_bounds(s, 1.0, x, x), HypothesisViolated);
    CHECK_THROWS_AS(green_ball_bounds(s, 1.0, x, at(2, 0, 0)), HypothesisViolated);
}

TEST_CASE("half-space estimate") {
    const auto s = stable3(1.0);
    // delta_x = delta_y = r = 1: two boundary factors of 2^-1/2 times K / (r^d (K+L)^2) = 1 / (16 pi).
    const double v = halfspace_estimate(s, at(0, 0, 1), at(0, 1, 1));
    CHECK(v == doctest::Approx(1.0 / (32.0 * pi)).epsilon(1e-9));
    CHECK(halfspace_estimate(s, at(0, 1, 1), at(0, 0, 1)) == doctest::Approx(v).epsilon(1e-14));
    // Deep in the interior the boundary factors tend to 1.
    const double deep = halfspace_estimate(s, at(0, 0, 1e6), at(0, 1, 1e6));
    CHECK(deep == doctest::Approx(pot_bounds(s, 1.0).upper).epsilon(1e-5));
    CHECK_THROWS_AS(halfspace_estimate(s, at(0, 0, -1), at(0, 1, 1)), HypothesisViolated);
}

TEST_CASE("Levy ratio and BHI constants") {
    const auto s = stable3(1.0);
    for (auto [r, R] : {std::pair{0.5, 1.0}, std::pair{1.0, 4.0}, std::pair{2.0, 2.5}})
        CHECK(levy_ratio(s, r, R) == doctest::Approx(std::pow((R + r) / (R - r), 4)).epsilon(1e-9));

    const auto base = bhi_constants(s, 0.5, 1.0);
    CHECK(base.C_levy == doctest::Approx(81.0).epsilon(1e-9));
    CHECK(base.C_exit == doctest::Approx(0.5 / (8.0 * pi)).epsilon(1e-9));
    for (double R : {0.01, 7.0, 300.0}) {
        const auto c = bhi_constants(s, 0.5 * R, R);
        CHECK(c.C_BHI == doctest::Approx(base.C_BHI).epsilon(1e-8));
        CHECK(c.C_levy_tilde == doctest::Approx(base.C_levy_tilde).epsilon(1e-8));
    }
    CHECK_THROWS_AS(levy_ratio(make_family(Family::log_kernel, 3), 0.5, 1.0), UnboundedLevyRatio);
    CHECK_THROWS_AS(bhi_constants(make_family(Family::log_kernel, 3), 0.5, 1.0), UnboundedLevyRatio);
    CHECK_THROWS_AS(bhi_constants(s, 1.0, 1.0), DomainError);
}

TEST_CASE("sandwich reports") {
    const auto id = sandwich("ret", "s", "g", {1.0, 1.0}, exact(1.0), 10.0);
    CHECK(id.implied_c == 1.0);
    CHECK(id.c_lower == 1.0);
    CHECK(id.c_upper == 1.0);
    CHECK(id.status == "ok");
    CHECK_NOTHROW(enforce(id));

    // An estimate 50 times above the upper bound needs c = 50.
    const auto high = sandwich("ret", "s", "g", {0.01, 0.1}, exact(5.0), 10.0);
    CHECK(high.implied_c == doctest::Approx(50.0));
    CHECK(high.status == "violated");
    CHECK_THROWS_AS(enforce(high), OrderingViolated);

    // Standard errors widen the band before a constant is charged.
    const auto noisy = sandwich("ret", "s", "g", {1.0, 1.0}, exact(1.2, 0.1), 10.0);
    CHECK(noisy.implied_c == 1.0);
    const auto low = sandwich("ret", "s", "g", {1.0, 2.0}, exact(0.1, 0.0), 10.0);
    CHECK(low.implied_c == doctest::Approx(10.0));
    CHECK(low.status == "ok");
}

TEST_CASE("rescaling keeps the Pruitt functions") {
    for (const auto& s : {stable3(0.8), make_family(Family::slow_decay, 3, {{"alpha", 0.5}}),
                          make_family(Family::gauss_plus_uniform, 3, {{"lambda", 2.0}, {"R", 1.5}})}) {
        for (double r : {0.05, 0.7, 20.0}) {
            const auto a = pruitt(s, r), b = pruitt(rescaled(s, r), 1.0);
            CHECK(b.K == doctest::Approx(a.K).epsilon(1e-7));
            CHECK(b.L == doctest::Approx(a.L).epsilon(1e-7));
        }
    }
}

TEST_CASE("mollified Newtonian profile") {
    const double R = 6.0, m = 1.0;
    const auto h = mollified_newton_profile(3, R, m);
    for (double x : {0.0, 2.0, R - m}) CHECK(h.value(x) == 1.0);
    for (double x : {R + m, 9.0, 40.0}) CHECK(h.value(x) == doctest::Approx(R / x).epsilon(1e-12));
    for (double x = R - m; x <= R + m; x += 0.01) {
        const double v = h.value(x);
        CHECK(v <= std::min(1.0, R / x) + 1e-9);
        CHECK(v >= std::min(1.0, R / (x + m)) - 1e-9);
    }
    // Smooth across the shell edges.
    CHECK(h.value(R + m - 1e-9) == doctest::Approx(R / (R + m)).epsilon(1e-8));
    CHECK(h.d1(R + m - 1e-9) == doctest::Approx(-R / ((R + m) * (R + m))).epsilon(1e-6));
    CHECK(std::abs(h.d1(R - m + 1e-9)) < 1e-6);
    CHECK_THROWS_AS(mollified_newton_profile(2, R, m), HypothesisViolated);
    CHECK_THROWS_AS(mollified_newton_profile(3, 0.5, m), DomainError);
}

TEST_CASE("superharmonic witness") {
    // Stable kernels have K / L bounded, so every a on the grid is excluded.
    const auto st = superharmonic_witness(stable3(0.5), 1.0);
    CHECK(st.trivial);
    CHECK_NOTHROW(require_witness(st));
    // Slowly decaying jumps at a tiny radius make L / K huge.
    const auto sd = superharmonic_witness(make_family(Family::slow_decay, 3, {{"alpha", 1.9}}), std::exp(-100.0));
    CHECK_FALSE(sd.trivial);
    CHECK(sd.found);
    CHECK(sd.max_generator <= 1e-6 * sd.K * sd.L);
    CHECK(sd.L > 125.0 * sd.K);
    CHECK_NOTHROW(require_witness(sd));
    WitnessReport none;
    CHECK_THROWS_AS(require_witness(none), NoWitnessFound);
}
