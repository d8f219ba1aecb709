#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "levypot/errors.hpp"
#include "levypot/jump_table.hpp"
#include "levypot/philox.hpp"
#include "levypot/radial.hpp"
#include "levypot/simulation.hpp"
#include "levypot/special.hpp"

using namespace levypot;
using std::numbers::pi;

namespace {

ProcessSpec brownian3() { return make_family(Family::brownian, 3, {{"sigma2", 1.0}}); }

// Stable(d=3, alpha) with A chosen so that Psi(rho) = rho^alpha.
ProcessSpec calibrated_stable3(double alpha) {
    const double A = 1.0 / psi(make_family(Family::stable, 3, {{"alpha", alpha}}), 1.0);
    return make_family(Family::stable, 3, {{"alpha", alpha}, {"A", A}});
}

RunOptions runs(std::uint64_t n, std::uint64_t seed = 7, int threads = 1) {
    RunOptions o;
    o.n = n;
    o.seed = seed;
    o.threads = threads;
    return o;
}

void check_within(double value, double target, double stderr_, double k = 4.0) {
    INFO("value " << value << " target " << target << " stderr " << stderr_);
    CHECK(std::abs(value - target) <= k * stderr_);
}

} // namespace

TEST_CASE("Philox matches the published known-answer vectors") {
    const auto zeros = Philox::bijection({0, 0, 0, 0}, {0, 0});
    CHECK(zeros == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    const auto pis = Philox::bijection({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
    CHECK(pis == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("Philox streams are reproducible and distinct") {
    Philox a(5, 3), b(5, 3), c(5, 4);
    bool all_equal_c = true;
    for (int i = 0; i < 16; ++i) {
        const auto x = a();
        CHECK(x == b());
        all_equal_c = all_equal_c && x == c();
    }
    CHECK_FALSE(all_equal_c);
}

TEST_CASE("jump tables reproduce closed-form tails") {
    const JumpTable stable(make_family(Family::stable, 3, {{"alpha", 1.0}}));
    CHECK_FALSE(stable.finite_mass());
    CHECK(stable.tail_rate(0.01) == doctest::Approx(400.0 * pi).epsilon(1e-8));
    CHECK(stable.tail_rate(3.0) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-8));
    CHECK(stable.small_variance(0.01) == doctest::Approx(4.0 * pi / 3.0 * 0.01).epsilon(1e-8));
    // Conditioned on exceeding eps, the radius is Pareto: P(R > s) = eps / s.
    for (double u : {0.9, 0.5, 0.1, 1e-4}) CHECK(stable.sample_tail(0.01, u) == doctest::Approx(0.01 / u).epsilon(1e-7));
    CHECK_THROWS_AS(stable.tail_rate(0.0), CutoffTooSmall);

    const JumpTable log_kernel(make_family(Family::log_kernel, 3));
    CHECK(log_kernel.tail_rate(0.01) == doctest::Approx(4.0 * pi * std::log(100.0)).epsilon(1e-8));
    CHECK(log_kernel.tail_rate(1.5) == 0.0);
}

TEST_CASE("finite jump tables invert the radial law") {
    // Mass 1 uniform on B_1 plus mass 10 uniform on B_100.
    const JumpTable cp(make_family(Family::two_uniform_cp, 3, {{"lambda", 10.0}, {"R", 100.0}}));
    CHECK(cp.finite_mass());
    CHECK(cp.mass() == doctest::Approx(11.0).epsilon(1e-8));
    auto cdf = [](double s) { return s < 1.0 ? (s * s * s + 10.0 * std::pow(s / 100.0, 3)) / 11.0
                                             : (1.0 + 10.0 * std::pow(s / 100.0, 3)) / 11.0; };
    const double s_half = std::cbrt(0.5 / (1.0 + 1e-5));
    CHECK(cp.sample_finite(1.0 / 22.0) == doctest::Approx(s_half).epsilon(1e-6));
    for (double u : {1e-6, 0.01, 0.3, 0.6, 0.95}) {
        const double s = cp.sample_finite(u);
        CHECK(cdf(s) == doctest::Approx(u).epsilon(1e-5));
    }
    CHECK(cp.sample_finite(1.0) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("Brownian increments have variance 2 sigma2 t per coordinate") {
    const PathSimulator sim(brownian3(), SimScheme{});
    double sum = 0.0, sumsq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        Philox rng(11, i);
        const Point x = sim.increment(0.5, rng);
        for (int k = 0; k < 3; ++k) {
            sum += x[k];
            sumsq += x[k] * x[k];
        }
    }
    const double m = 3.0 * n;
    CHECK(std::abs(sum / m) < 4.0 * std::sqrt(1.0 / m));
    // Var of a sample variance of N(0, 1) is 2 / m.
    check_within(sumsq / m, 1.0, std::sqrt(2.0 / m));
}

TEST_CASE("results do not depend on the thread count") {
    const auto spec = calibrated_stable3(1.0);
    const auto a = exit_time_ball(spec, SimScheme{}, 1.0, Point{}, runs(6000, 3, 1));
    const auto b = exit_time_ball(spec, SimScheme{}, 1.0, Point{}, runs(6000, 3, 3));
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);
    const auto c = exit_time_ball(spec, SimScheme{}, 1.0, Point{}, runs(6000, 4, 1));
    CHECK(a.mean != c.mean);
}

TEST_CASE("Brownian exit time and hitting probability match closed forms") {
    const auto spec = brownian3();
    const auto exit = exit_time_ball(spec, SimScheme{}, 1.0, Point{}, runs(40000));
    check_within(exit.mean, 1.0 / 6.0, exit.stderr_);
    CHECK(exit.censored_fraction == 0.0);

    SimScheme sc;
    sc.outer_kill_radius = 2e3;
    const auto hit = hit_ball_prob(spec, sc, 1.0, axis_point(3, 2.0), runs(20000));
    // Killing at R removes at most the hitting probability from R, r / R.
    check_within(hit.mean, 0.5, std::hypot(hit.stderr_, 5e-4));
    CHECK(hit.bias_bound <= 1.0 / 2e3);
}

TEST_CASE("stable exit time and hitting probability match closed forms") {
    // E^0 tau_{B_1} = Gamma(d/2) / (2^alpha Gamma(1 + alpha/2) Gamma((d + alpha)/2)) = 1/2 for d=3, alpha=1.
    const auto spec = calibrated_stable3(1.0);
    const auto exit = exit_time_ball(spec, SimScheme{}, 1.0, Point{}, runs(40000));
    check_within(exit.mean, 0.5, exit.stderr_);
    // For d = 3, alpha = 1: P^x(T_{B_r} < inf) = 1 - sqrt(1 - r^2 / |x|^2).
    const auto hit = hit_ball_prob(spec, SimScheme{}, 1.0, axis_point(3, 2.0), runs(40000));
    check_within(hit.mean, 1.0 - std::sqrt(0.75), std::hypot(hit.stderr_, hit.bias_bound));
    const auto far = hit_ball_prob(spec, SimScheme{}, 1.0, axis_point(3, 4.0), runs(40000));
    check_within(far.mean, 1.0 - std::sqrt(15.0 / 16.0), std::hypot(far.stderr_, far.bias_bound));
}

TEST_CASE("compound Poisson exit is exact") {
    // Unit-rate jumps uniform on B_1: the path holds at least one exponential
    // time and always exits by a jump.
    const auto spec = make_family(Family::two_uniform_cp, 3, {{"lambda", 0.0}});
    const auto exit = exit_time_ball(spec, SimScheme{}, 0.5, Point{}, runs(40000));
    CHECK(exit.mean > 1.0);
    // Exit positions lie within one jump of B_{1/2}.
    const auto pk = poisson_kernel_ball(spec, SimScheme{}, 0.5, {0.5, 1.0, 1.5}, runs(40000));
    CHECK(pk.atom == 0.0);
    CHECK(pk.outside == 0.0);
    const double shells = pk.density[0] * shell_volume(3, 0.5, 1.0) + pk.density[1] * shell_volume(3, 1.0, 1.5);
    CHECK(shells == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Brownian Green function of the ball") {
    const auto spec = brownian3();
    const auto bins = log_shells(Point{}, 0.05, 0.95, 6);
    const auto h = green_ball(spec, SimScheme{}, 1.0, Point{}, bins, runs(20000));
    // G(0, y) = (1 / 4 pi)(1 / |y| - 1), averaged over each shell.
    for (std::size_t i = 1; i + 1 < h.edges.size(); ++i) {
        const double a = h.edges[i], b = h.edges[i + 1];
        const double exact = ((b * b - a * a) / 2.0 - (b * b * b - a * a * a) / 3.0) / (b * b * b - a * a * a) * 3.0;
        INFO("shell " << a << " to " << b);
        check_within(h.density[i], exact / (4.0 * pi), std::hypot(h.stderr_[i], 0.03 * exact / (4.0 * pi)));
    }
    // Occupation time integrates to the exit time.
    double total = h.outside + h.atom;
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) total += h.density[i] * shell_volume(3, h.edges[i], h.edges[i + 1]);
    CHECK(total == doctest::Approx(h.total.mean).epsilon(1e-9));
    check_within(h.total.mean, 1.0 / 6.0, h.total.stderr_);
}

TEST_CASE("exit distributions are probability measures") {
    const auto bm = poisson_kernel_ball(brownian3(), SimScheme{}, 1.0, {1.0, 2.0}, runs(2000));
    CHECK(bm.atom == 1.0);
    const auto st = poisson_kernel_ball(calibrated_stable3(1.0), SimScheme{}, 1.0, {1.0, 2.0, 4.0, 8.0}, runs(20000));
    double mass = st.atom + st.outside;
    for (std::size_t i = 0; i + 1 < st.edges.size(); ++i)
        mass += st.density[i] * shell_volume(3, st.edges[i], st.edges[i + 1]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(st.atom == 0.0);
    // The exit law from the centre of B_1 for alpha = 1 gives |X| > 2 with
    // probability (2/pi) arctan(1/sqrt(3)) = 1/3.
    double beyond2 = st.outside;
    for (std::size_t i = 1; i + 1 < st.edges.size(); ++i)
        beyond2 += st.density[i] * shell_volume(3, st.edges[i], st.edges[i + 1]);
    check_within(beyond2, 1.0 / 3.0, std::sqrt(2.0 / 9.0 / 20000.0));
}

TEST_CASE("harmonic evaluation of constants and odd data") {
    const auto spec = calibrated_stable3(1.0);
    const BallDomain ball(3, Point{}, 1.0);
    const auto one = harmonic_eval(spec, SimScheme{}, ball, [](const Point&) { return 1.0; }, Point{}, runs(5000));
    CHECK(one.mean == 1.0);
    const auto odd = harmonic_eval(spec, SimScheme{}, ball, [](const Point& z) { return z[0] > 0.0 ? 1.0 : 0.0; },
                                   Point{}, runs(20000));
    check_within(odd.mean, 0.5, odd.stderr_);
}

TEST_CASE("half-space Green function is symmetric") {
    const auto spec = calibrated_stable3(1.0);
    const Point x = axis_point(3, 1.0);
    Point y = axis_point(3, 1.0);
    y[0] = 1.0;
    const auto gxy = green_halfspace(spec, SimScheme{}, x, log_shells(y, 0.1, 0.2, 2), 200.0, runs(40000));
    const auto gyx = green_halfspace(spec, SimScheme{}, y, log_shells(x, 0.1, 0.2, 2), 200.0, runs(40000, 8));
    check_within(gxy.density[0], gyx.density[0], std::hypot(gxy.stderr_[0], gyx.stderr_[0]));
    CHECK(gxy.density[0] > 0.0);
    CHECK_THROWS_AS(green_halfspace(make_family(Family::brownian, 2), SimScheme{}, axis_point(2, 1.0),
                                    log_shells(axis_point(2, 1.0), 0.1, 0.2, 2), 10.0, runs(10)),
                    HypothesisViolated);
}

TEST_CASE("transition density of Brownian motion") {
    const auto h = transition_density(brownian3(), SimScheme{}, 0.25, {0.0, 0.5, 1.0, 2.0}, runs(100000));
    // |X_t| / sqrt(2t) is chi with three degrees of freedom; mass within 1 (sqrt(2t) = 1/sqrt 2).
    const double z = std::sqrt(2.0);
    const double below1 = std::erf(z / std::sqrt(2.0)) - std::sqrt(2.0 / pi) * z * std::exp(-z * z / 2.0);
    const double m = h.density[0] * shell_volume(3, 0.0, 0.5) + h.density[1] * shell_volume(3, 0.5, 1.0);
    check_within(m, below1, std::sqrt(below1 * (1.0 - below1) / 100000.0));
}

TEST_CASE("argument checks") {
    CHECK_THROWS_AS(exit_time_ball(brownian3(), SimScheme{}, 1.0, axis_point(3, 2.0), runs(10)), DomainError);
    CHECK_THROWS_AS(hit_ball_prob(brownian3(), SimScheme{}, 1.0, axis_point(3, 0.5), runs(10)), DomainError);
    SimScheme bad;
    bad.epsilon = 0.0;
    CHECK_THROWS_AS(PathSimulator(calibrated_stable3(1.0), bad), CutoffTooSmall);
}

TEST_CASE("occupation integrals") {
    const auto b = make_family(Family::brownian, 3);
    const BallDomain unit(3, Point{}, 1.0);
    RunOptions opt;
    opt.n = 20000;
    const auto t = occupation_integral(b, SimScheme{}, unit, [](const Point&) { return 1.0; }, Point{}, opt);
    CHECK(std::abs(t.mean - 1.0 / 6.0) <= 4.0 * t.stderr_ + 2e-3);
    // Jump intensity beyond radius 2 integrated along the path is the exit
    // mass there, 1/3 for the calibrated stable process.
    const auto s = calibrated_stable3(1.0);
    const auto far = occupation_integral(
        s, SimScheme{}, unit, [&](const Point& y) { return annulus_jump_rate(s, norm(y, 3), 2.0, kInf); }, Point{}, opt);
    CHECK(std::abs(far.mean - 1.0 / 3.0) <= 4.0 * far.stderr_ + 3e-3);
}
