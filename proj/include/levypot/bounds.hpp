#pragma once

#include <string>
#include <vector>

#include "levypot/process.hpp"
#include "levypot/radial.hpp"
#include "levypot/simulation.hpp"

namespace levypot {

// Two sides of a comparability estimate, without the unknown constant c(d).
// A side that does not apply is NaN.
struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
};

// P^x(T_r < inf): upper needs |x| >= 2r and d >= 3, lower needs |x| >= r.
BoundPair ret_bounds(const ProcessSpec& spec, double r, double x_norm);
// Potential kernel U(x); needs d >= 3.
BoundPair pot_bounds(const ProcessSpec& spec, double x_norm);
// Green function of B_r at (x, y), x != y inside the ball.
BoundPair green_ball_bounds(const ProcessSpec& spec, double r, const Point& x, const Point& y);

struct SupBounds {
    double lower_coeff = 0.0;   // multiplies the integral of f over B_r \ B_q
    double upper_coeff = 0.0;   // multiplies the integral of f outside B_q
    double creg_lower = 0.0;    // window for the constant of the regularised exit kernel
    double creg_upper = 0.0;
};
SupBounds sup_bounds(const ProcessSpec& spec, double r, double q);

// Half-space Green function shape at x, y with x_d, y_d > 0.
double halfspace_estimate(const ProcessSpec& spec, const Point& x, const Point& y);

// sup over s > b of nu(s - a) / nu(s + a), for 0 < a < b.
double levy_ratio(const ProcessSpec& spec, double a, double b);

struct BhiConstants {
    double C_levy = 0.0;       // levy_ratio(r, R)
    double C_levy_tilde = 0.0; // max over the three ratios of the assembled constant
    double rho_bound = 0.0;    // (R / (R - r))^2 K(R)
    double C_green = 0.0;      // K(s - r) / ((s - r)^d (K + L)(R)^2) at s = (r + R) / 2
    double C_exit = 0.0;       // 1 / (K + L)(r)
    double C_BHI = 0.0;
};
BhiConstants bhi_constants(const ProcessSpec& spec, double r, double R);

struct SandwichReport {
    std::string theorem;
    std::string spec;
    std::string geometry;
    double lower = 0.0;
    Estimate estimate;
    double upper = 0.0;
    double c_lower = 0.0;    // estimate / lower
    double c_upper = 0.0;    // upper / estimate
    double implied_c = 1.0;  // smallest c with lower/c <= estimate <= c upper, within the stderr slack
    std::string status;      // ok, degenerate (lower side vacuous), violated
};

// Compares an estimate with a bound pair; `slack` standard errors are granted
// on each side and the constant may not exceed c_budget.
SandwichReport sandwich(std::string theorem, std::string spec, std::string geometry, const BoundPair& bounds,
                        const Estimate& estimate, double c_budget, double slack = 3.0);
// Throws OrderingViolated for a violated report.
void enforce(const SandwichReport& report);

// h_R * kappa, where h_R(x) = min(1, (R / |x|)^{d-2}) and kappa is a smooth
// radial probability density supported in B_m. The profile equals h_R outside
// R - m < |x| < R + m and is built from its Laplacian, which is the surface
// measure of the sphere of radius R smoothed by kappa.
RadialFunction mollified_newton_profile(int d, double R, double m);

struct WitnessOptions {
    std::vector<double> a_grid;   // empty means 2^(-k/4), k = 1..80
    std::vector<double> b_grid;   // empty means 2^(-k/2), k = 1..40
    double tolerance = 1e-6;      // allowed max of A f, relative to K(r) L(r)
    int points_per_decade = 24;   // radial evaluation grid outside B_r
};

// Search for a, b such that f = b L(r) g + K(r) h is superharmonic outside
// B_r, with g = 1 on B_r and 0 off B_2r and h the profile above at
// R = (a L(r) / K(r))^{1/d} r. The trivial case is a L(r) <= 5^d K(r) for
// every a in the grid; then P^x(T_r < inf) <= c K / (K + L) needs no witness.
struct WitnessReport {
    bool trivial = false;
    bool found = false;
    double K = 0.0;
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
    double R = 0.0;
    double max_generator = 0.0;  // max of A f over the grid for (a, b)
    double scale = 0.0;          // K(r) L(r)
    std::vector<double> radii;   // evaluation radii, in units of r
    std::vector<double> generator;
};
WitnessReport superharmonic_witness(const ProcessSpec& spec, double r, const WitnessOptions& opt = {});
// Throws NoWitnessFound when a non-trivial search came up empty.
void require_witness(const WitnessReport& report);

} // namespace levypot
