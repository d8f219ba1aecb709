#pragma once

#include <functional>
#include <vector>

#include "levypot/bounds.hpp"
#include "levypot/process.hpp"
#include "levypot/simulation.hpp"

namespace levypot {

// Radial part pi(dt) of an isotropic measure P on R^d, P(B_s) = int_[0,s)
// omega_d t^{d-1} pi(dt): an atom at r plus a density, constant on cells, on
// (r, inf). The density is per unit volume of P and integrates against dt.
struct RadialKernel {
    double r = 0.0;
    double atom = 0.0;
    std::vector<double> edges;    // edges.front() == r when there are cells
    std::vector<double> density;  // one value per cell
    double tail = 0.0;            // P-mass beyond the last edge, bookkeeping only

    // pi([a, b)).
    double mass(double a, double b) const;
    double density_at(double s) const;
};

// Cells of `edges` carry the averages of `density` over them.
RadialKernel tabulate_kernel(double r, double atom, const std::function<double(double)>& density,
                             std::vector<double> edges);

// Finite-n averaging: cells I_j of equal length partition [q, top), kernel j
// starts inside I_j, and the weights alpha_j solve
// (alpha_0 pi_0 + ... + alpha_j pi_j)(I_j) = |I_j| by forward substitution.
struct AveragedKernel {
    std::vector<double> cells;   // n + 1 edges from q to top
    std::vector<double> alpha;
    std::vector<RadialKernel> kernels;
    double residual = 0.0;       // max_j |pi_bar(I_j) - |I_j||

    double mass(double a, double b) const;
    double density_at(double s) const;
    double total_weight() const;
};

// Throws ZeroDiagonal when pi_j(I_j) = 0 and NegativeWeight when a weight
// comes out negative beyond rounding.
AveragedKernel dyadic_average(std::vector<RadialKernel> kernels, double q, double top);

struct RegularizationOptions {
    int n = 16;                  // kernel radii
    int outer_cells = 48;        // cells on [r, outer_factor r), graded towards r
    double outer_factor = 1e4;
    SimScheme scheme;
    RunOptions runs;             // paths per kernel; all kernels share the streams
};

// P_bar_{q,r} = C_reg * pi_bar(|z|) built from exit laws P_{B_s}(0, .) on a
// grid s in [q, r].
struct RegularizationKernel {
    double q = 0.0, r = 0.0;
    AveragedKernel averaged;
    double C_reg = 0.0;
    SupBounds window;            // creg_lower and creg_upper without constants
    double implied_c = 0.0;      // smallest c with creg_lower / c <= C_reg <= c creg_upper
    std::vector<double> outer_edges;
    std::vector<double> outer_density;   // P_bar per unit volume on the outer cells
    std::vector<double> outer_stderr;
    std::vector<double> outermost_density;  // exit law of B_r on the same cells
    std::vector<double> outermost_stderr;
    double outside_mass = 0.0;   // P_bar mass beyond the outer grid
    double outside_stderr = 0.0; // stderr of the P_bar mass outside B_r
};

RegularizationKernel regularization_kernel(const ProcessSpec& spec, double q, double r,
                                           const RegularizationOptions& opt = {});

struct MeanValueCheck {
    Estimate averaged;           // integral of u against the tabulated P_bar
    Estimate direct;             // harmonic_eval at the centre
    double difference = 0.0;
    double combined_stderr = 0.0;
    bool agrees(double k = 3.0) const { return std::abs(difference) <= k * combined_stderr; }
};

// u is the regular harmonic function in B_r with exterior values f. The
// averaged side samples z from P_bar; for z inside B_r it runs one path to
// read u(z) = E^z f(X_tau). Kernel noise enters through the outer mass.
MeanValueCheck mean_value_test(const ProcessSpec& spec, const RegularizationKernel& kernel,
                               const std::function<double(const Point&)>& f, const SimScheme& scheme,
                               const RunOptions& opt);

} // namespace levypot
