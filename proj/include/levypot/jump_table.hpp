#pragma once

#include <cmath>
#include <vector>

#include "levypot/process.hpp"

namespace levypot {

// Monotone function of s tabulated against u = log s with cubic Hermite
// segments using exact one-sided derivatives. Segments hold log of the value,
// except a final segment that reaches zero, which holds the value itself.
// Outside the table the function continues as a power law.
class LogSpline {
public:
    LogSpline() = default;
    // s strictly increasing, v > 0 except possibly v.back() == 0; dv_left[i]
    // and dv_right[i] are dv/ds just left and right of s[i].
    LogSpline(std::vector<double> s, std::vector<double> v, std::vector<double> dv_left, std::vector<double> dv_right);

    double operator()(double s) const;
    // s with f(s) = target, for a monotone table; target must lie in the range.
    double inverse(double target) const;

    double front_s() const { return std::exp(seg_.front().u0); }
    double back_s() const { return std::exp(seg_.back().u1); }
    bool increasing() const { return increasing_; }

private:
    struct Segment {
        double u0, u1;
        double g0, g1;   // log v at the ends, or v on a linear segment
        double m0, m1;   // dg/du at the ends
        bool linear;
    };
    double represent(const Segment& seg, double u) const;
    double value(const Segment& seg, double u) const;

    std::vector<Segment> seg_;
    bool zero_end_ = false;
    bool increasing_ = false;
};

// Jump-size law of a radial Levy measure:
//   tail(eps)  = omega int_eps^inf s^{d-1} nu(s) ds   (rate of jumps longer than eps)
//   small(eps) = omega/d int_0^eps s^{d+1} nu(s) ds  (per-coordinate variance rate of the rest)
// For finite measures the cumulative law from zero is tabulated instead, so
// that short jumps keep full relative precision.
class JumpTable {
public:
    explicit JumpTable(const ProcessSpec& spec);

    bool finite_mass() const { return finite_; }
    bool has_jumps() const { return has_jumps_; }
    double mass() const { return mass_; }

    double tail_rate(double eps) const;
    double small_variance(double eps) const;

    // Jump radius conditioned on exceeding eps, from a uniform u in (0, 1].
    double sample_tail(double eps, double u) const;
    // Jump radius of the normalised finite measure, u in (0, 1].
    double sample_finite(double u) const;

private:
    int d_ = 0;
    bool finite_ = false;
    bool has_jumps_ = false;
    double mass_ = 0.0;
    double support_ = kInf;
    LogSpline tail_;       // tail(s), infinite measures
    LogSpline small_;      // small(s), infinite measures
    LogSpline cumulative_; // omega int_0^s, finite measures
};

} // namespace levypot
