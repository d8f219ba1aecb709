#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "levypot/jump_table.hpp"
#include "levypot/philox.hpp"
#include "levypot/process.hpp"

namespace levypot {

constexpr int kMaxDim = 8;

struct Point {
    std::array<double, kMaxDim> c{};

    double& operator[](int i) { return c[i]; }
    double operator[](int i) const { return c[i]; }
};

double norm(const Point& x, int d);
double distance(const Point& x, const Point& y, int d);
// The point (0, ..., 0, v) in R^d.
Point axis_point(int d, double v);

// Uniform on (0, 1] and on the unit sphere of R^d.
double uniform_open(Philox& rng);
Point uniform_direction(int d, Philox& rng);

struct SimScheme {
    double epsilon = 1e-4;         // floor of the small-jump cutoff
    double dt = kInf;              // largest diffusive step
    double dt_min = 1e-6;          // smallest diffusive step
    double horizon = kInf;
    double outer_kill_radius = 0;  // hitting problems; 0 means 50 |x|
    bool bridge_correction = true;
    double cutoff_fraction = 0.1;  // cutoff grows to this fraction of the distance to the boundary
    double step_resolution = 4.0;  // a diffusive step moves about distance / step_resolution
    std::uint64_t max_events = 100'000'000;   // jumps plus diffusive steps
};

struct RunOptions {
    std::uint64_t n = 100000;
    std::uint64_t seed = 1;
    int threads = 1;
    std::uint64_t first_path = 0;  // stream offset, for common random numbers across calls
};

struct Estimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    SimScheme scheme;
    double censored_fraction = 0.0;
    bool flagged = false;         // more than 0.1% of paths censored
    double bias_bound = 0.0;      // deterministic truncation bias, when known
};

// Region a path must leave; `distance` is a lower bound on the distance to
// the boundary from an interior point, and a positive value implies the point
// is inside.
class Domain {
public:
    virtual ~Domain() = default;
    virtual bool contains(const Point& x) const = 0;
    virtual double distance(const Point& x) const = 0;
    // Exit point for a continuous crossing ending near y.
    virtual Point boundary_point(const Point& y) const { return y; }
};

class BallDomain : public Domain {
public:
    BallDomain(int d, Point center, double r) : d_(d), center_(center), r_(r) {}
    bool contains(const Point& x) const override;
    double distance(const Point& x) const override;
    Point boundary_point(const Point& y) const override;

private:
    int d_;
    Point center_;
    double r_;
};

// r < |x| < R: the exterior of a target ball, cut at a kill radius.
class ShellDomain : public Domain {
public:
    ShellDomain(int d, double r, double R) : d_(d), r_(r), R_(R) {}
    bool contains(const Point& x) const override;
    double distance(const Point& x) const override;
    Point boundary_point(const Point& y) const override;
    bool hit_inner(const Point& exit) const { return norm(exit, d_) <= r_ * (1.0 + 1e-12); }

private:
    int d_;
    double r_, R_;
};

// {x_d > 0} cut to the box |x_i| < L, x_d < L.
class HalfSpaceDomain : public Domain {
public:
    HalfSpaceDomain(int d, double L) : d_(d), L_(L) {}
    bool contains(const Point& x) const override;
    double distance(const Point& x) const override;
    Point boundary_point(const Point& y) const override;
    bool left_through_floor(const Point& exit) const;

private:
    int d_;
    double L_;
};

// Arbitrary indicator; steps are limited by scheme.dt and the cutoff stays at
// scheme.epsilon, so dt must be finite.
class IndicatorDomain : public Domain {
public:
    explicit IndicatorDomain(std::function<bool(const Point&)> inside) : inside_(std::move(inside)) {}
    bool contains(const Point& x) const override { return inside_(x); }
    double distance(const Point&) const override { return 0.0; }

private:
    std::function<bool(const Point&)> inside_;
};

enum class ExitKind { jump, continuous, censored };

struct PathEnd {
    Point position;
    double time = 0.0;
    ExitKind kind = ExitKind::censored;
    std::uint64_t events = 0;   // jumps plus diffusive steps
};

// Occupation observer: called with (midpoint, duration, start_hold) for each
// piece of time the path spends inside the domain; start_hold marks the exact
// compound Poisson holding time at the start point. `scale` bounds step
// lengths near points where the observer needs resolution.
struct Observer {
    std::function<void(const Point&, double, bool)> occupy;
    std::function<double(const Point&)> scale;
};

// Simulates one killed path from x0 until it leaves the domain.
class PathSimulator {
public:
    PathSimulator(const ProcessSpec& spec, const SimScheme& scheme);

    PathEnd run(const Domain& domain, const Point& x0, Philox& rng, const Observer* obs = nullptr) const;
    // Increment over a fixed time dt with cutoff scheme.epsilon; exact for
    // compound Poisson measures.
    Point increment(double dt, Philox& rng) const;

    const ProcessSpec& spec() const { return spec_; }
    const SimScheme& scheme() const { return scheme_; }
    const JumpTable& jumps() const { return *jumps_; }

private:
    ProcessSpec spec_;
    SimScheme scheme_;
    std::shared_ptr<const JumpTable> jumps_;
};

// Shell histogram around a centre: bin 0 is the ball |y - c| < edges[1],
// bin i the shell edges[i] <= |y - c| < edges[i+1].
struct ShellBins {
    Point center;
    std::vector<double> edges;   // edges[0] = 0, strictly increasing
};
ShellBins log_shells(const Point& center, double inner, double outer, int bins);

struct Histogram {
    std::vector<double> edges;
    std::vector<double> density;   // per unit volume
    std::vector<double> stderr_;
    double atom = 0.0;             // compound Poisson holding time at the start point
    double atom_stderr = 0.0;
    double outside = 0.0;          // mass or time not covered by the bins
    Estimate total;                // total occupation time or total mass
};

Estimate exit_time_ball(const ProcessSpec& spec, const SimScheme& scheme, double r, const Point& x0,
                        const RunOptions& opt);

// Estimate.bias_bound is the hitting-bound expression at the kill radius
// times the killed fraction.
Estimate hit_ball_prob(const ProcessSpec& spec, const SimScheme& scheme, double r, const Point& x,
                       const RunOptions& opt);

Histogram green_ball(const ProcessSpec& spec, const SimScheme& scheme, double r, const Point& x,
                     const ShellBins& bins, const RunOptions& opt);

// Exit-position density from the centre over annuli edges (all > r); the
// continuous-exit mass on the sphere is reported as `atom`.
Histogram poisson_kernel_ball(const ProcessSpec& spec, const SimScheme& scheme, double r,
                              const std::vector<double>& annuli, const RunOptions& opt);

Estimate harmonic_eval(const ProcessSpec& spec, const SimScheme& scheme, const Domain& domain,
                       const std::function<double(const Point&)>& f, const Point& x, const RunOptions& opt);

// E^x of the integral of g(X_t) over [0, tau_D). When g(y) is the intensity
// of jumps from y into a set A at positive distance from D, this equals
// P^x(X_tau in A) and has far less variance than the indicator.
Estimate occupation_integral(const ProcessSpec& spec, const SimScheme& scheme, const Domain& domain,
                             const std::function<double(const Point&)>& g, const Point& x, const RunOptions& opt);

enum class PathFunctional { exit_value, occupation };

// Average, over start points z uniform in the shell a <= |z - center| < b, of
// f(X_tau) (exit_value) or of the occupation integral of f up to tau.
// Start points outside the domain contribute f(z) and 0 respectively.
Estimate shell_average(const ProcessSpec& spec, const SimScheme& scheme, const Domain& domain,
                       const std::function<double(const Point&)>& f, PathFunctional kind, const Point& center,
                       double a, double b, const RunOptions& opt);

// Green function of the half-space at (x, y) from occupation of shells around
// y; `box` is the lateral truncation.
Histogram green_halfspace(const ProcessSpec& spec, const SimScheme& scheme, const Point& x, const ShellBins& bins,
                          double box, const RunOptions& opt);

// Density of X_t over shells around 0 (no killing).
Histogram transition_density(const ProcessSpec& spec, const SimScheme& scheme, double t,
                             const std::vector<double>& edges, const RunOptions& opt);

} // namespace levypot
