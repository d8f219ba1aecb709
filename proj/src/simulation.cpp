#include "levypot/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levypot/bounds.hpp"
#include "levypot/errors.hpp"
#include "levypot/parallel.hpp"
#include "levypot/special.hpp"

namespace levypot {

namespace {

// Uniform on (0, 1]; never returns zero, so logs and inverse tails are safe.
// Marsaglia's polar method on the raw 64-bit stream; the library
// distribution goes through generate_canonical in long double and costs
// several times more per draw.
struct Draws {
    Philox& rng;
    double spare = 0.0;
    bool has_spare = false;

    double uniform() { return uniform_open(rng); }
    double gauss() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u, v, s;
        do {
            // Two signed 32-bit halves of one draw; the offset keeps the
            // lattice symmetric about zero.
            const std::uint64_t w = rng();
            u = (static_cast<double>(static_cast<std::int32_t>(w)) + 0.5) * 0x1.0p-31;
            v = (static_cast<double>(static_cast<std::int32_t>(w >> 32)) + 0.5) * 0x1.0p-31;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare = v * f;
        has_spare = true;
        return u * f;
    }
    double exponential(double rate) { return -std::log(uniform()) / rate; }
};

Point random_direction(int d, Draws& draws) {
    Point u;
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (int i = 0; i < d; ++i) {
            u[i] = draws.gauss();
            n2 += u[i] * u[i];
        }
    } while (n2 == 0.0);
    const double inv = 1.0 / std::sqrt(n2);
    for (int i = 0; i < d; ++i) u[i] *= inv;
    return u;
}

struct ScalarAcc {
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t n = 0, censored = 0;

    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++n;
    }
    void merge(const ScalarAcc& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        n += o.n;
        censored += o.censored;
    }
};

Estimate finish(const ScalarAcc& acc, const SimScheme& scheme, const RunOptions& opt) {
    Estimate e;
    e.n = acc.n;
    e.seed = opt.seed;
    e.scheme = scheme;
    if (acc.n == 0) return e;
    const double n = static_cast<double>(acc.n);
    e.mean = acc.sum / n;
    const double var = acc.n > 1 ? std::max(0.0, (acc.sumsq - n * e.mean * e.mean) / (n - 1.0)) : 0.0;
    e.stderr_ = std::sqrt(var / n);
    e.censored_fraction = static_cast<double>(acc.censored) / n;
    e.flagged = e.censored_fraction > 1e-3;
    return e;
}

// Per-bin sums over paths plus scratch space for the current path.
struct HistAcc {
    std::vector<double> sum, sumsq, scratch;
    double atom = 0.0, atom_sq = 0.0, atom_path = 0.0;
    double outside = 0.0, outside_path = 0.0;
    ScalarAcc total;

    explicit HistAcc(std::size_t bins = 0) : sum(bins), sumsq(bins), scratch(bins) {}

    void start_path() {
        std::fill(scratch.begin(), scratch.end(), 0.0);
        atom_path = outside_path = 0.0;
    }
    void end_path(double total_value, bool censored) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += scratch[i];
            sumsq[i] += scratch[i] * scratch[i];
        }
        atom += atom_path;
        atom_sq += atom_path * atom_path;
        outside += outside_path;
        total.add(total_value);
        if (censored) ++total.censored;
    }
    void merge(const HistAcc& o) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += o.sum[i];
            sumsq[i] += o.sumsq[i];
        }
        atom += o.atom;
        atom_sq += o.atom_sq;
        outside += o.outside;
        total.merge(o.total);
    }
};

std::size_t shell_index(const ShellBins& bins, const Point& x, int d) {
    const double r = distance(x, bins.center, d);
    const auto it = std::upper_bound(bins.edges.begin(), bins.edges.end(), r);
    return static_cast<std::size_t>(it - bins.edges.begin()) - 1;   // == edges.size() - 1 when beyond
}

Histogram finish_hist(const HistAcc& acc, const std::vector<double>& edges, int d, const SimScheme& scheme,
                      const RunOptions& opt, double volume_scale = 1.0) {
    Histogram h;
    h.edges = edges;
    const double n = static_cast<double>(std::max<std::uint64_t>(acc.total.n, 1));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double vol = shell_volume(d, edges[i], edges[i + 1]) * volume_scale;
        const double mean = acc.sum[i] / n;
        const double var = std::max(0.0, acc.sumsq[i] / n - mean * mean) * n / std::max(n - 1.0, 1.0);
        h.density.push_back(mean / vol);
        h.stderr_.push_back(std::sqrt(var / n) / vol);
    }
    h.atom = acc.atom / n;
    h.atom_stderr = std::sqrt(std::max(0.0, acc.atom_sq / n - h.atom * h.atom) / std::max(n - 1.0, 1.0));
    h.outside = acc.outside / n;
    h.total = finish(acc.total, scheme, opt);
    return h;
}

void check_dimension(const ProcessSpec& spec) {
    if (spec.d < 1 || spec.d > kMaxDim) throw DomainError("simulation supports dimensions 1 to 8");
}

} // namespace

double uniform_open(Philox& rng) { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; }

Point uniform_direction(int d, Philox& rng) {
    Draws draws{rng};
    return random_direction(d, draws);
}

double norm(const Point& x, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

double distance(const Point& x, const Point& y, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
}

Point axis_point(int d, double v) {
    Point p;
    p[d - 1] = v;
    return p;
}

bool BallDomain::contains(const Point& x) const { return levypot::distance(x, center_, d_) < r_; }
double BallDomain::distance(const Point& x) const { return r_ - levypot::distance(x, center_, d_); }
Point BallDomain::boundary_point(const Point& y) const {
    const double n = levypot::distance(y, center_, d_);
    Point p = y;
    if (n == 0.0) return p;
    for (int i = 0; i < d_; ++i) p[i] = center_[i] + (y[i] - center_[i]) * r_ / n;
    return p;
}

bool ShellDomain::contains(const Point& x) const {
    const double n = norm(x, d_);
    return n > r_ && n < R_;
}
double ShellDomain::distance(const Point& x) const {
    const double n = norm(x, d_);
    return std::min(n - r_, R_ - n);
}
Point ShellDomain::boundary_point(const Point& y) const {
    const double n = norm(y, d_);
    const double target = (n - r_ < R_ - n) ? r_ : R_;
    Point p = y;
    for (int i = 0; i < d_; ++i) p[i] *= target / n;
    return p;
}

bool HalfSpaceDomain::contains(const Point& x) const {
    if (!(x[d_ - 1] > 0.0 && x[d_ - 1] < L_)) return false;
    for (int i = 0; i + 1 < d_; ++i)
        if (std::abs(x[i]) >= L_) return false;
    return true;
}
double HalfSpaceDomain::distance(const Point& x) const {
    double m = std::min(x[d_ - 1], L_ - x[d_ - 1]);
    for (int i = 0; i + 1 < d_; ++i) m = std::min(m, L_ - std::abs(x[i]));
    return m;
}
Point HalfSpaceDomain::boundary_point(const Point& y) const {
    Point p = y;
    if (p[d_ - 1] <= 0.0) p[d_ - 1] = 0.0;
    return p;
}
bool HalfSpaceDomain::left_through_floor(const Point& exit) const { return exit[d_ - 1] <= 0.0; }

PathSimulator::PathSimulator(const ProcessSpec& spec, const SimScheme& scheme)
    : spec_(spec), scheme_(scheme), jumps_(std::make_shared<JumpTable>(spec)) {
    check_dimension(spec);
    if (!(scheme.horizon > 0.0) || !(scheme.dt > 0.0) || !(scheme.dt_min > 0.0))
        throw DomainError("scheme needs positive horizon, dt and dt_min");
    if (!jumps_->finite_mass() && jumps_->has_jumps() && !(scheme.epsilon > 0.0))
        throw CutoffTooSmall("infinite Levy measure needs epsilon > 0");
    if (spec.sigma2 == 0.0 && !jumps_->has_jumps()) throw DomainError("process is constant");
}

PathEnd PathSimulator::run(const Domain& domain, const Point& x0, Philox& rng, const Observer* obs) const {
    const int d = spec_.d;
    const JumpTable& J = *jumps_;
    const bool finite = J.finite_mass() || !J.has_jumps();
    const double gauss_rate = 2.0 * spec_.sigma2;
    const SimScheme& sc = scheme_;
    Draws draws{rng};

    PathEnd end;
    Point x = x0;
    double t = 0.0;
    bool first_hold = true;
    if (!domain.contains(x)) {
        end.position = x;
        end.kind = ExitKind::jump;
        return end;
    }
    double d0 = domain.distance(x);
    while (true) {
        if (t >= sc.horizon || end.events >= sc.max_events) {
            end.position = x;
            end.time = t;
            end.kind = ExitKind::censored;
            return end;
        }
        double ell = d0;
        if (obs && obs->scale) ell = std::min(ell, obs->scale(x));
        double eps = 0.0, rate = 0.0, var = gauss_rate;
        if (finite) {
            rate = J.has_jumps() ? J.mass() : 0.0;
        } else {
            eps = std::max(sc.epsilon, sc.cutoff_fraction * ell);
            rate = J.tail_rate(eps);
            var += J.small_variance(eps);
        }
        double h = std::min(sc.horizon - t, sc.dt);
        if (var > 0.0 && ell > 0.0) {
            const double target = ell / sc.step_resolution;
            h = std::min(h, std::max(sc.dt_min, target * target / var));
        }
        const double wait = rate > 0.0 ? draws.exponential(rate) : kInf;
        const bool jump = wait <= h;
        const double step = jump ? wait : h;

        if (var > 0.0) {
            const double sd = std::sqrt(var * step);
            Point y = x;
            for (int i = 0; i < d; ++i) y[i] += sd * draws.gauss();
            const double d1 = domain.distance(y);
            bool crossed = d1 > 0.0 ? false : !domain.contains(y);
            if (!crossed && sc.bridge_correction && d0 > 0.0 && d1 > 0.0) {
                // Crossing probabilities below e^-40 are not worth a draw.
                const double a = 2.0 * d0 * d1 / (var * step);
                if (a < 40.0) crossed = draws.uniform() < std::exp(-a);
            }
            if (crossed) {
                // The crossing happened somewhere in the step; charge half of it.
                if (obs) {
                    Point mid;
                    for (int i = 0; i < d; ++i) mid[i] = 0.5 * (x[i] + y[i]);
                    obs->occupy(mid, 0.5 * step, false);
                }
                end.time = t + 0.5 * step;
                end.position = spec_.sigma2 > 0.0 || domain.contains(y) ? domain.boundary_point(y) : y;
                end.kind = ExitKind::continuous;
                return end;
            }
            if (obs) {
                Point mid;
                for (int i = 0; i < d; ++i) mid[i] = 0.5 * (x[i] + y[i]);
                obs->occupy(mid, step, false);
            }
            x = y;
            d0 = d1;
        } else if (obs && std::isfinite(step)) {
            obs->occupy(x, step, first_hold);
        }
        first_hold = false;
        t += step;
        ++end.events;
        if (!jump) continue;

        const double radius = finite ? J.sample_finite(draws.uniform()) : J.sample_tail(eps, draws.uniform());
        const Point dir = random_direction(d, draws);
        for (int i = 0; i < d; ++i) x[i] += radius * dir[i];
        if (!domain.contains(x)) {
            end.position = x;
            end.time = t;
            end.kind = ExitKind::jump;
            return end;
        }
        d0 = domain.distance(x);
    }
}

Point PathSimulator::increment(double dt, Philox& rng) const {
    const int d = spec_.d;
    const JumpTable& J = *jumps_;
    const bool finite = J.finite_mass() || !J.has_jumps();
    Draws draws{rng};
    Point x;
    double var = 2.0 * spec_.sigma2;
    double rate = 0.0;
    if (finite) {
        rate = J.has_jumps() ? J.mass() : 0.0;
    } else {
        rate = J.tail_rate(scheme_.epsilon);
        var += J.small_variance(scheme_.epsilon);
    }
    const double sd = std::sqrt(var * dt);
    for (int i = 0; i < d; ++i) x[i] = sd * draws.gauss();
    for (double t = draws.exponential(rate); t <= dt; t += draws.exponential(rate)) {
        const double radius = finite ? J.sample_finite(draws.uniform()) : J.sample_tail(scheme_.epsilon, draws.uniform());
        const Point dir = random_direction(d, draws);
        for (int i = 0; i < d; ++i) x[i] += radius * dir[i];
    }
    return x;
}

ShellBins log_shells(const Point& center, double inner, double outer, int bins) {
    if (!(inner > 0.0 && outer > inner) || bins < 1) throw DomainError("shell bins need 0 < inner < outer");
    ShellBins b;
    b.center = center;
    b.edges.push_back(0.0);
    if (bins == 1) {
        b.edges.push_back(outer);
        return b;
    }
    for (int i = 0; i < bins; ++i) b.edges.push_back(inner * std::pow(outer / inner, static_cast<double>(i) / (bins - 1)));
    return b;
}

Estimate exit_time_ball(const ProcessSpec& spec, const SimScheme& scheme, double r, const Point& x0,
                        const RunOptions& opt) {
    if (!(norm(x0, spec.d) < r)) throw DomainError("exit_time_ball needs |x0| < r");
    const PathSimulator sim(spec, scheme);
    const BallDomain ball(spec.d, Point{}, r);
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, ScalarAcc{}, [&](Philox& rng, ScalarAcc& a) {
        const auto end = sim.run(ball, x0, rng);
        a.add(end.time);
        if (end.kind == ExitKind::censored) ++a.censored;
    });
    return finish(acc, scheme, opt);
}

Estimate hit_ball_prob(const ProcessSpec& spec, const SimScheme& scheme, double r, const Point& x,
                       const RunOptions& opt) {
    const int d = spec.d;
    const double nx = norm(x, d);
    if (!(nx > r)) throw DomainError("hit_ball_prob needs |x| > r");
    const double kill = scheme.outer_kill_radius > 0.0 ? scheme.outer_kill_radius : 50.0 * nx;
    if (!(kill > nx)) throw DomainError("kill radius must exceed |x|");
    const PathSimulator sim(spec, scheme);
    const ShellDomain shell(d, r, kill);
    std::uint64_t killed = 0;
    struct Acc {
        ScalarAcc s;
        std::uint64_t killed = 0;
        void merge(const Acc& o) {
            s.merge(o.s);
            killed += o.killed;
        }
    };
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, Acc{}, [&](Philox& rng, Acc& a) {
        const auto end = sim.run(shell, x, rng);
        const bool hit = end.kind != ExitKind::censored && shell.hit_inner(end.position);
        a.s.add(hit ? 1.0 : 0.0);
        if (end.kind == ExitKind::censored) ++a.s.censored;
        else if (!hit) ++a.killed;
    });
    killed = acc.killed;
    Estimate e = finish(acc.s, scheme, opt);
    if (d >= 3 && killed > 0) {
        const double up = ret_bounds(spec, r, kill).upper;
        e.bias_bound = static_cast<double>(killed) / static_cast<double>(acc.s.n) * std::min(1.0, up);
    }
    return e;
}

Histogram green_ball(const ProcessSpec& spec, const SimScheme& scheme, double r, const Point& x,
                     const ShellBins& bins, const RunOptions& opt) {
    const int d = spec.d;
    if (!(norm(x, d) < r)) throw DomainError("green_ball needs |x| < r");
    if (bins.edges.size() < 2 || bins.edges.front() != 0.0) throw DomainError("shell edges must start at 0");
    const PathSimulator sim(spec, scheme);
    const BallDomain ball(d, Point{}, r);
    const std::size_t nb = bins.edges.size() - 1;
    const double inner = bins.edges[1];
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, HistAcc(nb), [&](Philox& rng, HistAcc& a) {
        a.start_path();
        Observer obs;
        obs.occupy = [&](const Point& p, double dt, bool start_hold) {
            if (start_hold) {
                a.atom_path += dt;
                return;
            }
            const std::size_t i = shell_index(bins, p, d);
            if (i < nb)
                a.scratch[i] += dt;
            else
                a.outside_path += dt;
        };
        obs.scale = [&](const Point& p) { return std::max(distance(p, bins.center, d), 0.5 * inner); };
        const auto end = sim.run(ball, x, rng, &obs);
        a.end_path(end.time, end.kind == ExitKind::censored);
    });
    return finish_hist(acc, bins.edges, d, scheme, opt);
}

Histogram poisson_kernel_ball(const ProcessSpec& spec, const SimScheme& scheme, double r,
                              const std::vector<double>& annuli, const RunOptions& opt) {
    const int d = spec.d;
    if (annuli.size() < 2 || annuli.front() < r || !std::is_sorted(annuli.begin(), annuli.end()))
        throw DomainError("annuli must be increasing radii starting at or beyond r");
    const PathSimulator sim(spec, scheme);
    const BallDomain ball(d, Point{}, r);
    const std::size_t nb = annuli.size() - 1;
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, HistAcc(nb), [&](Philox& rng, HistAcc& a) {
        a.start_path();
        const auto end = sim.run(ball, Point{}, rng);
        if (end.kind == ExitKind::continuous && spec.sigma2 > 0.0) {
            a.atom_path = 1.0;
        } else if (end.kind != ExitKind::censored) {
            const double rad = norm(end.position, d);
            const auto it = std::upper_bound(annuli.begin(), annuli.end(), rad);
            const std::size_t i = static_cast<std::size_t>(it - annuli.begin());
            if (i >= 1 && i <= nb)
                a.scratch[i - 1] = 1.0;
            else
                a.outside_path = 1.0;
        }
        a.end_path(end.kind == ExitKind::censored ? 0.0 : 1.0, end.kind == ExitKind::censored);
    });
    return finish_hist(acc, annuli, d, scheme, opt);
}

Estimate harmonic_eval(const ProcessSpec& spec, const SimScheme& scheme, const Domain& domain,
                       const std::function<double(const Point&)>& f, const Point& x, const RunOptions& opt) {
    if (!domain.contains(x)) throw DomainError("harmonic_eval needs x inside the domain");
    const PathSimulator sim(spec, scheme);
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, ScalarAcc{}, [&](Philox& rng, ScalarAcc& a) {
        const auto end = sim.run(domain, x, rng);
        if (end.kind == ExitKind::censored) {
            a.add(0.0);
            ++a.censored;
        } else {
            a.add(f(end.position));
        }
    });
    return finish(acc, scheme, opt);
}

Estimate occupation_integral(const ProcessSpec& spec, const SimScheme& scheme, const Domain& domain,
                             const std::function<double(const Point&)>& g, const Point& x, const RunOptions& opt) {
    if (!domain.contains(x)) throw DomainError("occupation_integral needs x inside the domain");
    const PathSimulator sim(spec, scheme);
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, ScalarAcc{}, [&](Philox& rng, ScalarAcc& a) {
        double total = 0.0;
        Observer obs;
        obs.occupy = [&](const Point& p, double dt, bool) { total += g(p) * dt; };
        const auto end = sim.run(domain, x, rng, &obs);
        a.add(total);
        if (end.kind == ExitKind::censored) ++a.censored;
    });
    return finish(acc, scheme, opt);
}

Estimate shell_average(const ProcessSpec& spec, const SimScheme& scheme, const Domain& domain,
                       const std::function<double(const Point&)>& f, PathFunctional kind, const Point& center,
                       double a, double b, const RunOptions& opt) {
    if (!(a >= 0.0 && b > a && std::isfinite(b))) throw DomainError("shell_average needs 0 <= a < b < inf");
    const int d = spec.d;
    const PathSimulator sim(spec, scheme);
    const double ad = std::pow(a, d), bd = std::pow(b, d);
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, ScalarAcc{}, [&](Philox& rng, ScalarAcc& acc_) {
        const double radius = std::pow(ad + uniform_open(rng) * (bd - ad), 1.0 / d);
        const Point dir = uniform_direction(d, rng);
        Point z = center;
        for (int i = 0; i < d; ++i) z[i] += radius * dir[i];
        if (!domain.contains(z)) {
            acc_.add(kind == PathFunctional::exit_value ? f(z) : 0.0);
            return;
        }
        double total = 0.0;
        Observer obs;
        obs.occupy = [&](const Point& p, double dt, bool) { total += f(p) * dt; };
        const auto end = sim.run(domain, z, rng, kind == PathFunctional::occupation ? &obs : nullptr);
        if (end.kind == ExitKind::censored) {
            ++acc_.censored;
            acc_.add(kind == PathFunctional::occupation ? total : 0.0);
        } else {
            acc_.add(kind == PathFunctional::occupation ? total : f(end.position));
        }
    });
    return finish(acc, scheme, opt);
}

Histogram green_halfspace(const ProcessSpec& spec, const SimScheme& scheme, const Point& x, const ShellBins& bins,
                          double box, const RunOptions& opt) {
    const int d = spec.d;
    if (d < 3) throw HypothesisViolated("half-space Green function needs d >= 3");
    const HalfSpaceDomain H(d, box);
    if (!H.contains(x) || !H.contains(bins.center)) throw DomainError("x and y must lie in the truncated half-space");
    if (bins.edges.size() < 2 || bins.edges.front() != 0.0) throw DomainError("shell edges must start at 0");
    const PathSimulator sim(spec, scheme);
    const std::size_t nb = bins.edges.size() - 1;
    const double inner = bins.edges[1];
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, HistAcc(nb), [&](Philox& rng, HistAcc& a) {
        a.start_path();
        Observer obs;
        obs.occupy = [&](const Point& p, double dt, bool start_hold) {
            if (start_hold) {
                a.atom_path += dt;
                return;
            }
            const std::size_t i = shell_index(bins, p, d);
            if (i < nb) a.scratch[i] += dt;
            else a.outside_path += dt;
        };
        obs.scale = [&](const Point& p) { return std::max(distance(p, bins.center, d), 0.5 * inner); };
        const auto end = sim.run(H, x, rng, &obs);
        // Paths that leave through the lateral walls are truncation, reported as censored.
        const bool truncated = end.kind == ExitKind::censored || !H.left_through_floor(end.position);
        a.end_path(end.time, truncated);
    });
    return finish_hist(acc, bins.edges, d, scheme, opt);
}

Histogram transition_density(const ProcessSpec& spec, const SimScheme& scheme, double t,
                             const std::vector<double>& edges, const RunOptions& opt) {
    const int d = spec.d;
    if (!(t > 0.0)) throw DomainError("transition density needs t > 0");
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) throw DomainError("edges must increase");
    const PathSimulator sim(spec, scheme);
    const std::size_t nb = edges.size() - 1;
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, HistAcc(nb), [&](Philox& rng, HistAcc& a) {
        a.start_path();
        const double rad = norm(sim.increment(t, rng), d);
        const auto it = std::upper_bound(edges.begin(), edges.end(), rad);
        const std::size_t i = static_cast<std::size_t>(it - edges.begin());
        if (i >= 1 && i <= nb) a.scratch[i - 1] = 1.0;
        else a.outside_path = 1.0;
        a.end_path(1.0, false);
    });
    return finish_hist(acc, edges, d, scheme, opt);
}

} // namespace levypot
