#include "levypot/averaging.hpp"

#include <algorithm>
#include <cmath>

#include "levypot/errors.hpp"
#include "levypot/parallel.hpp"
#include "levypot/quadrature.hpp"
#include "levypot/special.hpp"

namespace levypot {

double RadialKernel::mass(double a, double b) const {
    if (!(b > a)) return 0.0;
    double m = (r >= a && r < b) ? atom : 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = std::max(a, edges[i]), hi = std::min(b, edges[i + 1]);
        if (hi > lo) m += density[i] * (hi - lo);
    }
    return m;
}

double RadialKernel::density_at(double s) const {
    if (edges.size() < 2 || s < edges.front() || s >= edges.back()) return 0.0;
    const auto it = std::upper_bound(edges.begin(), edges.end(), s);
    return density[static_cast<std::size_t>(it - edges.begin()) - 1];
}

RadialKernel tabulate_kernel(double r, double atom, const std::function<double(double)>& density,
                             std::vector<double> edges) {
    if (!(atom >= 0.0)) throw DomainError("kernel atom must be non-negative");
    if (edges.empty() || edges.front() != r || !std::is_sorted(edges.begin(), edges.end()))
        throw DomainError("kernel edges must increase from r");
    RadialKernel k;
    k.r = r;
    k.atom = atom;
    k.edges = std::move(edges);
    for (std::size_t i = 0; i + 1 < k.edges.size(); ++i) {
        const double a = k.edges[i], b = k.edges[i + 1];
        k.density.push_back(b > a ? integrate(density, a, b, {1e-12, 0.0, 200}).value / (b - a) : 0.0);
    }
    return k;
}

double AveragedKernel::mass(double a, double b) const {
    double m = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) m += alpha[j] * kernels[j].mass(a, b);
    return m;
}

double AveragedKernel::density_at(double s) const {
    double v = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) v += alpha[j] * kernels[j].density_at(s);
    return v;
}

double AveragedKernel::total_weight() const {
    double w = 0.0;
    for (double a : alpha) w += a;
    return w;
}

AveragedKernel dyadic_average(std::vector<RadialKernel> kernels, double q, double top) {
    const std::size_t n = kernels.size();
    if (n == 0) throw DomainError("averaging needs at least one kernel");
    if (!(q >= 0.0 && top > q)) throw DomainError("averaging needs 0 <= q < top");
    AveragedKernel out;
    const double len = (top - q) / static_cast<double>(n);
    for (std::size_t j = 0; j <= n; ++j) out.cells.push_back(j == n ? top : q + len * static_cast<double>(j));
    for (std::size_t j = 0; j < n; ++j) {
        const double a = out.cells[j], b = out.cells[j + 1];
        if (!(kernels[j].r >= a && kernels[j].r < b)) throw DomainError("kernel j must start inside cell j");
        double prev = 0.0;
        for (std::size_t i = 0; i < j; ++i) prev += out.alpha[i] * kernels[i].mass(a, b);
        const double diag = kernels[j].mass(a, b);
        if (!(diag > 0.0)) throw ZeroDiagonal("kernel " + std::to_string(j) + " puts no mass on its own cell");
        double w = (len - prev) / diag;
        if (w < 0.0) {
            if (prev > len * (1.0 + 1e-12))
                throw NegativeWeight("weight " + std::to_string(j) + " is negative: earlier kernels already give " +
                                     std::to_string(prev / len) + " times the cell length");
            w = 0.0;
        }
        out.alpha.push_back(w);
    }
    out.kernels = std::move(kernels);
    for (std::size_t j = 0; j < n; ++j)
        out.residual = std::max(out.residual, std::abs(out.mass(out.cells[j], out.cells[j + 1]) - len));
    return out;
}

RegularizationKernel regularization_kernel(const ProcessSpec& spec, double q, double r,
                                           const RegularizationOptions& opt) {
    const int d = spec.d;
    if (!(q >= 0.0 && r > q)) throw HypothesisViolated("regularization kernel needs 0 <= q < r");
    if (opt.n < 1 || opt.outer_cells < 2 || !(opt.outer_factor > 1.0)) throw DomainError("bad kernel grid options");
    RegularizationKernel out;
    out.q = q;
    out.r = r;
    const int n = opt.n;
    const double len = (r - q) / n;
    // Exit densities blow up at the sphere, so the outer cells are graded
    // towards it: offsets from r are log-spaced between 1e-4 r and the far edge.
    out.outer_edges.push_back(r);
    const double first = 1e-4, last = opt.outer_factor - 1.0;
    for (int i = 0; i < opt.outer_cells; ++i)
        out.outer_edges.push_back(r * (1.0 + first * std::pow(last / first, static_cast<double>(i) / (opt.outer_cells - 1))));
    const double omega = sphere_area(d);

    std::vector<RadialKernel> kernels;
    std::vector<double> outside_se;
    for (int j = 0; j < n; ++j) {
        // The exit law of B_0 is a point mass at the origin; the first kernel
        // for q = 0 sits in the middle of its cell instead.
        const double s = (j == 0 && q == 0.0) ? 0.5 * len : q + len * j;
        std::vector<double> annuli{s};
        for (int k = j + 1; k < n; ++k) annuli.push_back(q + len * k);
        annuli.insert(annuli.end(), out.outer_edges.begin(), out.outer_edges.end());
        const Histogram h = poisson_kernel_ball(spec, opt.scheme, s, annuli, opt.runs);
        RadialKernel k;
        k.r = s;
        k.atom = h.atom / (omega * std::pow(s, d - 1));
        k.edges = annuli;
        k.density = h.density;
        k.tail = h.outside;
        // Mass outside B_r is a path fraction; its stderr is binomial.
        double p_out = h.outside;
        for (std::size_t c = 0; c + 1 < annuli.size(); ++c)
            if (annuli[c] >= r) p_out += h.density[c] * shell_volume(d, annuli[c], annuli[c + 1]);
        const double m = static_cast<double>(std::max<std::uint64_t>(h.total.n, 1));
        outside_se.push_back(std::sqrt(std::max(0.0, p_out * (1.0 - p_out)) / m));
        kernels.push_back(std::move(k));
    }
    out.averaged = dyadic_average(std::move(kernels), q, r);
    out.C_reg = 1.0 / out.averaged.total_weight();
    for (int j = 0; j < n; ++j) {
        out.outside_mass += out.C_reg * out.averaged.alpha[j] * out.averaged.kernels[j].tail;
        // Common random numbers make the kernels positively correlated; adding
        // standard errors linearly is the conservative choice.
        out.outside_stderr += out.C_reg * out.averaged.alpha[j] * outside_se[j];
    }

    // The outermost exit law P_{B_r}(0, .) on the same outer cells.
    const Histogram outer = poisson_kernel_ball(spec, opt.scheme, r, out.outer_edges, opt.runs);
    const double paths = static_cast<double>(std::max<std::uint64_t>(opt.runs.n, 1));
    for (int c = 0; c < opt.outer_cells; ++c) {
        const double a = out.outer_edges[c], b = out.outer_edges[c + 1];
        double v = 0.0, se = 0.0;
        for (int j = 0; j < n; ++j) {
            const auto& k = out.averaged.kernels[j];
            const auto it = std::find(k.edges.begin(), k.edges.end(), a);
            const std::size_t idx = static_cast<std::size_t>(it - k.edges.begin());
            v += out.averaged.alpha[j] * k.density[idx];
            // Per-cell stderr from the binomial count behind the density.
            const double vol = shell_volume(d, a, b);
            const double p = k.density[idx] * vol;
            se += out.averaged.alpha[j] * std::sqrt(std::max(0.0, p * (1.0 - p)) / paths) / vol;
        }
        out.outer_density.push_back(out.C_reg * v);
        out.outer_stderr.push_back(out.C_reg * se);
        out.outermost_density.push_back(outer.density[c]);
        out.outermost_stderr.push_back(outer.stderr_[c]);
    }

    out.window = sup_bounds(spec, r, q);
    out.implied_c = std::max({1.0, out.C_reg / out.window.creg_upper,
                              out.window.creg_lower > 0.0 ? out.window.creg_lower / out.C_reg : 1.0});
    return out;
}

namespace {

struct SampleAcc {
    double sum = 0.0, sumsq = 0.0, lo = kInf, hi = -kInf;
    std::uint64_t n = 0, censored = 0;
    void add(double v) {
        sum += v;
        sumsq += v * v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        ++n;
    }
    void merge(const SampleAcc& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        lo = std::min(lo, o.lo);
        hi = std::max(hi, o.hi);
        n += o.n;
        censored += o.censored;
    }
};

} // namespace

MeanValueCheck mean_value_test(const ProcessSpec& spec, const RegularizationKernel& kernel,
                               const std::function<double(const Point&)>& f, const SimScheme& scheme,
                               const RunOptions& opt) {
    const int d = spec.d;
    const double q = kernel.q, r = kernel.r;
    // Radial pieces of the tabulated P_bar: C_reg on B_r \ B_q, the outer
    // cells, and the mass beyond the grid placed on its last sphere.
    std::vector<double> lo{q}, hi{r}, mass{kernel.C_reg * shell_volume(d, q, r)};
    for (std::size_t c = 0; c + 1 < kernel.outer_edges.size(); ++c) {
        lo.push_back(kernel.outer_edges[c]);
        hi.push_back(kernel.outer_edges[c + 1]);
        mass.push_back(kernel.outer_density[c] * shell_volume(d, kernel.outer_edges[c], kernel.outer_edges[c + 1]));
    }
    lo.push_back(kernel.outer_edges.back());
    hi.push_back(kernel.outer_edges.back());
    mass.push_back(kernel.outside_mass);
    std::vector<double> cdf(mass.size());
    double total = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) cdf[i] = (total += mass[i]);
    for (double& c : cdf) c /= total;

    const PathSimulator sim(spec, scheme);
    const BallDomain ball(d, Point{}, r);
    const auto acc = run_paths(opt.n, opt.seed, opt.threads, opt.first_path, SampleAcc{}, [&](Philox& rng, SampleAcc& a) {
        const double u = uniform_open(rng);
        const std::size_t i = std::min<std::size_t>(
            static_cast<std::size_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin()), cdf.size() - 1);
        const double a3 = std::pow(lo[i], d), b3 = std::pow(hi[i], d);
        const double t = std::pow(a3 + uniform_open(rng) * (b3 - a3), 1.0 / d);
        const Point dir = uniform_direction(d, rng);
        Point z;
        for (int k = 0; k < d; ++k) z[k] = t * dir[k];
        if (t < r) {
            const auto end = sim.run(ball, z, rng);
            if (end.kind == ExitKind::censored) {
                ++a.censored;
                a.add(0.0);
            } else {
                a.add(f(end.position));
            }
        } else {
            a.add(f(z));
        }
    });

    MeanValueCheck out;
    const double m = static_cast<double>(acc.n);
    out.averaged.n = acc.n;
    out.averaged.seed = opt.seed;
    out.averaged.scheme = scheme;
    out.averaged.mean = acc.sum / m;
    out.averaged.stderr_ = std::sqrt(std::max(0.0, acc.sumsq / m - out.averaged.mean * out.averaged.mean) / (m - 1.0));
    out.averaged.censored_fraction = static_cast<double>(acc.censored) / m;

    RunOptions other = opt;
    other.first_path = opt.first_path + opt.n;
    out.direct = harmonic_eval(spec, scheme, ball, f, Point{}, other);
    out.difference = out.averaged.mean - out.direct.mean;
    const double kernel_se = (acc.hi - acc.lo) * kernel.outside_stderr;
    out.combined_stderr = std::sqrt(out.averaged.stderr_ * out.averaged.stderr_ +
                                    out.direct.stderr_ * out.direct.stderr_ + kernel_se * kernel_se);
    return out;
}

} // namespace levypot
