#include <algorithm>
#include <cmath>
#include <memory>

#include "levypot/bounds.hpp"
#include "levypot/errors.hpp"
#include "levypot/quadrature.hpp"
#include "levypot/special.hpp"

namespace levypot {

namespace {

struct ProfileTable {
    int d = 3;
    double R = 1.0, m = 1.0;
    double lo = 0.0, step = 0.0;
    std::vector<double> h, h1, h2;
};

// Quintic Hermite interpolation of (value, d1, d2) on one cell.
void quintic(const ProfileTable& t, double rho, double out[3]) {
    const double pos = (rho - t.lo) / t.step;
    const std::size_t i = std::min(static_cast<std::size_t>(std::max(pos, 0.0)), t.h.size() - 2);
    const double s = pos - static_cast<double>(i), H = t.step;
    const double p0 = t.h[i], p1 = t.h[i + 1];
    const double v0 = t.h1[i] * H, v1 = t.h1[i + 1] * H;
    const double a0 = t.h2[i] * H * H, a1 = t.h2[i + 1] * H * H;
    // Coefficients of p(s) = sum c_k s^k matching both ends to second order.
    const double c0 = p0, c1 = v0, c2 = 0.5 * a0;
    const double c3 = 10.0 * (p1 - p0) - 6.0 * v0 - 4.0 * v1 - 1.5 * a0 + 0.5 * a1;
    const double c4 = -15.0 * (p1 - p0) + 8.0 * v0 + 7.0 * v1 + 1.5 * a0 - a1;
    const double c5 = 6.0 * (p1 - p0) - 3.0 * v0 - 3.0 * v1 - 0.5 * a0 + 0.5 * a1;
    out[0] = c0 + s * (c1 + s * (c2 + s * (c3 + s * (c4 + s * c5))));
    out[1] = (c1 + s * (2.0 * c2 + s * (3.0 * c3 + s * (4.0 * c4 + s * 5.0 * c5)))) / H;
    out[2] = (2.0 * c2 + s * (6.0 * c3 + s * (12.0 * c4 + s * 20.0 * c5))) / (H * H);
}

// 2^{-k/per_octave}, k = 1 .. 20 per_octave, unless a grid is given.
std::vector<double> log_grid(const std::vector<double>& given, int per_octave) {
    if (!given.empty()) return given;
    std::vector<double> g;
    for (int k = 1; k <= 20 * per_octave; ++k) g.push_back(std::exp2(-static_cast<double>(k) / per_octave));
    return g;
}

} // namespace

RadialFunction mollified_newton_profile(int d, double R, double m) {
    if (d < 3) throw HypothesisViolated("the Newtonian profile needs d >= 3");
    if (!(m > 0.0 && R > m)) throw DomainError("mollified profile needs 0 < m < R");
    // kappa(s) = c (1 - s^2 / m^2)^4 on B_m.
    const double ckappa = 2.0 / (sphere_area(d) * std::pow(m, d) * std::beta(0.5 * d, 5.0));
    auto kappa = [=](double s) {
        if (s >= m) return 0.0;
        const double u = 1.0 - (s / m) * (s / m);
        return ckappa * u * u * u * u;
    };
    // Laplacian of h: -(d - 2) / R times the smoothed surface measure of the sphere.
    const double surface = sphere_area(d) * std::pow(R, d - 1);
    const double kinks[] = {m};
    auto lap = [=](double rho) {
        return -(d - 2) / R * surface * spherical_mean(d, kappa, rho, R, kinks);
    };

    auto t = std::make_shared<ProfileTable>();
    constexpr int cells = 512;
    t->d = d;
    t->R = R;
    t->m = m;
    t->lo = R - m;
    t->step = 2.0 * m / cells;
    // Radial integration: (rho^{d-1} h')' = rho^{d-1} lap h, with h = 1 and
    // h' = 0 at R - m. Simpson's rule on half cells for h.
    const QuadratureConfig qc{1e-12, 0.0, 200};
    auto flux = [&](double u) { return lap(u) * std::pow(u, d - 1); };
    std::vector<double> xs(2 * cells + 1), J(2 * cells + 1, 0.0), d1(2 * cells + 1, 0.0);
    for (int k = 0; k <= 2 * cells; ++k) xs[k] = t->lo + 0.5 * t->step * k;
    for (int k = 1; k <= 2 * cells; ++k) {
        J[k] = J[k - 1] + integrate(flux, xs[k - 1], xs[k], qc).value;
        d1[k] = J[k] * std::pow(xs[k], 1 - d);
    }
    t->h.assign(cells + 1, 1.0);
    t->h1.assign(cells + 1, 0.0);
    t->h2.assign(cells + 1, 0.0);
    for (int i = 0; i <= cells; ++i) {
        const int k = 2 * i;
        if (i > 0) t->h[i] = t->h[i - 1] + t->step / 6.0 * (d1[k - 2] + 4.0 * d1[k - 1] + d1[k]);
        t->h1[i] = d1[k];
        t->h2[i] = lap(xs[k]) - (d - 1) * d1[k] / xs[k];
    }

    RadialFunction f;
    auto eval = [t](double rho, int which) {
        const int dd = t->d;
        if (rho <= t->R - t->m) return which == 0 ? 1.0 : 0.0;
        if (rho >= t->R + t->m) {
            const double c = std::pow(t->R / rho, dd - 2);
            if (which == 0) return c;
            if (which == 1) return -(dd - 2) * c / rho;
            return (dd - 2) * (dd - 1) * c / (rho * rho);
        }
        double out[3];
        quintic(*t, rho, out);
        return out[which];
    };
    f.value = [eval](double rho) { return eval(rho, 0); };
    f.d1 = [eval](double rho) { return eval(rho, 1); };
    f.d2 = [eval](double rho) { return eval(rho, 2); };
    f.inner_scale = m;
    f.kinks = {R - m, R + m};
    return f;
}

WitnessReport superharmonic_witness(const ProcessSpec& spec, double r, const WitnessOptions& opt) {
    const int d = spec.d;
    if (d < 3) throw HypothesisViolated("the superharmonic witness needs d >= 3");
    if (!(r > 0.0)) throw DomainError("witness radius must be positive");
    // Work at unit scale; generator values and K, L are unchanged.
    const ProcessSpec unit = rescaled(spec, r);
    const auto p = pruitt(unit, 1.0);
    WitnessReport rep;
    rep.K = p.K;
    rep.L = p.L;
    rep.scale = p.K * p.L;

    auto as = log_grid(opt.a_grid, 4), bs = log_grid(opt.b_grid, 2);
    std::sort(as.rbegin(), as.rend());
    std::sort(bs.rbegin(), bs.rend());
    const double five_d = std::pow(5.0, d);
    std::erase_if(as, [&](double a) { return !(a * p.L > five_d * p.K); });
    if (as.empty()) {
        rep.trivial = true;
        return rep;
    }

    const RadialFunction g = smooth_bump(1.0);
    const double tol = opt.tolerance * rep.scale;
    double best = kInf;
    for (double a : as) {
        const double R = std::pow(a * p.L / p.K, 1.0 / d);
        const RadialFunction h = mollified_newton_profile(d, R, 1.0);
        // Outside B_1: log grid to 100 R plus points around the kinks of g and h.
        std::vector<double> radii;
        const double top = 100.0 * R;
        const int n = std::max(2, static_cast<int>(std::ceil(opt.points_per_decade * std::log10(top))));
        for (int i = 0; i <= n; ++i) radii.push_back(1.0 + 1e-3 + (top - 1.0) * (std::pow(10.0, std::log10(top) * i / n) - 1.0) / (top - 1.0));
        for (double k : {1.5, 2.0, R - 1.0, R - 0.5, R, R + 0.5, R + 1.0})
            for (double e : {-1e-3, 0.0, 1e-3}) radii.push_back(k + e);
        std::sort(radii.begin(), radii.end());
        std::erase_if(radii, [](double x) { return !(x > 1.0); });
        radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

        std::vector<double> Ag(radii.size()), Ah(radii.size());
        for (std::size_t i = 0; i < radii.size(); ++i) {
            Ag[i] = generator_apply(unit, g, radii[i]).value;
            Ah[i] = generator_apply(unit, h, radii[i]).value;
        }
        for (double b : bs) {
            std::vector<double> Af(radii.size());
            for (std::size_t i = 0; i < radii.size(); ++i) Af[i] = b * p.L * Ag[i] + p.K * Ah[i];
            const double worst = *std::max_element(Af.begin(), Af.end());
            if (worst < best || worst <= tol) {
                best = worst;
                rep.a = a;
                rep.b = b;
                rep.R = R * r;
                rep.max_generator = worst;
                rep.radii = radii;
                rep.generator = Af;
            }
            if (worst <= tol) {
                rep.found = true;
                return rep;
            }
        }
    }
    return rep;
}

void require_witness(const WitnessReport& report) {
    if (!report.trivial && !report.found)
        throw NoWitnessFound("no (a, b) on the search grid makes the test function superharmonic");
}

} // namespace levypot
