#include "levypot/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "levypot/errors.hpp"
#include "levypot/radial.hpp"

namespace levypot {

namespace {

double sum_at(const ProcessSpec& spec, double r) { return pruitt(spec, r).sum; }

} // namespace

BoundPair ret_bounds(const ProcessSpec& spec, double r, double x_norm) {
    if (!(r > 0.0) || !(x_norm >= r)) throw HypothesisViolated("hitting bounds need 0 < r <= |x|");
    const int d = spec.d;
    const auto px = pruitt(spec, x_norm);
    const double scale = std::pow(r / x_norm, d) * sum_at(spec, r) / px.sum;
    BoundPair b;
    b.lower = std::pow(x_norm, d) * spec.nu(x_norm) / px.sum * scale;
    b.upper = (x_norm >= 2.0 * r && d >= 3) ? px.K / px.sum * scale : NAN;
    return b;
}

BoundPair pot_bounds(const ProcessSpec& spec, double x_norm) {
    if (spec.d < 3) throw HypothesisViolated("potential kernel bounds need d >= 3");
    if (!(x_norm > 0.0)) throw HypothesisViolated("potential kernel bounds need |x| > 0");
    const auto p = pruitt(spec, x_norm);
    return {spec.nu(x_norm) / (p.sum * p.sum), p.K / (std::pow(x_norm, spec.d) * p.sum * p.sum)};
}

BoundPair green_ball_bounds(const ProcessSpec& spec, double r, const Point& x, const Point& y) {
    const int d = spec.d;
    const double nx = norm(x, d), ny = norm(y, d), dxy = distance(x, y, d);
    if (!(nx < r && ny < r) || !(dxy > 0.0)) throw HypothesisViolated("Green bounds need distinct x, y inside the ball");
    const double sr = sum_at(spec, r);
    const double rx = std::min(dxy, r - nx), ry = std::min(dxy, r - ny);
    BoundPair b;
    b.upper = pruitt_K(spec, dxy) / (std::pow(dxy, d) * sr * sr);
    b.lower = spec.nu(dxy) / (sum_at(spec, rx) * sum_at(spec, ry));
    return b;
}

SupBounds sup_bounds(const ProcessSpec& spec, double r, double q) {
    if (!(q >= 0.0 && q < r)) throw HypothesisViolated("supremum bounds need 0 <= q < r");
    const auto p = pruitt(spec, r);
    SupBounds s;
    s.upper_coeff = p.K / (std::pow(r, spec.d) * p.sum);
    s.lower_coeff = spec.nu(r) / p.sum;
    s.creg_upper = s.upper_coeff;
    s.creg_lower = s.lower_coeff;
    return s;
}

double halfspace_estimate(const ProcessSpec& spec, const Point& x, const Point& y) {
    const int d = spec.d;
    if (d < 3) throw HypothesisViolated("half-space estimate needs d >= 3");
    const double dx = x[d - 1], dy = y[d - 1], r = distance(x, y, d);
    if (!(dx > 0.0 && dy > 0.0) || !(r > 0.0)) throw HypothesisViolated("half-space estimate needs distinct x, y in H");
    auto h = [&](double s) { return pruitt(spec, s).h; };
    const auto p = pruitt(spec, r);
    return h(dx) / h(dx + r) * h(dy) / h(dy + r) * p.K / (std::pow(r, d) * p.sum * p.sum);
}

double levy_ratio(const ProcessSpec& spec, double a, double b) {
    if (!(a > 0.0 && b > a)) throw DomainError("Levy ratio needs 0 < a < b");
    const auto& nu = spec.nu;
    if (nu.vanishes()) throw UnboundedLevyRatio("Levy measure vanishes");
    // s approaches b from above on a geometric grid, then runs out to 1e6 b.
    double worst = 0.0;
    auto visit = [&](double s) {
        const double num = nu(s - a), den = nu(s + a);
        if (den > 0.0) {
            worst = std::max(worst, num / den);
            return true;
        }
        if (num == 0.0) return false;
        if (std::isfinite(nu.support_radius))
            throw UnboundedLevyRatio("nu(s + r) vanishes while nu(s - r) does not (s = " + std::to_string(s) + ")");
        return false;   // density underflow far out
    };
    for (int k = 13; k >= 1; --k)
        if (!visit(b * (1.0 + std::pow(10.0, -k)))) return worst;
    const int n = 600;
    for (int i = 0; i <= n; ++i)
        if (!visit(b * 1.1 * std::pow(1e6 / 1.1, static_cast<double>(i) / n))) break;
    return worst;
}

BhiConstants bhi_constants(const ProcessSpec& spec, double r, double R) {
    if (!(r > 0.0 && R > r)) throw DomainError("BHI constants need 0 < r < R");
    const int d = spec.d;
    auto rt = [&](double t) { return (1.0 - t) * r + t * R; };
    BhiConstants c;
    c.C_levy = levy_ratio(spec, r, R);
    c.C_levy_tilde = std::max({levy_ratio(spec, rt(1.0 / 3), rt(2.0 / 3)), levy_ratio(spec, rt(7.0 / 9), rt(8.0 / 9)),
                               levy_ratio(spec, R, rt(4.0 / 3))});
    c.rho_bound = std::pow(R / (R - r), 2) * pruitt_K(spec, R);
    const double s = 0.5 * (r + R);
    const double sR = sum_at(spec, R);
    c.C_green = pruitt_K(spec, s - r) / (std::pow(s - r, d) * sR * sR);
    c.C_exit = 1.0 / sum_at(spec, r);
    const double nu2R = spec.nu(2.0 * R);
    if (!(nu2R > 0.0)) throw UnboundedLevyRatio("nu(2R) vanishes");
    c.C_BHI = std::pow(R / r, d) * std::pow(R / (R - r), 4) * std::pow(c.C_levy_tilde, 3) * pruitt_K(spec, 2.0 * R) /
              (std::pow(R, d) * nu2R);
    return c;
}

SandwichReport sandwich(std::string theorem, std::string spec, std::string geometry, const BoundPair& bounds,
                        const Estimate& estimate, double c_budget, double slack) {
    SandwichReport rep;
    rep.theorem = std::move(theorem);
    rep.spec = std::move(spec);
    rep.geometry = std::move(geometry);
    rep.lower = bounds.lower;
    rep.upper = bounds.upper;
    rep.estimate = estimate;
    const double m = estimate.mean, band = slack * estimate.stderr_;
    rep.c_lower = m / bounds.lower;
    rep.c_upper = bounds.upper / m;
    const bool lower_active = std::isfinite(bounds.lower) && bounds.lower > 0.0;
    const bool upper_active = std::isfinite(bounds.upper);
    double c = 1.0;
    if (lower_active) c = std::max(c, bounds.lower / std::max(m + band, 0.0));
    if (upper_active) c = std::max(c, std::max(m - band, 0.0) / bounds.upper);
    rep.implied_c = c;
    if (c > c_budget)
        rep.status = "violated";
    else
        rep.status = lower_active ? "ok" : "degenerate";
    return rep;
}

void enforce(const SandwichReport& report) {
    if (report.status == "violated")
        throw OrderingViolated(report.theorem + " " + report.spec + " " + report.geometry + ": implied constant " +
                               std::to_string(report.implied_c) + " exceeds the budget");
}

} // namespace levypot
