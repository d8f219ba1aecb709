#include "levypot/indices.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "levypot/errors.hpp"
#include "levypot/quadrature.hpp"
#include "levypot/radial.hpp"

namespace levypot {

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    const int n = std::max(2, static_cast<int>(std::lround(std::log10(hi / lo) * per_decade)) + 1);
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

// Slope of log phi over one decade at each end of the grid; used to tell a
// genuinely infinite index from a large finite one.
bool runs_away(const std::vector<double>& lr, const std::vector<double>& lv, bool at_end, int per_decade) {
    const int n = static_cast<int>(lr.size());
    if (n < 3 * per_decade) return false;
    auto slope = [&](int i, int j) { return (lv[j] - lv[i]) / (lr[j] - lr[i]); };
    double s1, s2, s3;
    if (at_end) {
        s1 = slope(n - 1 - 3 * per_decade, n - 1 - 2 * per_decade);
        s2 = slope(n - 1 - 2 * per_decade, n - 1 - per_decade);
        s3 = slope(n - 1 - per_decade, n - 1);
    } else {
        s1 = slope(3 * per_decade, 2 * per_decade);
        s2 = slope(2 * per_decade, per_decade);
        s3 = slope(per_decade, 0);
    }
    const bool monotone = (s3 - s2) * (s2 - s1) > 0.0;
    return monotone && std::abs(s3) > 20.0 && std::abs(s3) > 4.0 * std::max(1.0, std::abs(s1));
}

} // namespace

std::string_view regime_name(Regime r) { return r == Regime::zero ? "zero" : "infinity"; }

std::vector<double> IndexGrid::points(Regime regime) const {
    const double span = std::pow(10.0, decades);
    return regime == Regime::infinity ? log_grid(edge, edge * span, points_per_decade)
                                      : log_grid(1.0 / (edge * span), 1.0 / edge, points_per_decade);
}

IndexEstimate matuszewska_indices(const std::function<double(double)>& phi, Regime regime, const IndexGrid& grid) {
    const auto pts = grid.points(regime);
    IndexEstimate est;
    est.regime = regime;
    est.R0 = regime == Regime::infinity ? pts.front() : pts.back();

    // Keep the run of positive finite values next to the regime edge; values
    // that underflow or overflow further out mean the slope is unbounded.
    std::vector<double> lr, lv;
    bool hit_zero = false, hit_inf = false;
    auto take = [&](double r) {
        const double v = phi(r);
        if (!(v >= 0.0)) throw DegenerateProfile("function is negative or undefined at r = " + std::to_string(r));
        if (v == 0.0) hit_zero = true;
        if (std::isinf(v)) hit_inf = true;
        if (v == 0.0 || std::isinf(v)) return false;
        lr.push_back(std::log(r));
        lv.push_back(std::log(v));
        return true;
    };
    if (regime == Regime::infinity) {
        for (double r : pts)
            if (!take(r)) break;
    } else {
        for (auto it = pts.rbegin(); it != pts.rend(); ++it)
            if (!take(*it)) break;
        std::reverse(lr.begin(), lr.end());
        std::reverse(lv.begin(), lv.end());
    }
    if (lr.size() < 2) throw DegenerateProfile("function vanishes or overflows on the index grid");

    const bool outward_end = regime == Regime::infinity;
    const bool away = runs_away(lr, lv, outward_end, grid.points_per_decade);
    if (regime == Regime::infinity) {
        est.lower_unbounded = hit_zero || (away && lv.back() < lv.front());
        est.upper_unbounded = hit_inf || (away && lv.back() > lv.front());
    } else {
        est.lower_unbounded = hit_inf || (away && lv.front() > lv.back());
        est.upper_unbounded = hit_zero || (away && lv.front() < lv.back());
    }

    const std::size_t n = lr.size();
    const double min_gap = std::log(2.0);
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = lr[j] - lr[i];
            if (gap < min_gap) continue;
            const double slope = (lv[j] - lv[i]) / gap;
            lo = std::min(lo, slope);
            hi = std::max(hi, slope);
        }
    if (!std::isfinite(lo)) throw DegenerateProfile("index grid is shorter than one doubling");
    est.lower = est.lower_unbounded ? -INFINITY : lo;
    est.upper = est.upper_unbounded ? INFINITY : hi;

    double A = INFINITY, B = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double gap = lr[j] - lr[i];
            A = std::min(A, std::exp(lv[j] - lv[i] - lo * gap));
            B = std::max(B, std::exp(lv[j] - lv[i] - hi * gap));
        }
    est.A = est.lower_unbounded ? 0.0 : A;
    est.B = est.upper_unbounded ? INFINITY : B;
    return est;
}

ScalingCertificate certify_scaling(const ProcessSpec& spec, double M, double alpha, double R_inf, std::size_t points) {
    if (!(M > 0.0)) throw ParamOutOfRange("scaling constant M must be positive");
    auto grid = validation_grid(points);
    if (std::isfinite(R_inf)) std::erase_if(grid, [&](double r) { return r >= 2.0 * R_inf; });
    if (grid.size() < 2) throw DomainError("scaling window is empty");
    const double p = spec.d + alpha;
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = spec.nu(grid[i]);

    ScalingCertificate cert;
    cert.minimal_M = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
            const double q = v[j] > 0.0 ? v[i] / v[j] * std::pow(grid[i] / grid[j], p) : INFINITY;
            if (q > cert.minimal_M) {
                cert.minimal_M = q;
                cert.worst_r1 = grid[i];
                cert.worst_r2 = grid[j];
            }
        }
    cert.worst_ratio = cert.minimal_M / M;
    cert.certified = cert.worst_ratio <= 1.0 + 1e-9;
    return cert;
}

KaramataReport karamata_check(const std::function<double(double)>& phi, double s, KaramataCase which, double R,
                              double window, const IndexGrid& grid) {
    const double span = std::pow(10.0, grid.decades);
    std::vector<double> rs;
    switch (which) {
    case KaramataCase::a: rs = log_grid(R, R * span, grid.points_per_decade); break;
    case KaramataCase::b: rs = log_grid(2.0 * R, 2.0 * R * span, grid.points_per_decade); break;
    case KaramataCase::c: rs = log_grid(R / span, R, grid.points_per_decade); break;
    case KaramataCase::d: rs = log_grid(0.5 * R / span, 0.5 * R, grid.points_per_decade); break;
    case KaramataCase::global: rs = validation_grid(grid.decades * grid.points_per_decade * 2 + 1); break;
    }
    auto w = [&](double t) { return std::pow(t, -s - 1.0) * phi(t); };
    const QuadratureConfig cfg{1e-10, 0.0, 4000};
    const std::size_t n = rs.size();
    std::vector<double> I(n);
    // Accumulate between consecutive grid radii instead of restarting.
    auto piece = [&](double a, double b) { return integrate_radial(w, a, b, {}, cfg).value; };
    switch (which) {
    case KaramataCase::a:
        I[n - 1] = piece(rs[n - 1], kInf);
        for (std::size_t i = n - 1; i-- > 0;) I[i] = I[i + 1] + piece(rs[i], rs[i + 1]);
        break;
    case KaramataCase::b:
        I[0] = piece(R, rs[0]);
        for (std::size_t i = 1; i < n; ++i) I[i] = I[i - 1] + piece(rs[i - 1], rs[i]);
        break;
    case KaramataCase::c:
    case KaramataCase::global:
        I[0] = piece(0.0, rs[0]);
        for (std::size_t i = 1; i < n; ++i) I[i] = I[i - 1] + piece(rs[i - 1], rs[i]);
        break;
    case KaramataCase::d:
        I[n - 1] = piece(rs[n - 1], R);
        for (std::size_t i = n - 1; i-- > 0;) I[i] = I[i + 1] + piece(rs[i], rs[i + 1]);
        break;
    }
    KaramataReport rep;
    rep.r = rs;
    rep.min_ratio = INFINITY;
    rep.max_ratio = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double denom = std::pow(rs[i], -s) * phi(rs[i]);
        const double q = denom > 0.0 ? I[i] / denom : INFINITY;
        rep.ratio.push_back(q);
        rep.min_ratio = std::min(rep.min_ratio, q);
        rep.max_ratio = std::max(rep.max_ratio, q);
    }
    rep.constant = std::max(rep.max_ratio, 1.0 / rep.min_ratio);
    rep.bounded = std::isfinite(rep.constant) && rep.constant <= window;
    return rep;
}

bool IndexRelationsReport::all_hold() const {
    for (const auto& r : relations)
        if (r.applicable && !r.holds) return false;
    for (const auto& c : comparabilities)
        if (!c.bounded) return false;
    return true;
}

IndexRelationsReport index_relations_report(const ProcessSpec& spec, double tol, const IndexGrid& grid,
                                            double window) {
    IndexRelationsReport rep;
    auto psi_f = [&](double r) { return psi(spec, r); };
    auto K_f = [&](double r) { return pruitt_K(spec, r); };
    auto L_f = [&](double r) { return pruitt_L(spec, r); };
    auto nu_f = [&](double r) { return spec.nu(r); };

    auto add = [&](const std::string& name, const std::function<double(double)>& f, Regime regime) -> const IndexRow& {
        IndexRow row;
        row.quantity = name;
        row.estimate.regime = regime;
        try {
            row.estimate = matuszewska_indices(f, regime, grid);
        } catch (const DegenerateProfile&) {
            row.defined = false;
            row.estimate.lower = row.estimate.upper = NAN;
        }
        rep.rows.push_back(row);
        return rep.rows.back();
    };
    const IndexEstimate psi0 = add("psi", psi_f, Regime::zero).estimate;
    const IndexEstimate psiI = add("psi", psi_f, Regime::infinity).estimate;
    const IndexRow K0 = add("K", K_f, Regime::zero);
    const IndexRow KI = add("K", K_f, Regime::infinity);
    IndexRow L0, LI, nuI;
    L0.defined = LI.defined = nuI.defined = false;
    if (!spec.nu.vanishes()) {
        L0 = add("L", L_f, Regime::zero);
        LI = add("L", L_f, Regime::infinity);
        add("nu", nu_f, Regime::zero);
        nuI = add("nu", nu_f, Regime::infinity);
    }

    auto in_upper_range = [&](double b) { return std::isfinite(b) && b >= -tol && b < 2.0 - tol; };
    auto in_lower_range = [&](double a) { return std::isfinite(a) && a > tol && a <= 2.0 + tol; };
    auto fmt = [](double x) {
        std::ostringstream os;
        os.precision(4);
        os << x;
        return os.str();
    };
    auto relation = [&](const std::string& name, double left, bool left_in, double right, bool right_in,
                        bool extra = true) {
        RelationCheck c;
        c.name = name;
        c.applicable = left_in || right_in;
        c.holds = !c.applicable || (left_in && right_in && extra && std::abs(left - right) <= tol);
        c.detail = "psi index " + fmt(left) + " vs " + fmt(right);
        rep.relations.push_back(c);
    };
    const double La = LI.defined ? -LI.estimate.lower : NAN;
    const double Kb = KI.defined ? -KI.estimate.upper : NAN;
    const double Lc = L0.defined ? -L0.estimate.lower : NAN;
    const double Kd = K0.defined ? -K0.estimate.upper : NAN;
    relation("lk_a", psi0.upper, in_upper_range(psi0.upper), La, in_upper_range(La));
    relation("lk_b", psi0.lower, in_lower_range(psi0.lower), Kb, in_lower_range(Kb));
    relation("lk_c", psiI.upper, in_upper_range(psiI.upper), Lc, in_upper_range(Lc) && spec.sigma2 == 0.0,
             spec.sigma2 == 0.0);
    relation("lk_d", psiI.lower, in_lower_range(psiI.lower), Kd, in_lower_range(Kd));

    if (nuI.defined && !nuI.estimate.lower_unbounded) {
        const double beta = -spec.d - nuI.estimate.lower;
        RelationCheck c;
        c.name = "lknu_a";
        c.applicable = in_upper_range(beta);
        c.holds = !c.applicable || psi0.upper <= beta + tol;
        c.detail = "psi upper index at zero " + fmt(psi0.upper) + " vs " + fmt(beta);
        rep.relations.push_back(c);
    }

    // Comparability of K + L with the dominant Pruitt function and Psi(1/r).
    auto compare = [&](const std::string& name, bool use_L, bool large) {
        const auto rs = large ? log_grid(1.0, 1e6, 10) : log_grid(1e-6, 1.0, 10);
        ComparabilityCheck c;
        c.name = name;
        double lo = INFINITY, hi = 0.0;
        for (double r : rs) {
            const auto v = pruitt(spec, r);
            for (double q : {(use_L ? v.L : v.K) / v.sum, psi(spec, 1.0 / r) / v.sum}) {
                lo = std::min(lo, q);
                hi = std::max(hi, q);
            }
        }
        c.min_ratio = lo;
        c.max_ratio = hi;
        c.constant = std::max(hi, 1.0 / lo);
        c.bounded = std::isfinite(c.constant) && c.constant <= window;
        rep.comparabilities.push_back(c);
    };
    const char* names[] = {"lk_a", "lk_b", "lk_c", "lk_d"};
    for (int i = 0; i < 4; ++i) {
        const auto& rel = rep.relations[i];
        if (rel.applicable && rel.holds) compare(std::string(names[i]) + "_comparable", i % 2 == 0, i < 2);
    }
    return rep;
}

} // namespace levypot
