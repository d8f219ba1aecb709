#include "levypot/jump_table.hpp"

#include <algorithm>
#include <cmath>

#include "levypot/errors.hpp"
#include "levypot/quadrature.hpp"
#include "levypot/special.hpp"

namespace levypot {

namespace {

double hermite(double t, double h, double g0, double g1, double m0, double m1) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * g0 + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * g1 + (t3 - t2) * h * m1;
}

constexpr double kTableLow = 1e-10;
constexpr double kTableHigh = 1e10;
constexpr int kPerDecade = 32;

} // namespace

LogSpline::LogSpline(std::vector<double> s, std::vector<double> v, std::vector<double> dv_left,
                     std::vector<double> dv_right) {
    const std::size_t n = s.size();
    if (n < 2 || v.size() != n || dv_left.size() != n || dv_right.size() != n)
        throw DomainError("spline table needs at least two consistent nodes");
    zero_end_ = v.back() == 0.0;
    increasing_ = v.back() > v.front();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        Segment sg{};
        sg.u0 = std::log(s[i]);
        sg.u1 = std::log(s[i + 1]);
        sg.linear = zero_end_ && i + 2 == n;
        if (sg.linear) {
            sg.g0 = v[i];
            sg.g1 = 0.0;
            sg.m0 = dv_right[i] * s[i];
            sg.m1 = dv_left[i + 1] * s[i + 1];
        } else {
            if (!(v[i] > 0.0 && v[i + 1] > 0.0)) throw DomainError("spline table values must be positive");
            sg.g0 = std::log(v[i]);
            sg.g1 = std::log(v[i + 1]);
            sg.m0 = dv_right[i] * s[i] / v[i];
            sg.m1 = dv_left[i + 1] * s[i + 1] / v[i + 1];
        }
        seg_.push_back(sg);
    }
}

double LogSpline::represent(const Segment& sg, double u) const {
    const double h = sg.u1 - sg.u0;
    return hermite((u - sg.u0) / h, h, sg.g0, sg.g1, sg.m0, sg.m1);
}

double LogSpline::value(const Segment& sg, double u) const {
    const double g = represent(sg, u);
    return sg.linear ? std::max(g, 0.0) : std::exp(g);
}

double LogSpline::operator()(double s) const {
    const double u = std::log(s);
    const Segment& first = seg_.front();
    const Segment& last = seg_.back();
    if (u <= first.u0) return std::exp(first.g0 + first.m0 * (u - first.u0));
    if (u >= last.u1) return zero_end_ ? 0.0 : std::exp(last.g1 + last.m1 * (u - last.u1));
    auto it = std::upper_bound(seg_.begin(), seg_.end(), u, [](double x, const Segment& sg) { return x < sg.u1; });
    return value(*it, u);
}

double LogSpline::inverse(double target) const {
    const Segment& first = seg_.front();
    const Segment& last = seg_.back();
    const double lt = std::log(target);
    const double sign = increasing_ ? 1.0 : -1.0;
    // Power-law continuation beyond the ends.
    if (sign * (lt - first.g0) <= 0.0 && !first.linear) {
        if (first.m0 == 0.0) return std::exp(first.u0);
        return std::exp(first.u0 + (lt - first.g0) / first.m0);
    }
    if (!last.linear && sign * (lt - last.g1) >= 0.0) {
        if (last.m1 == 0.0) return std::exp(last.u1);
        return std::exp(last.u1 + (lt - last.g1) / last.m1);
    }
    // Locate the segment whose value range contains the target.
    auto beyond = [&](const Segment& sg) {
        const double end = sg.linear ? sg.g1 : std::exp(sg.g1);
        return sign * (end - target) < 0.0;
    };
    std::size_t lo = 0, hi = seg_.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (beyond(seg_[mid]))
            lo = mid + 1;
        else
            hi = mid;
    }
    const Segment& sg = seg_[lo];
    const double goal = sg.linear ? target : lt;
    // Safeguarded Newton on the monotone Hermite piece.
    double a = sg.u0, b = sg.u1;
    double u = 0.5 * (a + b);
    for (int it = 0; it < 60; ++it) {
        const double f = represent(sg, u) - goal;
        if (sign * f < 0.0)
            a = u;
        else
            b = u;
        const double h = sg.u1 - sg.u0;
        const double t = (u - sg.u0) / h;
        const double t2 = t * t;
        const double dg = ((6 * t2 - 6 * t) * sg.g0 + (3 * t2 - 4 * t + 1) * h * sg.m0 + (-6 * t2 + 6 * t) * sg.g1 +
                           (3 * t2 - 2 * t) * h * sg.m1) /
                          h;
        double next = dg != 0.0 ? u - f / dg : 0.5 * (a + b);
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - u) < 1e-15 * (1.0 + std::abs(u))) return std::exp(next);
        u = next;
    }
    return std::exp(u);
}

JumpTable::JumpTable(const ProcessSpec& spec) : d_(spec.d) {
    const auto& nu = spec.nu;
    has_jumps_ = !nu.vanishes();
    if (!has_jumps_) return;
    mass_ = nu.total_mass;
    finite_ = std::isfinite(mass_);
    support_ = nu.support_radius;
    const double omega = sphere_area(d_);
    const int d = d_;

    // Nodes: log grid plus breakpoints, truncated at the support.
    const double top = std::min(kTableHigh, support_);
    std::vector<double> s;
    const int n = static_cast<int>(std::ceil(std::log10(top / kTableLow) * kPerDecade));
    for (int i = 0; i <= n; ++i) s.push_back(kTableLow * std::pow(top / kTableLow, static_cast<double>(i) / n));
    for (double b : nu.breakpoints)
        if (b > kTableLow && b < top) s.push_back(b);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * b; }), s.end());
    s.back() = top;

    auto density_left = [&](double x) { return nu(x * (1.0 - 1e-13)); };
    auto density_right = [&](double x) { return nu(x * (1.0 + 1e-13)); };
    const QuadratureConfig cfg{1e-12, 0.0, 2000};
    auto piece = [&](double a, double b, int power) {
        return omega * integrate_radial([&](double x) { return std::pow(x, power) * nu(x); }, a, b, {}, cfg).value;
    };
    const std::size_t m = s.size();
    std::vector<double> dl(m), dr(m);

    if (finite_) {
        std::vector<double> F(m);
        F[0] = piece(0.0, s[0], d - 1);
        for (std::size_t i = 1; i < m; ++i) F[i] = F[i - 1] + piece(s[i - 1], s[i], d - 1);
        for (std::size_t i = 0; i < m; ++i) {
            dl[i] = omega * std::pow(s[i], d - 1) * density_left(s[i]);
            dr[i] = omega * std::pow(s[i], d - 1) * density_right(s[i]);
        }
        // The table must close on the full mass; beyond its end the rest is a
        // negligible far tail that is clamped.
        mass_ = std::isfinite(support_) ? F.back() : mass_;
        cumulative_ = LogSpline(s, F, dl, dr);
        return;
    }

    // Tail: drop trailing nodes where the tail underflowed to zero.
    std::vector<double> T(m);
    T[m - 1] = std::isfinite(support_) ? 0.0 : piece(s[m - 1], kInf, d - 1);
    for (std::size_t i = m - 1; i-- > 0;) T[i] = T[i + 1] + piece(s[i], s[i + 1], d - 1);
    std::size_t keep = m;
    while (keep > 2 && T[keep - 2] == 0.0) --keep;
    for (std::size_t i = 0; i < m; ++i) {
        dl[i] = -omega * std::pow(s[i], d - 1) * density_left(s[i]);
        dr[i] = -omega * std::pow(s[i], d - 1) * density_right(s[i]);
    }
    std::vector<double> sk(s.begin(), s.begin() + keep), Tk(T.begin(), T.begin() + keep);
    std::vector<double> dlk(dl.begin(), dl.begin() + keep), drk(dr.begin(), dr.begin() + keep);
    tail_ = LogSpline(sk, Tk, dlk, drk);

    std::vector<double> M(m);
    M[0] = piece(0.0, s[0], d + 1) / d;
    for (std::size_t i = 1; i < m; ++i) M[i] = M[i - 1] + piece(s[i - 1], s[i], d + 1) / d;
    for (std::size_t i = 0; i < m; ++i) {
        dl[i] = omega / d * std::pow(s[i], d + 1) * density_left(s[i]);
        dr[i] = omega / d * std::pow(s[i], d + 1) * density_right(s[i]);
    }
    if (std::isfinite(support_)) dl[m - 1] = dr[m - 1] = 0.0;
    small_ = LogSpline(s, M, dl, dr);
}

double JumpTable::tail_rate(double eps) const {
    if (!has_jumps_) return 0.0;
    if (finite_) return mass_ - (eps > 0.0 ? cumulative_(eps) : 0.0);
    if (!(eps > 0.0)) throw CutoffTooSmall("infinite Levy measure needs a positive cutoff");
    if (eps >= support_) return 0.0;
    const double rate = tail_(eps);
    if (!(rate < 1e15)) throw CutoffTooSmall("jump rate above the cutoff overflows (eps = " + std::to_string(eps) + ")");
    return rate;
}

double JumpTable::small_variance(double eps) const {
    if (!has_jumps_ || finite_ || !(eps > 0.0)) return 0.0;
    if (eps >= support_) return small_(support_ * (1.0 - 1e-15));
    return small_(eps);
}

double JumpTable::sample_tail(double eps, double u) const {
    if (finite_) {
        const double base = eps > 0.0 ? cumulative_(eps) : 0.0;
        return cumulative_.inverse(base + u * (mass_ - base));
    }
    return tail_.inverse(u * tail_rate(eps));
}

double JumpTable::sample_finite(double u) const { return cumulative_.inverse(u * mass_); }

} // namespace levypot
