#include "levypot/process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levypot/errors.hpp"
#include "levypot/quadrature.hpp"
#include "levypot/special.hpp"

namespace levypot {

namespace {

constexpr std::pair<Family, std::string_view> kNames[] = {
    {Family::brownian, "brownian"},
    {Family::stable, "stable"},
    {Family::slow_decay, "slow_decay"},
    {Family::variance_gamma, "variance_gamma"},
    {Family::two_uniform_cp, "two_uniform_cp"},
    {Family::gauss_plus_uniform, "gauss_plus_uniform"},
    {Family::log_kernel, "log_kernel"},
    {Family::tabulated, "tabulated"},
};

double param(const FamilyParams& p, std::string_view key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

std::string fmt_num(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

// Gaussian mixture of the heat kernel against t^{-1} e^{-t} dt, integrated in
// log t around the peak of the integrand.
double variance_gamma_density(int d, double s) {
    const double half_d = 0.5 * d;
    const double w = 0.5 * s * s / (half_d + std::sqrt(half_d * half_d + s * s));
    const double v0 = std::log(w);
    auto expo = [&](double v) { return -half_d * v - 0.25 * s * s * std::exp(-v) - std::exp(v); };
    const double e0 = expo(v0);
    if (e0 < -760.0) return 0.0;   // below the smallest subnormal anyway
    auto f = [&](double v) { return std::exp(expo(v) - e0); };
    const QuadratureConfig cfg{1e-13, 0.0, 4000};
    const double inner = integrate(f, -kInf, v0, cfg).value + integrate(f, v0, kInf, cfg).value;
    return std::pow(4.0 * std::numbers::pi, -half_d) * std::exp(e0) * inner;
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ParamOutOfRange(what);
}

} // namespace

std::string_view family_name(Family f) {
    for (auto& [fam, name] : kNames)
        if (fam == f) return name;
    return "unknown";
}

Family family_from_name(std::string_view name) {
    for (auto& [fam, n] : kNames)
        if (n == name) return fam;
    throw UnknownFamily("unknown family '" + std::string(name) + "'");
}

std::vector<std::string> family_parameter_names(Family f) {
    switch (f) {
    case Family::brownian: return {"sigma2"};
    case Family::stable: return {"alpha", "A"};
    case Family::slow_decay: return {"alpha", "C"};
    case Family::two_uniform_cp:
    case Family::gauss_plus_uniform: return {"lambda", "R"};
    case Family::variance_gamma:
    case Family::log_kernel:
    case Family::tabulated: return {};
    }
    return {};
}

ProcessSpec make_family(Family f, int d, const FamilyParams& params) {
    require(d >= 1 && d <= 8, "dimension must be between 1 and 8");
    const auto allowed = family_parameter_names(f);
    for (auto& [key, value] : params) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParamOutOfRange("parameter '" + key + "' is not used by family " + std::string(family_name(f)));
        require(std::isfinite(value), "parameter '" + key + "' must be finite");
    }

    ProcessSpec spec;
    spec.d = d;
    RadialProfile& nu = spec.nu;
    nu.family = f;
    std::string label = std::string(family_name(f)) + "(d=" + std::to_string(d);

    switch (f) {
    case Family::brownian: {
        const double s2 = param(params, "sigma2", 1.0);
        require(s2 > 0.0, "brownian: sigma2 must be positive");
        spec.sigma2 = s2;
        label += ",sigma2=" + fmt_num(s2);
        break;
    }
    case Family::stable: {
        if (!params.contains("alpha")) throw ParamOutOfRange("stable: alpha is required");
        const double alpha = param(params, "alpha", 1.0);
        const double A = param(params, "A", 1.0);
        require(alpha > 0.0 && alpha < 2.0, "stable: alpha must lie in (0, 2)");
        require(A > 0.0, "stable: A must be positive");
        nu.density = [=](double s) { return A * std::pow(s, -d - alpha); };
        nu.singular_at_zero = true;
        nu.total_mass = kInf;
        nu.power_law_tail = true;
        label += ",alpha=" + fmt_num(alpha) + ",A=" + fmt_num(A);
        break;
    }
    case Family::slow_decay: {
        if (!params.contains("alpha")) throw ParamOutOfRange("slow_decay: alpha is required");
        const double alpha = param(params, "alpha", 1.0);
        const double C = param(params, "C", 1.0);
        require(alpha > 0.0, "slow_decay: alpha must be positive");
        require(C > 0.0, "slow_decay: C must be positive");
        nu.density = [=](double s) { return C * std::pow(s, -d) * std::pow(1.0 + s, -alpha); };
        nu.singular_at_zero = true;
        nu.total_mass = kInf;
        nu.power_law_tail = true;
        label += ",alpha=" + fmt_num(alpha) + ",C=" + fmt_num(C);
        break;
    }
    case Family::variance_gamma: {
        nu.density = [=](double s) { return variance_gamma_density(d, s); };
        nu.singular_at_zero = true;
        nu.total_mass = kInf;
        break;
    }
    case Family::two_uniform_cp:
    case Family::gauss_plus_uniform: {
        const double lambda = param(params, "lambda", 1.0);
        const double R = param(params, "R", 2.0);
        require(lambda >= 0.0, "lambda must be non-negative");
        require(R > 0.0, "R must be positive");
        const double big = lambda / ball_volume(d, R);
        if (f == Family::two_uniform_cp) {
            const double small = 1.0 / ball_volume(d, 1.0);
            nu.density = [=](double s) { return (s < 1.0 ? small : 0.0) + (s < R ? big : 0.0); };
            nu.total_mass = 1.0 + lambda;
            nu.support_radius = lambda > 0.0 ? std::max(1.0, R) : 1.0;
            nu.breakpoints = {1.0, R};
        } else {
            spec.sigma2 = 1.0;
            if (lambda > 0.0) {
                nu.density = [=](double s) { return s < R ? big : 0.0; };
                nu.total_mass = lambda;
                nu.support_radius = R;
                nu.breakpoints = {R};
            }
        }
        label += ",lambda=" + fmt_num(lambda) + ",R=" + fmt_num(R);
        break;
    }
    case Family::log_kernel: {
        nu.density = [=](double s) { return s < 1.0 ? std::pow(s, -d) : 0.0; };
        nu.support_radius = 1.0;
        nu.singular_at_zero = true;
        nu.total_mass = kInf;
        nu.breakpoints = {1.0};
        break;
    }
    case Family::tabulated:
        throw ParamOutOfRange("tabulated profiles are built with make_tabulated");
    }
    spec.label = label + ")";

    const auto report = validate(spec);
    if (!report.ok())
        throw ValidationFailed(spec.label + ": profile is not admissible (monotone=" +
                               std::string(report.monotone ? "yes" : "no") + ")");
    return spec;
}

ProcessSpec make_tabulated(int d, double sigma2, std::vector<double> s, std::vector<double> nu,
                           std::string label) {
    require(d >= 1 && d <= 8, "dimension must be between 1 and 8");
    require(sigma2 >= 0.0, "sigma2 must be non-negative");
    require(s.size() >= 2 && s.size() == nu.size(), "tabulated profile needs matching s and nu columns");
    for (std::size_t i = 0; i < s.size(); ++i) {
        require(s[i] > 0.0 && (i == 0 || s[i] > s[i - 1]), "tabulated radii must be positive and increasing");
        require(nu[i] >= 0.0 && std::isfinite(nu[i]), "tabulated density must be finite and non-negative");
    }
    // Truncate at the first zero; that radius becomes the support edge.
    double support = kInf;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (nu[i] == 0.0) {
            require(i > 0, "tabulated density vanishes at the first node");
            support = s[i];
            s.resize(i);
            nu.resize(i);
            break;
        }
    }
    const std::size_t n = s.size();
    std::vector<double> ls(n), lv(n);
    for (std::size_t i = 0; i < n; ++i) {
        ls[i] = std::log(s[i]);
        lv[i] = std::log(nu[i]);
    }
    auto slope = [&](std::size_t i) { return n < 2 ? 0.0 : (lv[i + 1] - lv[i]) / (ls[i + 1] - ls[i]); };
    const double head = n >= 2 ? slope(0) : 0.0;
    const double tail = n >= 2 ? slope(n - 2) : 0.0;
    const bool finite_support = std::isfinite(support);

    ProcessSpec spec;
    spec.d = d;
    spec.sigma2 = sigma2;
    spec.label = label;
    RadialProfile& p = spec.nu;
    p.family = Family::tabulated;
    p.support_radius = support;
    p.breakpoints = s;
    p.density = [=](double x) {
        const double lx = std::log(x);
        if (lx <= ls.front()) return std::exp(lv.front() + head * (lx - ls.front()));
        if (lx >= ls.back())
            return finite_support ? std::exp(lv.back()) : std::exp(lv.back() + tail * (lx - ls.back()));
        const auto it = std::upper_bound(ls.begin(), ls.end(), lx);
        const std::size_t j = static_cast<std::size_t>(it - ls.begin()) - 1;
        const double t = (lx - ls[j]) / (ls[j + 1] - ls[j]);
        return std::exp(lv[j] + t * (lv[j + 1] - lv[j]));
    };
    p.singular_at_zero = head < 0.0;
    p.power_law_tail = !finite_support;
    if (head <= -d) {
        p.total_mass = kInf;
    } else {
        try {
            p.total_mass = sphere_area(d) * integrate_radial([&](double x) { return std::pow(x, d - 1) * p(x); },
                                                             0.0, support, p.breakpoints, {1e-10, 0.0, 4000})
                                                .value;
        } catch (const DivergentIntegral&) {
            p.total_mass = kInf;
        }
    }
    const auto report = validate(spec);
    if (!report.ok()) throw ValidationFailed(label + ": tabulated profile is not admissible");
    return spec;
}

std::vector<double> validation_grid(std::size_t points) {
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i)
        g[i] = std::pow(10.0, -6.0 + 12.0 * static_cast<double>(i) / static_cast<double>(points - 1));
    return g;
}

ProcessSpec rescaled(const ProcessSpec& spec, double r) {
    require(r > 0.0 && std::isfinite(r), "rescaling needs a positive finite length");
    ProcessSpec out = spec;
    out.sigma2 = spec.sigma2 / (r * r);
    RadialProfile& p = out.nu;
    if (spec.nu.density) {
        const double rd = std::pow(r, spec.d);
        p.density = [inner = spec.nu.density, r, rd](double w) { return rd * inner(r * w); };
    }
    p.support_radius = spec.nu.support_radius / r;
    for (double& b : p.breakpoints) b /= r;
    // Unit length of the original profile, where its shape may change.
    if (spec.nu.density && std::isinf(spec.nu.support_radius)) p.breakpoints.push_back(1.0 / r);
    out.label = spec.label + "@" + fmt_num(r);
    return out;
}

ValidationReport validate(const ProcessSpec& spec) {
    ValidationReport rep;
    const auto& nu = spec.nu;
    rep.total_mass = nu.total_mass;
    rep.compound_poisson = spec.compound_poisson();
    if (nu.vanishes()) {
        rep.integrability = 0.0;
        return rep;
    }
    const auto grid = validation_grid();
    double prev = nu(grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double v = nu(grid[i]);
        if (!(v >= 0.0) || v > prev * (1.0 + 1e-12)) {
            rep.monotone = false;
            rep.first_violation = grid[i];
            break;
        }
        prev = v;
    }
    const int d = spec.d;
    try {
        auto f = [&](double s) { return std::min(s * s, 1.0) * std::pow(s, d - 1) * nu(s); };
        rep.integrability =
            sphere_area(d) * integrate_radial(f, 0.0, nu.support_radius, nu.breakpoints, {1e-9, 0.0, 4000}).value;
    } catch (const NonConvergentQuadrature&) {
        rep.integrability = kInf;
    } catch (const DivergentIntegral&) {
        rep.integrability = kInf;
    }
    return rep;
}

} // namespace levypot
