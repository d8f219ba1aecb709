// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "levypot/averaging.hpp"
#include "levypot/bounds.hpp"
#include "levypot/errors.hpp"
#include "levypot/indices.hpp"
#include "levypot/radial.hpp"
#include "runner.hpp"

using namespace levypot;
using namespace levypot::cli;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

RunResult run_text(const std::string& text, int threads = 1) {
    RunConfig cfg = build_config(ConfigFile::parse(text), "");
    cfg.runs.threads = threads;
    return execute(cfg);
}

bool within_sigma(double est, double se, double exact, double k = 3.0) { return std::abs(est - exact) <= k * se; }

// Criterion 1
void pruitt_closed_form(Outcome& o) {
    const auto spec = make_family(Family::stable, 3, {{"alpha", 1.0}, {"A", 1.0}});
    const auto p = pruitt(spec, 1.0);
    const double rel_k = std::abs(p.K / (4.0 * pi) - 1.0), rel_l = std::abs(p.L / (4.0 * pi) - 1.0);
    o.detail << "K(1)/4pi-1=" << rel_k << " L(1)/4pi-1=" << rel_l;
    o.check(rel_k <= 1e-8 && rel_l <= 1e-8, "K(1), L(1) = 4 pi");
    double worst = 0.0;
    for (double r : {0.1, 1.0, 10.0}) {
        const double h = 1e-4 * r;
        const double deriv = (pruitt(spec, r + h).sum - pruitt(spec, r - h).sum) / (2.0 * h);
        const double expect = -2.0 * pruitt(spec, r).K / r;
        worst = std::max(worst, std::abs(deriv / expect - 1.0));
    }
    o.detail << " worst (K+L)' identity error=" << worst;
    o.check(worst <= 1e-6, "(K+L)' = -2K/r");
}

const std::string kBrownianExit = "[spec]\nfamily = brownian\nsigma2 = 1\n[mc]\nn = {n}\n[run]\nseed = 11\n"
                                  "[task]\ncommand = simulate\nquantity = exit_time\nr = 1\nx = 0\n";
const std::string kBrownianHit = "[spec]\nfamily = brownian\nsigma2 = 1\n[mc]\nn = {n}\nouter_kill_radius = 2e4\n"
                                 "[run]\nseed = 12\n[task]\ncommand = hitball\nr = 1\nx = 2\n";

std::string with_n(std::string text, const std::string& n) {
    for (std::size_t pos; (pos = text.find("{n}")) != std::string::npos;) text.replace(pos, 3, n);
    return text;
}

// Criterion 2
void brownian_oracles(Outcome& o) {
    const auto exit = run_text(with_n(kBrownianExit, "1e6")).table("simulate.csv");
    const double m = exit.number(0, "mean"), se = exit.number(0, "stderr");
    o.detail << "E tau=" << m << " +- " << se << " (1/6)";
    o.check(within_sigma(m, se, 1.0 / 6.0), "exit time");
    const auto hit = run_text(with_n(kBrownianHit, "1e6")).table("hitball.csv");
    const double h = hit.number(0, "mean"), hse = hit.number(0, "stderr");
    o.detail << "; P(hit)=" << h << " +- " << hse << " (0.5), killed bias bound " << hit.number(0, "bias_bound");
    o.check(within_sigma(h, hse, 0.5), "hit probability");
}

// Criterion 3
void riesz_oracle(Outcome& o) {
    const auto base = make_family(Family::stable, 3, {{"alpha", 1.0}});
    const auto stable = make_family(Family::stable, 3, {{"alpha", 1.0}, {"A", 1.0 / psi(base, 1.0)}});
    const auto bm = make_family(Family::brownian, 3, {{"sigma2", 1.0}});
    // The Riesz kernel is homogeneous of degree alpha - d, so U(x) = 1 / (2 pi^2 |x|^2);
    // the form 1 / (2 pi^2 |x|) agrees with it only at |x| = 1.
    double worst_s = 0.0, worst_b = 0.0, worst_linear = 0.0;
    for (double x : {0.5, 1.0, 2.0}) {
        const double u = potential_kernel_fourier(stable, x).value;
        worst_s = std::max(worst_s, std::abs(u * 2.0 * pi * pi * x * x - 1.0));
        worst_linear = std::max(worst_linear, std::abs(u * 2.0 * pi * pi * x - 1.0));
        worst_b = std::max(worst_b, std::abs(potential_kernel_fourier(bm, x).value * 4.0 * pi * x - 1.0));
    }
    o.detail << "stable rel err vs 1/(2 pi^2 |x|^2)=" << worst_s << " (vs 1/(2 pi^2 |x|): " << worst_linear
             << ", exact only at |x|=1) brownian rel err=" << worst_b;
    o.check(worst_s <= 1e-4, "Riesz kernel");
    o.check(worst_b <= 1e-8, "Newtonian kernel");
}

std::string sandwich_config(const std::string& theorem, const std::string& n) {
    return "[spec]\nfamily = stable\nalpha = 1\n[mc]\nn = " + n + "\n[run]\nseed = 21\n[task]\ncommand = verify-bounds\n"
           "theorem = " + theorem + "\nradii = 1, 2\n";
}

// Criterion 4
void bound_sandwiches(Outcome& o) {
    for (const std::string th : {"ret", "pot", "green"}) {
        const auto res = run_text(sandwich_config(th, "1e5"));
        const Table& t = res.table("verify.csv");
        double c = 1.0, drift = 1.0;
        bool ok = res.exit_code == 0;
        for (const auto& rep : res.reports) {
            c = std::max(c, rep.implied_c);
            ok = ok && rep.status == "ok";
        }
        // Rows come radius-major, so row i at r matches row i + half at 2r.
        const std::size_t half = t.rows.size() / 2;
        for (std::size_t i = 0; i < half; ++i)
            for (const char* col : {"c_lower", "c_upper"}) {
                const double q = t.number(i + half, col) / t.number(i, col);
                drift = std::max(drift, std::max(q, 1.0 / q));
            }
        o.detail << th << ": c=" << c << " scale drift x" << drift << "; ";
        o.check(ok && c <= 1e3, th + " sandwich");
        o.check(drift <= 2.0, th + " scaling");
    }
}

// Criterion 5
void pruitt_estimate(Outcome& o) {
    const std::vector<std::pair<Family, FamilyParams>> families = {
        {Family::stable, {{"alpha", 0.5}}}, {Family::stable, {{"alpha", 1.0}}},   {Family::stable, {{"alpha", 1.5}}},
        {Family::brownian, {}},             {Family::slow_decay, {{"alpha", 1.0}}}, {Family::two_uniform_cp, {}}};
    double lo = kInf, hi = 0.0;
    int block = 0;
    for (const auto& [f, params] : families) {
        const auto spec = make_family(f, 3, params);
        for (double r : {0.5, 1.0, 2.0}) {
            RunOptions opt;
            opt.n = 20000;
            opt.seed = 31;
            opt.first_path = static_cast<std::uint64_t>(block++) << 40;
            const auto e = exit_time_ball(spec, SimScheme{}, r, Point{}, opt);
            const double v = e.mean * pruitt(spec, r).sum;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (v < 0.05 || v > 20.0) o.detail << spec.label << " r=" << r << " gives " << v << "; ";
        }
    }
    o.detail << "E tau (K+L) over 18 cases in [" << lo << ", " << hi << "]";
    o.check(lo >= 0.05 && hi <= 20.0, "range [0.05, 20]");
}

std::string sup_config(int lambda, const std::string& center_n, const std::string& shell_n) {
    const int R = lambda * lambda * lambda;
    return "[spec]\nfamily = two_uniform_cp\nlambda = " + std::to_string(lambda) + "\nR = " + std::to_string(R) +
           "\n[mc]\nn = 1e5\n[run]\nseed = 41\n[task]\ncommand = verify-bounds\ntheorem = sup\nradii = 2\nq = 1\n"
           "target_a = 2\ntarget_b = 3\ncenter_n = " + center_n + "\nshell_n = " + shell_n + "\n";
}

// Criterion 6
void exit_probability_decrease(Outcome& o) {
    const auto small = run_text(sup_config(10, "1e7", "1e6")).table("sup_terms.csv");
    const auto large = run_text(sup_config(50, "1e8", "1e6")).table("sup_terms.csv");
    const double r10 = small.number(0, "local_ratio"), s10 = small.number(0, "local_ratio_stderr");
    const double r50 = large.number(0, "local_ratio"), s50 = large.number(0, "local_ratio_stderr");
    const double factor = r10 / r50;
    const double factor_se = factor * std::hypot(s10 / r10, s50 / r50);
    o.detail << "ratio(10)=" << r10 << " +- " << s10 << ", ratio(50)=" << r50 << " +- " << s50
             << ", decrease factor " << factor << " +- " << factor_se << " (required >= 5)";
    o.check(factor >= 5.0, "decrease by a factor of 5");
}

// Criterion 7
void harnack_ratio_decrease(Outcome& o) {
    std::vector<double> ratio, se;
    for (double r : {0.2, 0.1, 0.05}) {
        std::ostringstream cfg;
        cfg << "[spec]\nfamily = log_kernel\n[mc]\nn = 2e5\n[run]\nseed = 51\n[task]\ncommand = simulate\n"
               "quantity = exit_prob\ntarget = halfspace\nlevel = 1\nr = "
            << format_number(2.0 * r) << "\nx = " << format_number(-r) << ", " << format_number(r) << "\n";
        const auto t = run_text(cfg.str()).table("simulate.csv");
        const double fm = t.number(0, "mean"), sm = t.number(0, "stderr");
        const double fp = t.number(1, "mean"), sp = t.number(1, "stderr");
        ratio.push_back(fm / fp);
        se.push_back(fm / fp * std::hypot(sm / fm, sp / fp));
        o.detail << "r=" << r << ": " << ratio.back() << " +- " << se.back() << "; ";
    }
    for (std::size_t i = 0; i + 1 < ratio.size(); ++i)
        o.check(ratio[i] - ratio[i + 1] > 3.0 * std::hypot(se[i], se[i + 1]), "strict decrease beyond 3 stderr");
}

// Criterion 8
void averaged_kernels(Outcome& o) {
    auto flat_family = [](int n, double atom) {
        std::vector<RadialKernel> ks;
        for (int j = 0; j < n; ++j) {
            const double r = static_cast<double>(j) / n;
            std::vector<double> edges{r};
            for (int k = j + 1; k <= n; ++k) edges.push_back(static_cast<double>(k) / n);
            edges.push_back(10.0);
            ks.push_back(tabulate_kernel(r, atom, [](double) { return 1.0; }, edges));
        }
        return ks;
    };
    const auto flat = dyadic_average(flat_family(4, 0.0), 0.0, 1.0);
    const bool flat_ok = flat.alpha == std::vector<double>{1.0, 0.0, 0.0, 0.0};
    std::vector<RadialKernel> atoms;
    for (int j = 0; j < 4; ++j) atoms.push_back(tabulate_kernel(j / 4.0, 1.0, [](double) { return 0.0; }, {j / 4.0}));
    const auto atom = dyadic_average(atoms, 0.0, 1.0);
    const bool atom_ok = atom.alpha == std::vector<double>(4, 0.25);
    const auto mixed = dyadic_average(flat_family(2, 1.0), 0.0, 1.0);
    const double mixed_err = std::max(std::abs(mixed.alpha[0] - 1.0 / 3.0), std::abs(mixed.alpha[1] - 2.0 / 9.0));
    o.detail << "worked examples: flat " << (flat_ok ? "exact" : "wrong") << ", atoms " << (atom_ok ? "exact" : "wrong")
             << ", mixed error " << mixed_err << "; ";
    o.check(flat_ok && atom_ok && mixed_err <= 1e-16, "worked weight examples");

    const auto spec = make_family(Family::stable, 3, {{"alpha", 1.0}});
    RegularizationOptions opt;
    opt.n = 16;
    opt.runs.n = 20000;
    opt.runs.seed = 61;
    const auto k = regularization_kernel(spec, 0.0, 1.0, opt);
    const bool in_window = k.C_reg * k.implied_c >= k.window.creg_lower * (1.0 - 1e-12) &&
                           k.C_reg <= k.implied_c * k.window.creg_upper * (1.0 + 1e-12);
    o.detail << "C_reg=" << k.C_reg << " window [" << k.window.creg_lower << ", " << k.window.creg_upper
             << "] implied c=" << k.implied_c << "; ";
    o.check(in_window && k.implied_c <= 1e2, "C_reg window");

    RunOptions ro;
    ro.n = 100000;
    ro.seed = 62;
    const std::vector<std::pair<std::string, std::function<double(const Point&)>>> tests = {
        {"gaussian", [](const Point& z) { return std::exp(-norm(z, 3) * norm(z, 3)); }},
        {"shifted half-space", [](const Point& z) { return z[0] > 0.5 ? 1.0 : 0.0; }}};
    for (const auto& [name, f] : tests) {
        const auto mv = mean_value_test(spec, k, f, SimScheme{}, ro);
        o.detail << name << ": averaged " << mv.averaged.mean << " direct " << mv.direct.mean << " diff "
                 << mv.difference << " +- " << mv.combined_stderr << "; ";
        o.check(mv.agrees(3.0), "mean-value test " + name);
    }
}

// Criterion 9
void index_estimates(Outcome& o) {
    double worst = 0.0;
    for (double p : {-3.5, -1.0, 0.5, 2.0})
        for (Regime g : {Regime::zero, Regime::infinity}) {
            const auto e = matuszewska_indices([p](double r) { return std::pow(r, p); }, g, IndexGrid{6, 25, 1e2});
            worst = std::max({worst, std::abs(e.lower - p), std::abs(e.upper - p)});
        }
    o.detail << "power-law index error " << worst << "; ";
    o.check(worst <= 0.01, "power-law exponents");
    const auto stable = certify_scaling(make_family(Family::stable, 3, {{"alpha", 1.0}}), 1.0, 1.0);
    const auto logk = certify_scaling(make_family(Family::log_kernel, 3, {}), 1.0, 1.0);
    o.detail << "stable certified " << stable.certified << ", log_kernel certified " << logk.certified
             << " (minimal M " << logk.minimal_M << "); ";
    o.check(stable.certified && !logk.certified, "scaling certificates");
    const auto rep = index_relations_report(make_family(Family::slow_decay, 3, {{"alpha", 1.0}}));
    bool case_a = false;
    for (const auto& r : rep.relations)
        if (r.name == "lk_a") {
            case_a = r.applicable && r.holds;
            o.detail << "case (a): " << r.detail;
        }
    o.check(case_a, "bounded ratio for case (a)");
}

// Criterion 10
void witness_search(Outcome& o) {
    const auto slow = make_family(Family::slow_decay, 3, {{"alpha", 1.9}});
    const double r = std::exp(-100.0);
    const auto w = superharmonic_witness(slow, r);
    o.detail << "slow_decay r=e^-100: L/K=" << w.L / w.K << " found=" << w.found << " a=" << w.a << " b=" << w.b
             << " max Af=" << w.max_generator << " (scale K L=" << w.scale << "); ";
    o.check(w.L / w.K > 125.0, "L/K > 5^3");
    o.check(w.found && !w.trivial && w.max_generator <= 1e-6 * w.scale, "witness found");
    const auto t = superharmonic_witness(make_family(Family::stable, 3, {{"alpha", 0.5}}), 1.0);
    o.detail << "stable 0.5: trivial=" << t.trivial;
    o.check(t.trivial, "trivial branch");
}

// Criterion 11
void determinism(Outcome& o) {
    const std::vector<std::pair<std::string, std::string>> configs = {
        {"exit time", with_n(kBrownianExit, "1e5")},
        {"hit probability", with_n(kBrownianHit, "1e5")},
        {"ret", sandwich_config("ret", "1e4")},
        {"pot", sandwich_config("pot", "1e4")},
        {"green", sandwich_config("green", "1e4")},
        {"sup", sup_config(50, "1e6", "1e5")}};
    for (const auto& [name, text] : configs) {
        const auto a = run_text(text, 1), b = run_text(text, 2), c = run_text(text, 3);
        bool same = a.tables.size() == b.tables.size() && a.tables.size() == c.tables.size();
        for (std::size_t i = 0; same && i < a.tables.size(); ++i)
            same = a.tables[i].to_csv() == b.tables[i].to_csv() && a.tables[i].to_csv() == c.tables[i].to_csv();
        o.detail << name << (same ? " identical; " : " DIFFERS; ");
        o.check(same, name);
    }
}

} // namespace

int main() {
    struct Criterion {
        int id;
        double limit_s;
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, 1.0, pruitt_closed_form},      {2, 120.0, brownian_oracles},       {3, 10.0, riesz_oracle},
        {4, 900.0, bound_sandwiches},    {5, 600.0, pruitt_estimate},        {6, 300.0, exit_probability_decrease},
        {7, 600.0, harnack_ratio_decrease}, {8, 600.0, averaged_kernels},    {9, 60.0, index_estimates},
        {10, 300.0, witness_search},       {11, 900.0, determinism}};
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "[error: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_s) o.check(false, "runtime limit");
        if (!o.pass) ++failed;
        std::printf("criterion %2d %s (%.1f s): %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
