#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levypot/averaging.hpp"
#include "levypot/errors.hpp"
#include "levypot/indices.hpp"
#include "levypot/radial.hpp"
#include "levypot/special.hpp"

namespace levypot::cli {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string short_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string csv_field(const CellValue& v) {
    if (const double* x = std::get_if<double>(&v)) return format_number(*x);
    const std::string& s = std::get<std::string>(v);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

} // namespace

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_field(row[i]);
        out += '\n';
    }
    return out;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw DomainError("table " + file + " has no column " + name);
}

double Table::number(std::size_t row, const std::string& name) const {
    return std::get<double>(rows.at(row).at(column(name)));
}

const std::string& Table::text(std::size_t row, const std::string& name) const {
    return std::get<std::string>(rows.at(row).at(column(name)));
}

Table plot_table(std::string file, const std::vector<PlotPoint>& series) {
    Table t{std::move(file), {"x", "y", "yerr"}, {}};
    for (const auto& p : series)
        t.rows.push_back({p.x, p.y, std::isnan(p.yerr) ? CellValue{std::string()} : CellValue{p.yerr}});
    return t;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

} // namespace

void emit_plotdata(const std::string& path, const std::vector<PlotPoint>& series) {
    write_file(path, plot_table(path, series).to_csv());
}

const Table& RunResult::table(const std::string& file) const {
    for (const auto& t : tables)
        if (t.file == file) return t;
    throw DomainError("no table " + file);
}

double TaskParams::num(const std::string& key) const { return std::get<double>(values.at(key)); }
const std::vector<double>& TaskParams::list(const std::string& key) const {
    return std::get<std::vector<double>>(values.at(key));
}
const std::string& TaskParams::str(const std::string& key) const { return std::get<std::string>(values.at(key)); }
bool TaskParams::flag(const std::string& key) const { return std::get<bool>(values.at(key)); }

namespace {

enum class Kind { number, count, list, text, flag };

struct KeyDecl {
    std::string key;
    Kind kind;
    TaskValue fallback;
    std::vector<std::string> choices = {};
};

using Decls = std::vector<KeyDecl>;
using V = std::vector<double>;

const std::map<std::string, Decls>& task_keys() {
    static const std::map<std::string, Decls> keys = {
        {"pruitt", {{"r_min", Kind::number, 1e-2}, {"r_max", Kind::number, 1e2}, {"points", Kind::count, 41.0}}},
        {"psi", {{"rho_min", Kind::number, 1e-2}, {"rho_max", Kind::number, 1e2}, {"points", Kind::count, 41.0}}},
        {"potential", {{"x", Kind::list, V{0.5, 1.0, 2.0}}}},
        {"indices",
         {{"tol", Kind::number, 0.1},
          {"decades", Kind::count, 6.0},
          {"points_per_decade", Kind::count, 25.0},
          {"edge", Kind::number, 1e6},
          {"window", Kind::number, 1e2}}},
        {"certify-scaling",
         {{"M", Kind::number, 1.0},
          {"alpha", Kind::number, std::nan("")},
          {"R_inf", Kind::number, kInf},
          {"points", Kind::count, 400.0}}},
        {"simulate",
         {{"quantity", Kind::text, std::string("exit_time"), {"exit_time", "exit_prob"}},
          {"r", Kind::number, 1.0},
          {"x", Kind::list, V{0.0}},
          {"target", Kind::text, std::string("annulus"), {"annulus", "halfspace"}},
          {"target_a", Kind::number, 2.0},
          {"target_b", Kind::number, kInf},
          {"level", Kind::number, 2.0},
          {"estimator", Kind::text, std::string("intensity"), {"intensity", "indicator"}},
          {"table_points", Kind::count, 4001.0}}},
        {"hitball", {{"r", Kind::number, 1.0}, {"x", Kind::list, V{2.0}}}},
        {"green",
         {{"r", Kind::number, 1.0},
          {"x", Kind::list, V{0.0, 0.0, 0.0}},
          {"y", Kind::list, V{0.5, 0.0, 0.0}},
          {"inner", Kind::number, 0.01},
          {"outer", Kind::number, 0.4},
          {"bins", Kind::count, 8.0}}},
        {"halfspace",
         {{"x", Kind::list, V{0.0, 0.0, 1.0}},
          {"y", Kind::list, V{0.0, 1.0, 1.0}},
          {"inner", Kind::number, 0.01},
          {"outer", Kind::number, 0.5},
          {"bins", Kind::count, 8.0},
          {"box", Kind::number, 100.0}}},
        {"verify-bounds",
         {{"theorem", Kind::text, std::string("ret"), {"ret", "pot", "green", "sup"}},
          {"radii", Kind::list, V{1.0}},
          {"ratios", Kind::list, V{2.0, 4.0, 8.0}},
          {"points", Kind::list, V{0.5, 1.0, 2.0}},
          {"ball_factor", Kind::number, 20.0},
          {"shell", Kind::number, 0.05},
          {"ball_fraction", Kind::number, 0.25},
          {"c_budget", Kind::number, 1e3},
          {"slack", Kind::number, 3.0},
          {"q", Kind::number, 0.5},
          {"target_a", Kind::number, 2.0},
          {"target_b", Kind::number, 3.0},
          {"estimator", Kind::text, std::string("intensity"), {"intensity", "indicator"}},
          {"center_n", Kind::count, 0.0},
          {"shell_n", Kind::count, 0.0},
          {"table_points", Kind::count, 4001.0}}},
        {"bhi-const", {{"r", Kind::number, 0.5}, {"R", Kind::number, 1.0}}},
        {"avg-kernel",
         {{"q", Kind::number, 0.0},
          {"r", Kind::number, 1.0},
          {"n", Kind::count, 16.0},
          {"outer_cells", Kind::count, 48.0},
          {"outer_factor", Kind::number, 1e4},
          {"test", Kind::text, std::string("none"), {"none", "gaussian", "halfspace"}},
          {"test_n", Kind::count, 1e5}}},
        {"witness",
         {{"r", Kind::number, 1.0}, {"tolerance", Kind::number, 1e-6}, {"points_per_decade", Kind::count, 24.0}}},
    };
    return keys;
}

[[noreturn]] void bad_value(const SectionReader& rd, const std::string& key, const std::string& msg) {
    const Entry* e = rd.entry(key);
    throw ConfigParseError(msg, e ? e->line : rd.line(), e ? e->column : 1);
}

TaskParams read_task(SectionReader& rd, const std::string& command) {
    TaskParams p;
    for (const auto& k : task_keys().at(command)) {
        switch (k.kind) {
        case Kind::number:
            p.values[k.key] = rd.number(k.key, std::get<double>(k.fallback));
            break;
        case Kind::count: {
            const double v = static_cast<double>(rd.integer(k.key, static_cast<long long>(std::get<double>(k.fallback))));
            if (v < 0.0) bad_value(rd, k.key, "'" + k.key + "' must be non-negative");
            p.values[k.key] = v;
            break;
        }
        case Kind::list:
            p.values[k.key] = rd.numbers(k.key, std::get<V>(k.fallback));
            break;
        case Kind::text: {
            const std::string v = rd.text(k.key, std::get<std::string>(k.fallback));
            if (!k.choices.empty() && std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
                std::string all;
                for (const auto& c : k.choices) all += (all.empty() ? "" : ", ") + c;
                bad_value(rd, k.key, "'" + k.key + "' must be one of " + all);
            }
            p.values[k.key] = v;
            break;
        }
        case Kind::flag:
            p.values[k.key] = rd.flag(k.key, std::get<bool>(k.fallback));
            break;
        }
    }
    return p;
}

void require_positive(const SectionReader& rd, const TaskParams& p, const std::string& key) {
    if (!(p.num(key) > 0.0)) bad_value(rd, key, "'" + key + "' must be positive");
}

void require_all_positive(const SectionReader& rd, const TaskParams& p, const std::string& key) {
    if (p.list(key).empty()) bad_value(rd, key, "'" + key + "' must not be empty");
    for (double v : p.list(key))
        if (!(v > 0.0)) bad_value(rd, key, "'" + key + "' entries must be positive");
}

void require_point(const SectionReader& rd, const TaskParams& p, const std::string& key, int d) {
    if (static_cast<int>(p.list(key).size()) != d)
        bad_value(rd, key, "'" + key + "' needs " + std::to_string(d) + " coordinates");
}

// Cross-parameter checks that need no computation.
void check_task(const SectionReader& rd, const TaskParams& p, const std::string& command, int d) {
    if (command == "pruitt" || command == "psi") {
        const std::string lo = command == "pruitt" ? "r_min" : "rho_min", hi = command == "pruitt" ? "r_max" : "rho_max";
        require_positive(rd, p, lo);
        if (!(p.num(hi) >= p.num(lo))) bad_value(rd, hi, "'" + hi + "' must not be below '" + lo + "'");
        if (p.num("points") < 1.0) bad_value(rd, "points", "'points' must be at least 1");
    } else if (command == "potential") {
        require_all_positive(rd, p, "x");
    } else if (command == "certify-scaling") {
        if (std::isnan(p.num("alpha"))) throw ConfigParseError("[task] needs 'alpha' for certify-scaling", rd.line(), 1);
        require_positive(rd, p, "M");
    } else if (command == "simulate") {
        require_positive(rd, p, "r");
        for (double x : p.list("x"))
            if (!(std::abs(x) < p.num("r"))) bad_value(rd, "x", "start points must lie inside B_r");
        if (p.str("quantity") == "exit_prob") {
            if (p.str("target") == "annulus" &&
                !(p.num("target_a") >= p.num("r") && p.num("target_b") > p.num("target_a")))
                bad_value(rd, "target_a", "the target annulus must satisfy r <= target_a < target_b");
            if (p.str("target") == "halfspace" && !(p.num("level") > p.num("r")))
                bad_value(rd, "level", "the target half-space must lie beyond B_r");
            if (p.num("table_points") < 2.0) bad_value(rd, "table_points", "'table_points' must be at least 2");
        }
    } else if (command == "hitball") {
        require_positive(rd, p, "r");
        for (double x : p.list("x"))
            if (!(x > p.num("r"))) bad_value(rd, "x", "start points must lie outside the closed ball");
    } else if (command == "green" || command == "halfspace") {
        require_point(rd, p, "x", d);
        require_point(rd, p, "y", d);
        require_positive(rd, p, "inner");
        if (!(p.num("outer") > p.num("inner"))) bad_value(rd, "outer", "'outer' must exceed 'inner'");
        if (p.num("bins") < 1.0) bad_value(rd, "bins", "'bins' must be at least 1");
        if (command == "green") require_positive(rd, p, "r");
    } else if (command == "verify-bounds") {
        require_all_positive(rd, p, "radii");
        require_all_positive(rd, p, "ratios");
        require_all_positive(rd, p, "points");
        require_positive(rd, p, "c_budget");
        if (!(p.num("shell") > 0.0 && p.num("shell") < 0.5)) bad_value(rd, "shell", "'shell' must lie in (0, 0.5)");
        if (!(p.num("ball_fraction") > 0.0 && p.num("ball_fraction") < 1.0))
            bad_value(rd, "ball_fraction", "'ball_fraction' must lie in (0, 1)");
        if (p.str("theorem") == "ret")
            for (double v : p.list("ratios"))
                if (!(v > 1.0)) bad_value(rd, "ratios", "hitting geometries need |x| / r > 1");
        if (p.str("theorem") == "sup") {
            for (double r : p.list("radii")) {
                if (!(p.num("q") >= 0.0 && p.num("q") < r)) bad_value(rd, "q", "'q' must lie in [0, r)");
                if (!(p.num("target_a") >= r)) bad_value(rd, "target_a", "the target annulus must lie outside B_r");
            }
            if (!(p.num("target_b") > p.num("target_a") && std::isfinite(p.num("target_b"))))
                bad_value(rd, "target_b", "'target_b' must be finite and exceed 'target_a'");
        }
    } else if (command == "bhi-const") {
        require_positive(rd, p, "r");
        if (!(p.num("R") > p.num("r"))) bad_value(rd, "R", "'R' must exceed 'r'");
    } else if (command == "avg-kernel") {
        require_positive(rd, p, "r");
        if (!(p.num("q") >= 0.0 && p.num("q") < p.num("r"))) bad_value(rd, "q", "'q' must lie in [0, r)");
        if (p.num("n") < 1.0) bad_value(rd, "n", "'n' must be at least 1");
        if (p.num("outer_cells") < 1.0) bad_value(rd, "outer_cells", "'outer_cells' must be at least 1");
        if (!(p.num("outer_factor") > 1.0)) bad_value(rd, "outer_factor", "'outer_factor' must exceed 1");
    } else if (command == "witness") {
        require_positive(rd, p, "r");
        require_positive(rd, p, "tolerance");
    }
}

ProcessSpec read_tabulated(const SectionReader& rd, int d, double sigma2, const std::string& path) {
    std::ifstream in(path);
    if (!in) bad_value(rd, "table", "cannot read table " + path);
    std::vector<double> s, nu;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        try {
            if (comma == std::string::npos) throw std::invalid_argument("");
            const double a = std::stod(line.substr(0, comma)), b = std::stod(line.substr(comma + 1));
            s.push_back(a);
            nu.push_back(b);
        } catch (const std::exception&) {
            if (line_no == 1) continue;   // header
            bad_value(rd, "table", path + ":" + std::to_string(line_no) + ": expected s,nu");
        }
    }
    return make_tabulated(d, sigma2, std::move(s), std::move(nu), "tabulated:" + path);
}

ProcessSpec read_spec(const ConfigFile& file) {
    const Section* sec = file.find("spec");
    if (!sec) throw ConfigParseError("missing [spec] section", 1, 1);
    SectionReader rd(sec, "spec");
    const std::string family_name = rd.text("family");
    Family family;
    try {
        family = family_from_name(family_name);
    } catch (const Error& e) {
        bad_value(rd, "family", e.what());
    }
    const long long d = rd.integer("d", 3);
    if (d < 1 || d > kMaxDim) bad_value(rd, "d", "'d' is out of range");
    ProcessSpec spec;
    try {
        if (family == Family::tabulated) {
            const double sigma2 = rd.number("sigma2", 0.0);
            const std::string path = rd.text("table");
            rd.finish();
            spec = read_tabulated(rd, static_cast<int>(d), sigma2, path);
        } else {
            FamilyParams params;
            for (const auto& name : family_parameter_names(family))
                if (rd.has(name)) params[name] = rd.number(name, 0.0);
            rd.finish();
            spec = make_family(family, static_cast<int>(d), params);
        }
    } catch (const ConfigParseError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigParseError(std::string("[spec] ") + e.what(), sec->line, 1);
    }
    return spec;
}

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : task_keys()) n.push_back(k);
        return n;
    }();
    return names;
}

RunConfig build_config(const ConfigFile& file, const std::string& command, const Overrides& over) {
    static const std::vector<std::string> known = {"spec", "task", "mc", "quadrature", "run"};
    for (const auto& s : file.sections())
        if (std::find(known.begin(), known.end(), s.name) == known.end())
            throw ConfigParseError("unknown section [" + s.name + "]", s.line, 1);

    RunConfig cfg;
    SectionReader task(file.find("task"), "task");
    cfg.command = task.text("command", command);
    if (!command.empty() && cfg.command != command) {
        const Entry* e = task.entry("command");
        throw ConfigParseError("config is for '" + cfg.command + "', not '" + command + "'", e->line, e->column);
    }
    if (cfg.command.empty()) throw ConfigParseError("no command given on the command line or in [task]", 1, 1);
    if (!task_keys().contains(cfg.command)) {
        const Entry* e = task.entry("command");
        throw ConfigParseError("unknown command '" + cfg.command + "'", e ? e->line : 1, e ? e->column : 1);
    }
    if (over.theorem) {
        if (cfg.command != "verify-bounds") throw ConfigParseError("--theorem applies to verify-bounds only", 1, 1);
    }

    cfg.spec = read_spec(file);

    SectionReader mc(file.find("mc"), "mc");
    const long long n = mc.integer("n", 100000);
    if (n < 1) bad_value(mc, "n", "'n' must be at least 1");
    cfg.runs.n = static_cast<std::uint64_t>(n);
    SimScheme& sc = cfg.scheme;
    sc.epsilon = mc.number("epsilon", sc.epsilon);
    sc.dt = mc.number("dt", sc.dt);
    sc.dt_min = mc.number("dt_min", sc.dt_min);
    sc.horizon = mc.number("horizon", sc.horizon);
    sc.outer_kill_radius = mc.number("outer_kill_radius", sc.outer_kill_radius);
    sc.bridge_correction = mc.flag("bridge_correction", sc.bridge_correction);
    sc.cutoff_fraction = mc.number("cutoff_fraction", sc.cutoff_fraction);
    sc.step_resolution = mc.number("step_resolution", sc.step_resolution);
    const long long max_events = mc.integer("max_events", static_cast<long long>(sc.max_events));
    if (max_events < 1) bad_value(mc, "max_events", "'max_events' must be at least 1");
    sc.max_events = static_cast<std::uint64_t>(max_events);
    for (const char* key : {"epsilon", "dt", "dt_min", "horizon", "cutoff_fraction", "step_resolution"})
        if (mc.has(key) && !(mc.number(key, 1.0) > 0.0)) bad_value(mc, key, std::string("'") + key + "' must be positive");
    mc.finish();

    SectionReader quad(file.find("quadrature"), "quadrature");
    if (file.find("quadrature")) {
        QuadratureConfig q = kRadialQuad;
        q.rel_tol = quad.number("rel_tol", q.rel_tol);
        q.abs_tol = quad.number("abs_tol", q.abs_tol);
        const long long subdiv = quad.integer("max_subdivisions", static_cast<long long>(q.max_subdivisions));
        if (!(q.rel_tol > 0.0 || q.abs_tol > 0.0)) bad_value(quad, "rel_tol", "a positive tolerance is required");
        if (subdiv < 1) bad_value(quad, "max_subdivisions", "'max_subdivisions' must be at least 1");
        q.max_subdivisions = static_cast<std::size_t>(subdiv);
        cfg.quad = q;
    }
    quad.finish();

    SectionReader run(file.find("run"), "run");
    const long long seed = run.integer("seed", 1);
    const long long threads = run.integer("threads", 1);
    if (seed < 0) bad_value(run, "seed", "'seed' must be non-negative");
    if (threads < 1) bad_value(run, "threads", "'threads' must be at least 1");
    cfg.out_dir = run.text("out", ".");
    run.finish();
    cfg.runs.seed = over.seed.value_or(static_cast<std::uint64_t>(seed));
    cfg.runs.threads = over.threads.value_or(static_cast<int>(threads));
    if (cfg.runs.threads < 1) throw ConfigParseError("--threads must be at least 1", 1, 1);
    if (over.out) cfg.out_dir = *over.out;

    cfg.task = read_task(task, cfg.command);
    if (over.theorem) {
        const auto& choices = task_keys().at("verify-bounds")[0].choices;
        if (std::find(choices.begin(), choices.end(), *over.theorem) == choices.end())
            throw ConfigParseError("unknown theorem '" + *over.theorem + "'", 1, 1);
        cfg.task.values["theorem"] = *over.theorem;
    }
    task.finish();
    check_task(task, cfg.task, cfg.command, cfg.spec.d);
    return cfg;
}

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g;
    if (points == 1 || lo == hi) return {lo};
    for (int i = 0; i < points; ++i) g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    g.back() = hi;
    return g;
}

Point to_point(const std::vector<double>& v) {
    Point p;
    for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<int>(i)] = v[i];
    return p;
}

std::string point_text(const Point& p, int d) {
    std::string s = "(";
    for (int i = 0; i < d; ++i) s += (i ? " " : "") + short_number(p[i]);
    return s + ")";
}

RunOptions stream(const RunConfig& cfg, int block, std::uint64_t n = 0) {
    // Separate estimates use disjoint path indices of the same seed.
    RunOptions o = cfg.runs;
    if (n > 0) o.n = n;
    o.first_path = static_cast<std::uint64_t>(block) << 40;
    return o;
}

QuadratureConfig quad_or(const RunConfig& cfg, const QuadratureConfig& fallback) { return cfg.quad.value_or(fallback); }

// Linear interpolation table of a scalar function on [lo, hi].
struct Tabulated {
    double lo = 0.0, step = 1.0;
    std::vector<double> v;
    double operator()(double t) const {
        const double pos = std::clamp((t - lo) / step, 0.0, static_cast<double>(v.size() - 1));
        const std::size_t i = std::min(static_cast<std::size_t>(pos), v.size() - 2);
        const double w = pos - static_cast<double>(i);
        return v[i] * (1.0 - w) + v[i + 1] * w;
    }
};

template <class F>
Tabulated tabulate(F&& f, double lo, double hi, int points) {
    Tabulated t;
    t.lo = lo;
    t.step = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) t.v.push_back(f(lo + t.step * i));
    return t;
}

// Exit-position target of a ball domain and the matching estimator.
struct ExitTarget {
    std::function<double(const Point&)> indicator;
    std::function<double(const Point&)> intensity;
};

ExitTarget exit_target(const RunConfig& cfg, double r, const std::string& kind, double a, double b, double level,
                       int points) {
    const ProcessSpec& spec = cfg.spec;
    const int d = spec.d;
    const QuadratureConfig q = quad_or(cfg, kRadialQuad);
    ExitTarget t;
    if (kind == "annulus") {
        t.indicator = [=](const Point& z) {
            const double s = norm(z, d);
            return s >= a && s < b ? 1.0 : 0.0;
        };
        // Start points never reach |y| = r, so the table stops just short of it.
        const double top = r * (1.0 - 1e-12);
        auto table = std::make_shared<Tabulated>(
            tabulate([&](double s) { return annulus_jump_rate(spec, s, a, b, q); }, 0.0, top, points));
        t.intensity = [=](const Point& y) { return (*table)(norm(y, d)); };
    } else {
        t.indicator = [=](const Point& z) { return z[d - 1] > level ? 1.0 : 0.0; };
        auto table = std::make_shared<Tabulated>(
            tabulate([&](double yd) { return halfspace_jump_rate(spec, level - yd, q); }, -r, r, points));
        t.intensity = [=](const Point& y) { return (*table)(y[d - 1]); };
    }
    return t;
}

Estimate from_bin(const Histogram& h, std::size_t bin, const Estimate& like) {
    Estimate e = like;
    e.mean = h.density[bin];
    e.stderr_ = h.stderr_[bin];
    return e;
}

const std::vector<std::string> kVerifyHeader = {"theorem", "spec",   "geometry", "lower",  "estimate",
                                                "stderr",  "upper",  "c_lower",  "c_upper", "status"};

void add_report(RunResult& res, Table& table, SandwichReport rep) {
    table.rows.push_back({rep.theorem, rep.spec, rep.geometry, rep.lower, rep.estimate.mean, rep.estimate.stderr_,
                          rep.upper, rep.c_lower, rep.c_upper, rep.status});
    res.reports.push_back(std::move(rep));
}

// The five Green geometries, in units of r.
std::vector<std::pair<Point, Point>> green_geometries(int d) {
    auto pt = [d](double a, double b, double c) {
        Point p;
        p[0] = a;
        if (d > 1) p[1] = b;
        if (d > 2) p[2] = c;
        return p;
    };
    return {{pt(0, 0, 0), pt(0.5, 0, 0)},
            {pt(0, 0, 0), pt(0, 0, 0.8)},
            {pt(0.5, 0, 0), pt(-0.5, 0, 0)},
            {pt(0.3, 0, 0), pt(0, 0.3, 0)},
            {pt(0.6, 0, 0), pt(0.7, 0.2, 0)}};
}

void verify_bounds(const RunConfig& cfg, RunResult& res) {
    const auto& p = cfg.task;
    const ProcessSpec& spec = cfg.spec;
    const int d = spec.d;
    const std::string theorem = p.str("theorem");
    const double budget = p.num("c_budget"), slack = p.num("slack");
    Table table{"verify.csv", kVerifyHeader, {}};
    int block = 0;
    if (theorem == "ret") {
        for (double r : p.list("radii"))
            for (double ratio : p.list("ratios")) {
                const auto est = hit_ball_prob(spec, cfg.scheme, r, axis_point(d, ratio * r), stream(cfg, block++));
                add_report(res, table,
                           sandwich("ret", spec.label, "r=" + short_number(r) + " |x|/r=" + short_number(ratio),
                                    ret_bounds(spec, r, ratio * r), est, budget, slack));
            }
    } else if (theorem == "pot") {
        auto pts = p.list("points");
        std::sort(pts.begin(), pts.end());
        const double w = p.num("shell");
        for (double r : p.list("radii")) {
            const double big = p.num("ball_factor") * pts.back() * r;
            ShellBins bins{Point{}, {0.0}};
            for (double x : pts) {
                if (x * r * (1.0 - w) <= bins.edges.back()) throw DomainError("pot shells overlap; space the points further apart");
                bins.edges.push_back(x * r * (1.0 - w));
                bins.edges.push_back(x * r * (1.0 + w));
            }
            const auto hist = green_ball(spec, cfg.scheme, big, Point{}, bins, stream(cfg, block++));
            for (std::size_t k = 0; k < pts.size(); ++k) {
                const double x = pts[k] * r;
                add_report(res, table,
                           sandwich("pot", spec.label,
                                    "|x|=" + short_number(x) + " ball=" + short_number(big) + " shell=" + short_number(w),
                                    pot_bounds(spec, x), from_bin(hist, 2 * k + 1, hist.total), budget, slack));
            }
        }
    } else if (theorem == "green") {
        for (double r : p.list("radii"))
            for (const auto& [xu, yu] : green_geometries(d)) {
                Point x, y;
                for (int i = 0; i < d; ++i) {
                    x[i] = xu[i] * r;
                    y[i] = yu[i] * r;
                }
                const double rho = p.num("ball_fraction") * std::min(distance(x, y, d), r - norm(y, d));
                const auto hist = green_ball(spec, cfg.scheme, r, x, ShellBins{y, {0.0, rho}}, stream(cfg, block++));
                add_report(res, table,
                           sandwich("green", spec.label,
                                    "r=" + short_number(r) + " x=" + point_text(x, d) + " y=" + point_text(y, d) +
                                        " ball=" + short_number(rho),
                                    green_ball_bounds(spec, r, x, y), from_bin(hist, 0, hist.total), budget, slack));
            }
    } else {
        Table terms{"sup_terms.csv",
                    {"r", "q", "f0", "f0_stderr", "local_integral", "local_stderr", "nonlocal_integral", "upper_coeff",
                     "lower_coeff", "local_ratio", "local_ratio_stderr"},
                    {}};
        const double q = p.num("q"), a = p.num("target_a"), b = p.num("target_b");
        const bool intensity = p.str("estimator") == "intensity";
        for (double r : p.list("radii")) {
            const BallDomain ball(d, Point{}, r);
            const auto target = exit_target(cfg, r, "annulus", a, b, 0.0, static_cast<int>(p.num("table_points")));
            const auto n_center = static_cast<std::uint64_t>(p.num("center_n"));
            const auto n_shell = static_cast<std::uint64_t>(p.num("shell_n"));
            const Estimate f0 =
                intensity ? occupation_integral(spec, cfg.scheme, ball, target.intensity, Point{}, stream(cfg, block++, n_center))
                          : harmonic_eval(spec, cfg.scheme, ball, target.indicator, Point{}, stream(cfg, block++, n_center));
            const Estimate avg = shell_average(spec, cfg.scheme, ball, intensity ? target.intensity : target.indicator,
                                               intensity ? PathFunctional::occupation : PathFunctional::exit_value,
                                               Point{}, q, r, stream(cfg, block++, n_shell));
            const double vol = shell_volume(d, q, r);
            const double local = vol * avg.mean, local_se = vol * avg.stderr_;
            const double nonlocal = shell_volume(d, a, b);
            const auto coeff = sup_bounds(spec, r, q);
            const BoundPair bounds{coeff.lower_coeff * local, coeff.upper_coeff * (local + nonlocal)};
            add_report(res, table,
                       sandwich("sup", spec.label,
                                "r=" + short_number(r) + " q=" + short_number(q) + " target=[" + short_number(a) + " " +
                                    short_number(b) + ")",
                                bounds, f0, budget, slack));
            const double ratio = f0.mean / (coeff.upper_coeff * local);
            const double ratio_se = std::abs(ratio) * std::hypot(f0.stderr_ / f0.mean, local_se / local);
            terms.rows.push_back({r, q, f0.mean, f0.stderr_, local, local_se, nonlocal, coeff.upper_coeff,
                                  coeff.lower_coeff, ratio, ratio_se});
        }
        res.tables.push_back(std::move(terms));
    }
    int violated = 0;
    double worst = 1.0;
    for (const auto& r : res.reports) {
        if (r.status == "violated") ++violated;
        worst = std::max(worst, r.implied_c);
    }
    res.tables.insert(res.tables.begin(), std::move(table));
    res.summary = "verify-bounds " + theorem + " on " + spec.label + ": " + std::to_string(res.reports.size()) +
                  " rows, implied c " + short_number(worst) + ", " + std::to_string(violated) + " violated";
    if (violated > 0) res.exit_code = 2;
}

Table histogram_table(const std::string& file, const Histogram& h) {
    Table t{file, {"lo", "hi", "density", "stderr"}, {}};
    for (std::size_t i = 0; i < h.density.size(); ++i) t.rows.push_back({h.edges[i], h.edges[i + 1], h.density[i], h.stderr_[i]});
    return t;
}

std::vector<PlotPoint> histogram_points(const Histogram& h) {
    std::vector<PlotPoint> pts;
    for (std::size_t i = 0; i < h.density.size(); ++i)
        pts.push_back({0.5 * (h.edges[i] + h.edges[i + 1]), h.density[i], h.stderr_[i]});
    return pts;
}

} // namespace

RunResult execute(const RunConfig& cfg) {
    RunResult res;
    const auto& p = cfg.task;
    const ProcessSpec& spec = cfg.spec;
    const int d = spec.d;
    const std::string& cmd = cfg.command;

    if (cmd == "pruitt") {
        Table t{"pruitt.csv", {"r", "K", "L", "sum", "h"}, {}};
        for (double r : log_grid(p.num("r_min"), p.num("r_max"), static_cast<int>(p.num("points")))) {
            const auto v = pruitt(spec, r, quad_or(cfg, kRadialQuad));
            t.rows.push_back({r, v.K, v.L, v.sum, v.h});
        }
        res.summary = "pruitt on " + spec.label + ": " + std::to_string(t.rows.size()) + " radii";
        res.tables.push_back(std::move(t));
    } else if (cmd == "psi") {
        Table t{"psi.csv", {"rho", "psi"}, {}};
        for (double rho : log_grid(p.num("rho_min"), p.num("rho_max"), static_cast<int>(p.num("points"))))
            t.rows.push_back({rho, psi(spec, rho, quad_or(cfg, kRadialQuad))});
        res.summary = "psi on " + spec.label + ": " + std::to_string(t.rows.size()) + " frequencies";
        res.tables.push_back(std::move(t));
    } else if (cmd == "potential") {
        Table t{"potential.csv", {"x", "U", "error"}, {}};
        for (double x : p.list("x")) {
            const auto u = cfg.quad ? potential_kernel_fourier(spec, x, *cfg.quad) : potential_kernel_fourier(spec, x);
            t.rows.push_back({x, u.value, u.error});
        }
        res.summary = "potential on " + spec.label + ": " + std::to_string(t.rows.size()) + " points";
        res.tables.push_back(std::move(t));
    } else if (cmd == "indices") {
        IndexGrid grid{static_cast<int>(p.num("decades")), static_cast<int>(p.num("points_per_decade")), p.num("edge")};
        const auto rep = index_relations_report(spec, p.num("tol"), grid, p.num("window"));
        Table t{"indices.csv", {"quantity", "regime", "lower", "upper", "A", "B", "R0"}, {}};
        for (const auto& row : rep.rows) {
            const auto& e = row.estimate;
            const double nan = std::nan("");
            t.rows.push_back({row.quantity, std::string(regime_name(e.regime)), row.defined ? e.lower : nan,
                              row.defined ? e.upper : nan, row.defined ? e.A : nan, row.defined ? e.B : nan, e.R0});
        }
        Table rel{"relations.csv", {"name", "applicable", "holds", "detail"}, {}};
        for (const auto& r : rep.relations)
            rel.rows.push_back({r.name, std::string(r.applicable ? "yes" : "no"), std::string(r.holds ? "yes" : "no"), r.detail});
        Table cmp{"comparability.csv", {"name", "min_ratio", "max_ratio", "constant", "bounded"}, {}};
        for (const auto& c : rep.comparabilities)
            cmp.rows.push_back({c.name, c.min_ratio, c.max_ratio, c.constant, std::string(c.bounded ? "yes" : "no")});
        res.summary = "indices on " + spec.label + ": relations " + (rep.all_hold() ? "hold" : "fail");
        res.tables.push_back(std::move(t));
        res.tables.push_back(std::move(rel));
        res.tables.push_back(std::move(cmp));
    } else if (cmd == "certify-scaling") {
        const auto c = certify_scaling(spec, p.num("M"), p.num("alpha"), p.num("R_inf"), static_cast<std::size_t>(p.num("points")));
        Table t{"scaling.csv",
                {"M", "alpha", "R_inf", "certified", "worst_ratio", "worst_r1", "worst_r2", "minimal_M"},
                {{p.num("M"), p.num("alpha"), p.num("R_inf"), std::string(c.certified ? "yes" : "no"), c.worst_ratio,
                  c.worst_r1, c.worst_r2, c.minimal_M}}};
        res.summary = "certify-scaling on " + spec.label + ": " + (c.certified ? "certified" : "not certified") +
                      ", minimal M " + short_number(c.minimal_M);
        res.tables.push_back(std::move(t));
    } else if (cmd == "simulate") {
        const double r = p.num("r");
        const BallDomain ball(d, Point{}, r);
        Table t{"simulate.csv", {"quantity", "r", "x", "mean", "stderr", "n", "censored_fraction"}, {}};
        std::vector<PlotPoint> plot;
        std::optional<ExitTarget> target;
        if (p.str("quantity") == "exit_prob")
            target = exit_target(cfg, r, p.str("target"), p.num("target_a"), p.num("target_b"), p.num("level"),
                                 static_cast<int>(p.num("table_points")));
        int block = 0;
        for (double x : p.list("x")) {
            const Point x0 = axis_point(d, x);
            Estimate e;
            if (!target)
                e = exit_time_ball(spec, cfg.scheme, r, x0, stream(cfg, block++));
            else if (p.str("estimator") == "intensity")
                e = occupation_integral(spec, cfg.scheme, ball, target->intensity, x0, stream(cfg, block++));
            else
                e = harmonic_eval(spec, cfg.scheme, ball, target->indicator, x0, stream(cfg, block++));
            t.rows.push_back({p.str("quantity"), r, x, e.mean, e.stderr_, static_cast<double>(e.n), e.censored_fraction});
            plot.push_back({x, e.mean, e.stderr_});
        }
        res.summary = "simulate " + p.str("quantity") + " on " + spec.label + ": " + std::to_string(t.rows.size()) + " start points";
        res.tables.push_back(std::move(t));
        res.tables.push_back(plot_table("simulate_plot.csv", plot));
    } else if (cmd == "hitball") {
        const double r = p.num("r");
        Table t{"hitball.csv", {"r", "x", "mean", "stderr", "n", "censored_fraction", "bias_bound"}, {}};
        std::vector<PlotPoint> plot;
        int block = 0;
        for (double x : p.list("x")) {
            const auto e = hit_ball_prob(spec, cfg.scheme, r, axis_point(d, x), stream(cfg, block++));
            t.rows.push_back({r, x, e.mean, e.stderr_, static_cast<double>(e.n), e.censored_fraction, e.bias_bound});
            plot.push_back({x, e.mean, e.stderr_});
        }
        res.summary = "hitball on " + spec.label + ": " + std::to_string(t.rows.size()) + " start points";
        res.tables.push_back(std::move(t));
        res.tables.push_back(plot_table("hitball_plot.csv", plot));
    } else if (cmd == "green") {
        const Point x = to_point(p.list("x")), y = to_point(p.list("y"));
        const auto bins = log_shells(y, p.num("inner"), p.num("outer"), static_cast<int>(p.num("bins")));
        const auto h = green_ball(spec, cfg.scheme, p.num("r"), x, bins, stream(cfg, 0));
        res.summary = "green on " + spec.label + ": occupation total " + short_number(h.total.mean);
        res.tables.push_back(histogram_table("green.csv", h));
        res.tables.push_back(plot_table("green_plot.csv", histogram_points(h)));
    } else if (cmd == "halfspace") {
        const Point x = to_point(p.list("x")), y = to_point(p.list("y"));
        const auto bins = log_shells(y, p.num("inner"), p.num("outer"), static_cast<int>(p.num("bins")));
        const auto h = green_halfspace(spec, cfg.scheme, x, bins, p.num("box"), stream(cfg, 0));
        const double bound = halfspace_estimate(spec, x, y);
        res.summary = "halfspace on " + spec.label + ": bound expression " + short_number(bound);
        res.tables.push_back(histogram_table("halfspace.csv", h));
        res.tables.push_back(Table{"halfspace_bound.csv", {"x_height", "y_height", "distance", "bound"},
                                   {{x[d - 1], y[d - 1], distance(x, y, d), bound}}});
        res.tables.push_back(plot_table("halfspace_plot.csv", histogram_points(h)));
    } else if (cmd == "verify-bounds") {
        verify_bounds(cfg, res);
    } else if (cmd == "bhi-const") {
        const auto c = bhi_constants(spec, p.num("r"), p.num("R"));
        res.tables.push_back(Table{"bhi.csv",
                                   {"r", "R", "C_levy", "C_levy_tilde", "rho_bound", "C_green", "C_exit", "C_BHI"},
                                   {{p.num("r"), p.num("R"), c.C_levy, c.C_levy_tilde, c.rho_bound, c.C_green, c.C_exit, c.C_BHI}}});
        res.summary = "bhi-const on " + spec.label + ": C_BHI " + short_number(c.C_BHI);
    } else if (cmd == "avg-kernel") {
        RegularizationOptions opt;
        opt.n = static_cast<int>(p.num("n"));
        opt.outer_cells = static_cast<int>(p.num("outer_cells"));
        opt.outer_factor = p.num("outer_factor");
        opt.scheme = cfg.scheme;
        opt.runs = stream(cfg, 0);
        const auto k = regularization_kernel(spec, p.num("q"), p.num("r"), opt);
        Table prof{"avg_kernel.csv", {"s", "pi_bar"}, {}};
        const auto& cells = k.averaged.cells;
        for (std::size_t j = 0; j + 1 < cells.size(); ++j)
            prof.rows.push_back({0.5 * (cells[j] + cells[j + 1]),
                                 k.averaged.mass(cells[j], cells[j + 1]) / (cells[j + 1] - cells[j])});
        const auto& oe = k.outer_edges;
        for (std::size_t c = 0; c + 1 < oe.size(); ++c)
            prof.rows.push_back({std::sqrt(oe[c] * oe[c + 1]), k.averaged.mass(oe[c], oe[c + 1]) / (oe[c + 1] - oe[c])});
        Table w{"avg_weights.csv", {"j", "alpha_j"}, {}};
        for (std::size_t j = 0; j < k.averaged.alpha.size(); ++j) w.rows.push_back({static_cast<double>(j), k.averaged.alpha[j]});
        Table s{"avg_summary.csv",
                {"q", "r", "n", "C_reg", "creg_lower", "creg_upper", "implied_c", "residual", "outside_mass",
                 "outside_stderr", "test", "averaged", "averaged_stderr", "direct", "direct_stderr", "difference",
                 "combined_stderr"},
                {}};
        std::vector<CellValue> row{p.num("q"), p.num("r"), p.num("n"), k.C_reg, k.window.creg_lower,
                                   k.window.creg_upper, k.implied_c, k.averaged.residual, k.outside_mass,
                                   k.outside_stderr, p.str("test")};
        res.summary = "avg-kernel on " + spec.label + ": C_reg " + short_number(k.C_reg) + ", implied c " + short_number(k.implied_c);
        if (p.str("test") != "none") {
            std::function<double(const Point&)> f;
            if (p.str("test") == "gaussian")
                f = [d](const Point& z) { return std::exp(-norm(z, d) * norm(z, d)); };
            else
                f = [](const Point& z) { return z[0] > 0.0 ? 1.0 : 0.0; };
            const auto mv = mean_value_test(spec, k, f, cfg.scheme, stream(cfg, 1, static_cast<std::uint64_t>(p.num("test_n"))));
            for (double v : {mv.averaged.mean, mv.averaged.stderr_, mv.direct.mean, mv.direct.stderr_, mv.difference, mv.combined_stderr})
                row.push_back(v);
            res.summary += ", mean-value difference " + short_number(mv.difference) + " +- " + short_number(mv.combined_stderr);
        } else {
            for (int i = 0; i < 6; ++i) row.push_back(std::nan(""));
        }
        s.rows.push_back(std::move(row));
        res.tables.push_back(std::move(prof));
        res.tables.push_back(std::move(w));
        res.tables.push_back(std::move(s));
    } else if (cmd == "witness") {
        WitnessOptions opt;
        opt.tolerance = p.num("tolerance");
        opt.points_per_decade = static_cast<int>(p.num("points_per_decade"));
        const double r = p.num("r");
        const auto w = superharmonic_witness(spec, r, opt);
        Table g{"witness.csv", {"radius", "generator"}, {}};
        for (std::size_t i = 0; i < w.radii.size(); ++i) g.rows.push_back({w.radii[i], w.generator[i]});
        Table s{"witness_summary.csv", {"r", "K", "L", "trivial", "found", "a", "b", "R", "max_generator", "scale"},
                {{r, w.K, w.L, std::string(w.trivial ? "yes" : "no"), std::string(w.found ? "yes" : "no"), w.a, w.b,
                  w.R, w.max_generator, w.scale}}};
        res.summary = "witness on " + spec.label + ": " +
                      (w.trivial ? std::string("trivial case, a L <= 5^d K on the whole a grid")
                                 : w.found ? "found a=" + short_number(w.a) + " b=" + short_number(w.b)
                                           : "no witness on the grid, best max A f " + short_number(w.max_generator));
        res.tables.push_back(std::move(g));
        res.tables.push_back(std::move(s));
    }
    return res;
}

void write_tables(const RunResult& result, const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
    for (const auto& t : result.tables) write_file(std::filesystem::path(out_dir) / t.file, t.to_csv());
}

} // namespace levypot::cli
