#include "levypot/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "levypot/errors.hpp"

namespace levypot {

namespace {

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

using WorkspacePtr = std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter>;

// Integrals nest (a quadrature inside an integrand), so each thread keeps a
// stack of workspaces indexed by nesting depth instead of allocating per call.
struct WorkspaceLease {
    static thread_local std::vector<WorkspacePtr> pool;
    static thread_local std::size_t depth;
    gsl_integration_workspace* ws;

    explicit WorkspaceLease(std::size_t limit) {
        if (pool.size() <= depth) pool.emplace_back();
        auto& slot = pool[depth];
        if (!slot || slot->limit < limit) slot.reset(gsl_integration_workspace_alloc(limit));
        ws = slot.get();
        ++depth;
    }
    ~WorkspaceLease() { --depth; }
    WorkspaceLease(const WorkspaceLease&) = delete;
    WorkspaceLease& operator=(const WorkspaceLease&) = delete;
    gsl_integration_workspace* get() const { return ws; }
};

thread_local std::vector<WorkspacePtr> WorkspaceLease::pool;
thread_local std::size_t WorkspaceLease::depth = 0;

// GSL's default handler aborts the process; status codes are checked instead.
const bool kHandlerOff = [] {
    gsl_set_error_handler_off();
    return true;
}();

std::string fmt_g(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace

namespace detail {

QuadResult integrate_raw(RawIntegrand f, void* ctx, double a, double b, const QuadratureConfig& cfg) {
    (void)kHandlerOff;
    if (a == b) return {};
    if (a > b) {
        auto r = integrate_raw(f, ctx, b, a, cfg);
        r.value = -r.value;
        return r;
    }
    const std::size_t limit = std::max<std::size_t>(cfg.max_subdivisions, 16);
    WorkspaceLease ws(limit);
    gsl_function fn{f, ctx};
    double value = 0.0, err = 0.0;
    int status;
    if (std::isinf(a) && std::isinf(b))
        status = gsl_integration_qagi(&fn, cfg.abs_tol, cfg.rel_tol, limit, ws.get(), &value, &err);
    else if (std::isinf(b))
        status = gsl_integration_qagiu(&fn, a, cfg.abs_tol, cfg.rel_tol, limit, ws.get(), &value, &err);
    else if (std::isinf(a))
        status = gsl_integration_qagil(&fn, b, cfg.abs_tol, cfg.rel_tol, limit, ws.get(), &value, &err);
    else
        status = gsl_integration_qags(&fn, a, b, cfg.abs_tol, cfg.rel_tol, limit, ws.get(), &value, &err);

    if (!std::isfinite(value))
        throw NonConvergentQuadrature("integrand produced a non-finite value on [" + std::to_string(a) + ", " +
                                      std::to_string(b) + "]");
    if (status != GSL_SUCCESS) {
        // Roundoff and extrapolation complaints are common near machine
        // precision; accept them when the error estimate is still sane.
        const double slack = 1e3 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
        const bool tolerable = status == GSL_EROUND || status == GSL_ESING || status == GSL_EDIVERGE ||
                               status == GSL_EMAXITER;
        const bool roundoff_ok = status == GSL_EROUND && err <= 1e-6 * std::abs(value);
        const bool benign = tolerable && (err <= slack || err <= 1e-300 || roundoff_ok);
        if (!benign)
            throw NonConvergentQuadrature(std::string("adaptive quadrature failed (") + gsl_strerror(status) +
                                          ") on [" + fmt_g(a) + ", " + fmt_g(b) +
                                          "], estimate " + fmt_g(value) + " +- " + fmt_g(err));
    }
    return {value, err};
}

QuadResult integrate_oscillatory_raw(RawIntegrand f, void* ctx, double a, double b, double omega, bool sine,
                                     const QuadratureConfig& cfg) {
    (void)kHandlerOff;
    if (!(b > a) || !std::isfinite(b)) throw DomainError("oscillatory quadrature needs a finite interval a < b");
    const std::size_t limit = std::max<std::size_t>(cfg.max_subdivisions, 16);
    WorkspaceLease ws(limit);
    std::unique_ptr<gsl_integration_qawo_table, decltype(&gsl_integration_qawo_table_free)> table(
        gsl_integration_qawo_table_alloc(omega, b - a, sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 64),
        &gsl_integration_qawo_table_free);
    if (!table) throw NonConvergentQuadrature("cannot allocate oscillatory quadrature table");
    gsl_function fn{f, ctx};
    double value = 0.0, err = 0.0;
    const int status = gsl_integration_qawo(&fn, a, cfg.abs_tol, cfg.rel_tol, limit, ws.get(), table.get(), &value, &err);
    if (!std::isfinite(value)) throw NonConvergentQuadrature("oscillatory integrand produced a non-finite value");
    if (status != GSL_SUCCESS) {
        const double slack = 1e3 * std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
        if (!(err <= slack || err <= 1e-300 || (status == GSL_EROUND && err <= 1e-6 * std::abs(value))))
            throw NonConvergentQuadrature(std::string("oscillatory quadrature failed (") + gsl_strerror(status) +
                                          ") on [" + fmt_g(a) + ", " + fmt_g(b) + "]");
    }
    return {value, err};
}

void throw_divergent(double s) {
    throw DivergentIntegral("radial integrand is not integrable (checked near s = " + std::to_string(s) + ")");
}

} // namespace detail

std::vector<double> radial_nodes(double a, double b, std::span<const double> breaks) {
    std::vector<double> nodes{a, b};
    for (double x : breaks)
        if (x > a && x < b) nodes.push_back(x);
    if (1.0 > a && 1.0 < b) nodes.push_back(1.0);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double x, double y) { return std::isfinite(y) && std::abs(x - y) <= 1e-14 * std::abs(y); }),
                nodes.end());
    return nodes;
}

} // namespace levypot
