#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levypot/process.hpp"

namespace levypot {

enum class Regime { zero, infinity };
std::string_view regime_name(Regime r);

// Log grid of `decades` decades with `points_per_decade` points. At infinity
// it starts at `edge`; at zero it ends at 1/edge.
struct IndexGrid {
    int decades = 6;
    int points_per_decade = 25;
    double edge = 1e2;

    std::vector<double> points(Regime regime) const;
};

struct IndexEstimate {
    Regime regime = Regime::infinity;
    double lower = 0.0;
    double upper = 0.0;
    double A = 0.0;    // A (r2/r1)^lower <= phi(r2)/phi(r1)
    double B = 0.0;    // phi(r2)/phi(r1) <= B (r2/r1)^upper
    double R0 = 0.0;   // grid edge the estimate refers to
    bool lower_unbounded = false;   // slopes run off to -inf
    bool upper_unbounded = false;   // slopes run off to +inf
};

// Lower/upper Matuszewska indices of phi estimated from the extreme slopes of
// log phi over all grid pairs at least a factor 2 apart.
IndexEstimate matuszewska_indices(const std::function<double(double)>& phi, Regime regime,
                                  const IndexGrid& grid = {});

struct ScalingCertificate {
    bool certified = false;
    double worst_ratio = 0.0;   // max of [nu(r1)/nu(r2)] / [M (r1/r2)^{-d-alpha}]
    double worst_r1 = 0.0;
    double worst_r2 = 0.0;
    double minimal_M = 0.0;     // smallest M that would certify
};

// Checks nu(r1)/nu(r2) <= M (r1/r2)^{-d-alpha} for 0 < r1 < r2 < 2 R_inf on a
// log grid (validation grid clipped at 2 R_inf).
ScalingCertificate certify_scaling(const ProcessSpec& spec, double M, double alpha, double R_inf = kInf,
                                   std::size_t points = 400);

enum class KaramataCase { a, b, c, d, global };

struct KaramataReport {
    double min_ratio = 0.0;   // of integral / (r^{-s} phi(r)) over the grid
    double max_ratio = 0.0;
    double constant = 0.0;    // C with C^{-1} <= ratio <= C
    bool bounded = false;
    std::vector<double> r;
    std::vector<double> ratio;
};

// Compares the weighted integral of t^{-s} phi(t) dt/t named by `which` with
// r^{-s} phi(r). R is the cut-off radius of cases (b) and (d) (and the edge
// of the regime for (a) and (c)). Throws DivergentIntegral when the integral
// does not exist.
KaramataReport karamata_check(const std::function<double(double)>& phi, double s, KaramataCase which, double R,
                              double window = 1e3, const IndexGrid& grid = {});

struct IndexRow {
    std::string quantity;   // psi, K, L, nu
    IndexEstimate estimate;
    bool defined = true;    // false when the function vanishes on the grid
};

struct RelationCheck {
    std::string name;
    bool applicable = false;
    bool holds = true;
    std::string detail;
};

struct ComparabilityCheck {
    std::string name;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double constant = 0.0;
    bool bounded = false;
};

struct IndexRelationsReport {
    std::vector<IndexRow> rows;
    std::vector<RelationCheck> relations;
    std::vector<ComparabilityCheck> comparabilities;
    bool all_hold() const;
};

// Indices of Psi, K, L and nu at zero and infinity plus the relations between
// them (Psi index at zero/infinity against L and K indices at infinity/zero).
IndexRelationsReport index_relations_report(const ProcessSpec& spec, double tol = 0.1,
                                            const IndexGrid& grid = {6, 25, 1e6}, double window = 1e2);

} // namespace levypot
