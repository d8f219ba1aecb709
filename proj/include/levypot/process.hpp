#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace levypot {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Family {
    brownian,
    stable,
    slow_decay,
    variance_gamma,
    two_uniform_cp,
    gauss_plus_uniform,
    log_kernel,
    tabulated,
};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);

// Radial Levy density nu(s), s = |z| > 0, non-increasing.
struct RadialProfile {
    std::function<double(double)> density;
    Family family = Family::brownian;
    double support_radius = kInf;   // nu(s) = 0 for s >= support_radius
    bool singular_at_zero = false;
    double total_mass = 0.0;        // integral of nu over R^d, may be +inf
    std::vector<double> breakpoints; // radii where nu is not smooth
    bool power_law_tail = false;     // nu(s) ~ c s^{-p} as s -> inf

    double operator()(double s) const {
        if (!density || s >= support_radius) return 0.0;
        return density(s);
    }
    bool vanishes() const { return !density; }
};

struct ProcessSpec {
    int d = 3;
    double sigma2 = 0.0;   // generator sigma2 * Laplacian, i.e. B_t has variance 2 sigma2 t per coordinate
    RadialProfile nu;
    std::string label;

    bool compound_poisson() const { return sigma2 == 0.0 && std::isfinite(nu.total_mass) && nu.total_mass > 0.0; }
};

using FamilyParams = std::map<std::string, double, std::less<>>;

// Parameters accepted for a family (besides d); used by the config layer.
std::vector<std::string> family_parameter_names(Family f);

// Builds and validates a named family. Throws ParamOutOfRange for bad or
// unknown parameters and ValidationFailed if the profile is not admissible.
ProcessSpec make_family(Family f, int d, const FamilyParams& params = {});

// Log-log interpolated profile through (s_i, nu_i), power-law continued
// beyond both ends; nu_i = 0 marks the end of the support.
ProcessSpec make_tabulated(int d, double sigma2, std::vector<double> s, std::vector<double> nu,
                           std::string label = "tabulated");

// The process seen at length scale r: nu_r(w) = r^d nu(r w), sigma2 / r^2.
// Pruitt functions satisfy K_r(s) = K(r s), L_r(s) = L(r s), and generators
// of f(x / r) agree, so scale-dependent questions can be asked at unit scale.
ProcessSpec rescaled(const ProcessSpec& spec, double r);

struct ValidationReport {
    bool monotone = true;
    double first_violation = 0.0;   // radius of the first increase, if any
    double integrability = 0.0;     // integral of min(|z|^2, 1) nu(z) dz
    double total_mass = 0.0;
    bool compound_poisson = false;
    bool ok() const { return monotone && std::isfinite(integrability); }
};

ValidationReport validate(const ProcessSpec& spec);

// Log-spaced validation grid over [1e-6, 1e6].
std::vector<double> validation_grid(std::size_t points = 1000);

} // namespace levypot
