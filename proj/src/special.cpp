#include "levypot/special.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levypot/errors.hpp"

namespace levypot {

double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d, double r) {
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0) * std::pow(r, d);
}

double shell_volume(int d, double a, double b) {
    return sphere_area(d) / d * (std::pow(b, d) - std::pow(a, d));
}

double bessel_j(double order, double x) {
    return boost::math::cyl_bessel_j(order, x);
}

double sphere_character(int d, double u) {
    u = std::abs(u);
    if (u < 1e-2) return 1.0 - one_minus_sphere_character(d, u);
    switch (d) {
    case 1: return std::cos(u);
    case 3: return std::sin(u) / u;
    default: {
        const double nu = 0.5 * d - 1.0;
        return std::tgamma(0.5 * d) * std::pow(2.0 / u, nu) * boost::math::cyl_bessel_j(nu, u);
    }
    }
}

double one_minus_sphere_character(int d, double u) {
    u = std::abs(u);
    if (u < 1e-2) {
        const double u2 = u * u;
        return u2 / (2.0 * d) - u2 * u2 / (8.0 * d * (d + 2.0));
    }
    if (d == 1) {
        const double s = std::sin(0.5 * u);
        return 2.0 * s * s;
    }
    return 1.0 - sphere_character(d, u);
}

double sphere_character_zero(int d, int k) {
    if (k < 1) throw DomainError("Bessel zero index must be positive");
    switch (d) {
    case 1: return (k - 0.5) * std::numbers::pi;
    case 3: return k * std::numbers::pi;
    default: return boost::math::cyl_bessel_j_zero(0.5 * d - 1.0, k);
    }
}

double cosine_density_constant(int d) {
    return std::exp(std::lgamma(0.5 * d) - std::lgamma(0.5 * (d - 1))) / std::sqrt(std::numbers::pi);
}

double sphere_cap_fraction(int d, double c) {
    if (d < 2) throw DomainError("sphere caps need d >= 2");
    if (c >= 1.0) return 0.0;
    if (c <= -1.0) return 1.0;
    if (c < 0.0) return 1.0 - sphere_cap_fraction(d, -c);
    return 0.5 * boost::math::ibeta(0.5 * (d - 1), 0.5, 1.0 - c * c);
}

CharacterSplit sphere_character_split(int d, double u) {
    if (!(u >= 30.0)) throw DomainError("sphere_character_split needs u >= 30");
    const double nu = 0.5 * d - 1.0;
    const double mu = 4.0 * nu * nu;
    // P and Q of the Hankel expansion; stop at machine precision or when the
    // asymptotic series starts to grow.
    double P = 1.0, Q = 0.0, term = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * u);
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        const double signed_term = (k / 2) % 2 == 0 ? term : -term;
        (k % 2 == 0 ? P : Q) += signed_term;
        if (std::abs(term) < 1e-17) break;
    }
    const double phase = (0.5 * nu + 0.25) * std::numbers::pi;
    const double amp = std::tgamma(0.5 * d) * std::pow(2.0 / u, nu) * std::sqrt(2.0 / (std::numbers::pi * u));
    return {amp * (P * std::cos(phase) + Q * std::sin(phase)), amp * (P * std::sin(phase) - Q * std::cos(phase))};
}

} // namespace levypot

