#pragma once

namespace levypot {

// Surface area of the unit sphere in R^d.
double sphere_area(int d);
double ball_volume(int d, double r);
// Volume of the shell a <= |z| < b.
double shell_volume(int d, double a, double b);

// Fourier transform of the normalised surface measure on the unit sphere,
// j(u) = Gamma(d/2) (2/u)^{d/2-1} J_{d/2-1}(u); j(0) = 1.
double sphere_character(int d, double u);
// 1 - j(u), with the two-term series below u = 1e-2 to avoid cancellation.
double one_minus_sphere_character(int d, double u);
// k-th positive zero (k >= 1) of J_{d/2-1}, i.e. of sphere_character.
double sphere_character_zero(int d, int k);

// For u >= 30: j(u) = c cos u + s sin u with slowly varying c and s from the
// Hankel expansion.
struct CharacterSplit {
    double cos_coeff;
    double sin_coeff;
};
CharacterSplit sphere_character_split(int d, double u);

double bessel_j(double order, double x);

// Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)): density constant of the cosine of
// the angle between a fixed and a uniform direction, d >= 2.
double cosine_density_constant(int d);

// Fraction of the unit sphere in R^d where the first coordinate exceeds c.
double sphere_cap_fraction(int d, double c);

} // namespace levypot
