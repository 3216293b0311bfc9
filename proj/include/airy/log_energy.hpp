#pragma once

#include <cstddef>

#include "airy/measure.hpp"

namespace airy {

// Integral of log|x - y| over [t1 - a, t1 + a] x [t2 - a, t2 + a], a = inv_n,
// with 0 log 0 = 0. Coincident unit boxes give 4 log 2 - 6.
double box_log_integral(double t1, double t2, double inv_n);

// Integral of log|x - y| over [a1, b1] x [a2, b2].
double rect_log_integral(double a1, double b1, double a2, double b2);

// -integral log|x - y| dmu dmu for a measure without atoms.
double log_energy(const SignedMeasure& mu);

// (4/3) integral |x|^(3/2) 1{x <= 0} dmu.
double confinement(const SignedMeasure& mu);

struct RateValue {
  double value = 0.0;  // energy + confinement
  double energy = 0.0;
  double confinement = 0.0;
  double smoothing_radius = 0.0;  // half-width used for atoms, 0 when none
};

// Rate functional of a zero-mass admissible measure. Atoms are replaced by
// boxes of half-width `smoothing` (default: the smallest cell width of mu, or
// 0.01 without cells). Throws DomainError naming a violated constraint.
RateValue script_I(const SignedMeasure& mu, double smoothing = 0.0);

// xi(x) = -integral log|x - y| rho(y) dy + x^2/4 - 1/2 with the semicircle
// density rho(y) = sqrt(4 - y^2) / (2 pi); vanishes on [-2, 2].
double xi(double x);

// (n/k) xi(2 - (k/n)^(2/3) x), set to exactly 0 on [0, r_cut]. r_cut must not
// exceed 4 (n/k)^(2/3), the end of the interval where the potential vanishes.
double xi_tilde(double x, std::size_t n, std::size_t k, double r_cut = 0.0);

}  // namespace airy
