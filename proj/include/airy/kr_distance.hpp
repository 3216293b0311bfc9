#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "airy/measure.hpp"

namespace airy {

struct KrResult {
  double value = 0.0;
  std::vector<double> witness;  // f at the nodes -R + j h, j = 0..M
  double grid_step = 0.0;       // h = 2R / M, at most the requested step
  double R = 0.0;
};

// Uniform node grid on [-R, R] with M = ceil(2R / grid_step) intervals.
std::size_t kr_interval_count(double R, double grid_step);

// w_j = integral of the hat function at node j against mu (nodes as above).
std::vector<double> hat_weights(const SignedMeasure& mu, double R, std::size_t intervals);

// max sum_j w_j f_j over |f_j| <= 1, |f_{j+1} - f_j| <= h, solved exactly by
// dynamic programming over concave piecewise-linear value functions.
double bounded_lipschitz_lp(std::span<const double> w, double h, std::vector<double>* witness = nullptr);

// d_R(a, b) = sup over f with |f| <= 1 and Lipschitz constant <= 1 of
// integral f d(a - b), over piecewise-linear f on the grid. Exact when every
// atom and break lies on a node. Both measures must live in [-R, R].
KrResult kr_distance(const SignedMeasure& a, const SignedMeasure& b, double R, double grid_step);

}  // namespace airy
