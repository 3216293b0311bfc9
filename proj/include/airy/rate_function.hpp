#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "airy/measure.hpp"

namespace airy {

// Discretized rate functional on uniform cells of width w covering
// [-S_eff, S_eff], S_eff >= S, with -R and R among the breaks.
struct EnergyProblem {
  std::vector<double> breaks;
  double cell_width = 0.0;
  double R = 0.0;
  double S = 0.0;  // S_eff
  std::size_t inner_first = 0;  // first cell inside [-R, R]
  std::size_t inner_count = 0;
  Eigen::MatrixXd kernel;       // integral of log|x - y| over cell i x cell j
  Eigen::VectorXd confinement;  // (4/3) integral over the cell of |x|^(3/2) 1{x <= 0}
  Eigen::VectorXd lower;        // -nu_0(cell): admissibility bound on cell masses

  std::size_t cells() const { return breaks.size() - 1; }
  // Energy and confinement of the measure with the given cell masses.
  double energy(const Eigen::VectorXd& masses) const;
  double confinement_of(const Eigen::VectorXd& masses) const;
  SignedMeasure measure(const Eigen::VectorXd& masses) const;
};

EnergyProblem build_energy_problem(double R, double S, std::size_t cells);

// Pairwise integrals of log|x - y| over the cells of an arbitrary break grid.
Eigen::MatrixXd log_kernel(std::span<const double> breaks);

struct RateSolution {
  double value = 0.0;  // energy + confinement of the returned feasible point
  double energy = 0.0;
  double confinement = 0.0;
  double kr_gap = 0.0;  // d_R(restricted minimizer, target) on the cell-edge grid
  double delta = 0.0;
  double R = 0.0;
  double S = 0.0;  // effective search half-width
  std::size_t cells = 0;
  int iterations = 0;
  bool converged = false;
  double anchor_weight = 0.0;  // share of the fallback point mixed in
  Eigen::VectorXd masses;
  SignedMeasure minimizer;
};

struct RateOptions {
  std::size_t cells = 512;
  int iters = 2000;
  double value_tol = 1e-4;
};

// Upper bound on I_R(target, delta): a feasible cell density mu' with
// mu' + nu_0 >= 0, mu'(R) = 0, d_R(mu'_R, target) <= delta, minimizing the
// rate functional. warm_start lists cell-mass vectors on the same grid whose
// feasible members compete with the solver output. Throws InfeasibleError
// with the best distance reached when no feasible point is found.
RateSolution minimize_I_R(const SignedMeasure& target, double delta, double R, double S,
                          const RateOptions& options = {},
                          std::span<const Eigen::VectorXd> warm_start = {});

struct RateLadder {
  std::vector<double> deltas;  // as given
  std::vector<RateSolution> solutions;
  // Linear extrapolation to delta = 0 through the two smallest deltas.
  // Heuristic: no convergence rate is known.
  double extrapolated = 0.0;
};

// Solves from the smallest delta up, each solution warm-starting the larger
// radii, so the values are nonincreasing in delta by construction of the
// nested feasible sets.
RateLadder rate_ladder(const SignedMeasure& target, std::span<const double> deltas, double R, double S,
                       const RateOptions& options = {});

}  // namespace airy
