#pragma once

#include <functional>

#include <Eigen/Dense>

namespace airy {

struct AdmmSettings {
  int max_iter = 2000;
  double rho = 0.1;
  double sigma = 1e-6;
  double relaxation = 1.6;
  double eps_abs = 1e-7;
  double eps_rel = 1e-6;
  int check_every = 10;
  bool adaptive_rho = true;
};

struct AdmmResult {
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  Eigen::VectorXd y;
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

// Projects a point of constraint space onto the closed convex set C in place.
using Projection = std::function<void(Eigen::VectorXd&)>;

// Operator splitting for min 1/2 x'Px + q'x subject to Ax in C, with dense
// factorizations. P must be positive semidefinite. rho_scale weighs the
// penalty per constraint row (large for equality rows); rows sharing a
// non-separable block of C must share the same weight.
AdmmResult solve_admm(const Eigen::MatrixXd& P, const Eigen::VectorXd& q, const Eigen::MatrixXd& A,
                      const Eigen::VectorXd& rho_scale, const Projection& project,
                      const AdmmSettings& settings, const Eigen::VectorXd* x0 = nullptr);

}  // namespace airy
