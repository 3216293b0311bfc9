#include "airy/qp_admm.hpp"

#include <algorithm>
#include <cmath>

#include "airy/error.hpp"

namespace airy {

AdmmResult solve_admm(const Eigen::MatrixXd& P, const Eigen::VectorXd& q, const Eigen::MatrixXd& A,
                      const Eigen::VectorXd& rho_scale, const Projection& project,
                      const AdmmSettings& s, const Eigen::VectorXd* x0) {
  const Eigen::Index n = P.rows(), m = A.rows();
  if (P.cols() != n || q.size() != n || A.cols() != n || rho_scale.size() != m)
    throw DomainError("solve_admm: dimension mismatch");

  double rho = s.rho;
  Eigen::VectorXd rv = rho * rho_scale;
  Eigen::LLT<Eigen::MatrixXd> llt;
  auto factor = [&] {
    Eigen::MatrixXd K = P;
    K.diagonal().array() += s.sigma;
    K.noalias() += A.transpose() * rv.asDiagonal() * A;
    llt.compute(K);
    if (llt.info() != Eigen::Success) throw NumericalError("solve_admm: KKT factorization failed");
  };
  factor();

  AdmmResult r;
  r.x = x0 ? *x0 : Eigen::VectorXd::Zero(n);
  r.z = A * r.x;
  project(r.z);
  r.y = Eigen::VectorXd::Zero(m);

  Eigen::VectorXd xt(n), zt(m), zprev(m), Ax(m), Px(n), Aty(n);
  for (int it = 1; it <= s.max_iter; ++it) {
    zprev = r.z;
    xt = llt.solve(s.sigma * r.x - q + A.transpose() * (rv.cwiseProduct(r.z) - r.y));
    zt.noalias() = A * xt;
    r.x = s.relaxation * xt + (1.0 - s.relaxation) * r.x;
    Eigen::VectorXd zr = s.relaxation * zt + (1.0 - s.relaxation) * zprev;
    r.z = zr + r.y.cwiseQuotient(rv);
    project(r.z);
    r.y += rv.cwiseProduct(zr - r.z);
    r.iterations = it;

    if (it % s.check_every != 0 && it != s.max_iter) continue;
    Ax.noalias() = A * r.x;
    Px.noalias() = P * r.x;
    Aty.noalias() = A.transpose() * r.y;
    r.primal_residual = (Ax - r.z).lpNorm<Eigen::Infinity>();
    r.dual_residual = (Px + q + Aty).lpNorm<Eigen::Infinity>();
    const double pscale = std::max(Ax.lpNorm<Eigen::Infinity>(), r.z.lpNorm<Eigen::Infinity>());
    const double dscale = std::max({Px.lpNorm<Eigen::Infinity>(), Aty.lpNorm<Eigen::Infinity>(),
                                    q.lpNorm<Eigen::Infinity>()});
    if (r.primal_residual <= s.eps_abs + s.eps_rel * pscale &&
        r.dual_residual <= s.eps_abs + s.eps_rel * dscale) {
      r.converged = true;
      break;
    }
    if (s.adaptive_rho) {
      const double num = r.primal_residual / std::max(pscale, 1e-30);
      const double den = r.dual_residual / std::max(dscale, 1e-30);
      if (den > 0.0 && num > 0.0) {
        const double next = std::clamp(rho * std::sqrt(num / den), 1e-6, 1e6);
        if (next > 5.0 * rho || next < 0.2 * rho) {
          rv *= next / rho;
          rho = next;
          factor();
        }
      }
    }
  }
  return r;
}

}  // namespace airy
