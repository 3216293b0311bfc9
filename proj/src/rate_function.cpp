#include "airy/rate_function.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "airy/error.hpp"
#include "airy/kr_distance.hpp"
#include "airy/log_energy.hpp"
#include "airy/qp_admm.hpp"

namespace airy {
namespace {

double confinement_integral(double lo, double hi) {
  hi = std::min(hi, 0.0);
  if (!(hi > lo)) return 0.0;
  return 4.0 / 3.0 * 0.4 * (std::pow(-lo, 2.5) - std::pow(-hi, 2.5));
}

// Projection onto {m >= lower, sum m = 0}: m_i = max(lower_i, m_i - tau).
Eigen::VectorXd project_box_sum(const Eigen::VectorXd& m, const Eigen::VectorXd& lower) {
  auto total = [&](double tau) { return (m.array() - tau).max(lower.array()).sum(); };
  double lo = (m - lower).minCoeff() - 1.0, hi = m.maxCoeff() + 1.0;
  while (total(lo) < 0.0) lo -= 2.0 * (hi - lo);
  while (total(hi) > 0.0) hi += 2.0 * (hi - lo);
  for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, std::fabs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (total(mid) > 0.0 ? lo : hi) = mid;
  }
  Eigen::VectorXd out = (m.array() - 0.5 * (lo + hi)).max(lower.array()).matrix();
  // Put the residual sum on the cell with the most room above its bound.
  Eigen::Index k = 0;
  (out - lower).maxCoeff(&k);
  out[k] -= out.sum();
  return out;
}

// Euclidean projection of x onto {sum c_i |x_i| <= radius}, c_i > 0.
void project_weighted_l1(Eigen::Ref<Eigen::VectorXd> x, const Eigen::VectorXd& c, double radius) {
  const Eigen::Index n = x.size();
  double norm = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) norm += c[i] * std::fabs(x[i]);
  if (norm <= radius) return;
  // phi(tau) = sum c_i max(|x_i| - tau c_i, 0) is decreasing piecewise linear.
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::fabs(x[a]) / c[a] > std::fabs(x[b]) / c[b];
  });
  double s_cx = 0.0, s_cc = 0.0, tau = 0.0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const Eigen::Index i = idx[r];
    s_cx += c[i] * std::fabs(x[i]);
    s_cc += c[i] * c[i];
    const double t = (s_cx - radius) / s_cc;
    const double next = r + 1 < idx.size() ? std::fabs(x[idx[r + 1]]) / c[idx[r + 1]] : 0.0;
    if (t >= next) {
      tau = t;
      break;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = std::max(std::fabs(x[i]) - tau * c[i], 0.0);
    x[i] = std::copysign(a, x[i]);
  }
}

struct Layout {
  const EnergyProblem& p;
  std::size_t nodes() const { return p.inner_count + 1; }
  // Hat weights of the restricted cell measure at the window nodes.
  Eigen::VectorXd hat(const Eigen::VectorXd& m) const {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes()));
    for (std::size_t c = 0; c < p.inner_count; ++c) {
      const double half = 0.5 * m[static_cast<Eigen::Index>(p.inner_first + c)];
      u[static_cast<Eigen::Index>(c)] += half;
      u[static_cast<Eigen::Index>(c + 1)] += half;
    }
    return u;
  }
};

double kr_of(const Layout& lay, const Eigen::VectorXd& m, const Eigen::VectorXd& target_hat) {
  const Eigen::VectorXd w = lay.hat(m) - target_hat;
  return std::max(0.0, bounded_lipschitz_lp(std::span<const double>(w.data(), static_cast<std::size_t>(w.size())),
                                            lay.p.cell_width));
}

// Target cell masses inside the window, with the total compensated outside
// it on (R, S]. Empty when the compensation cannot respect the bounds.
std::optional<Eigen::VectorXd> anchor_point(const EnergyProblem& p, const SignedMeasure& target) {
  const auto nc = static_cast<Eigen::Index>(p.cells());
  Eigen::VectorXd m = Eigen::VectorXd::Zero(nc);
  const double w = p.cell_width;
  for (const Atom& a : target.atoms()) {
    const double s = std::floor((a.x + p.R) / w);
    const auto c = static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(p.inner_count - 1)));
    m[static_cast<Eigen::Index>(p.inner_first + c)] += a.mass;
  }
  const SignedMeasure dens({}, target.breaks(), target.values());
  for (std::size_t c = 0; c < p.inner_count; ++c) {
    const std::size_t i = p.inner_first + c;
    m[static_cast<Eigen::Index>(i)] += dens.mass_in(p.breaks[i], p.breaks[i + 1]);
  }
  const double total = m.sum();
  const std::size_t right = p.inner_first + p.inner_count;
  double room = 0.0;
  for (std::size_t i = right; i < p.cells(); ++i) room += -p.lower[static_cast<Eigen::Index>(i)];
  if (right >= p.cells()) return std::nullopt;
  for (std::size_t i = right; i < p.cells(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    if (total > 0.0) {
      if (total > room) return std::nullopt;
      m[ii] = -total * (-p.lower[ii]) / room;
    } else {
      m[ii] = -total / static_cast<double>(p.cells() - right);
    }
  }
  return m;
}

}  // namespace

Eigen::MatrixXd log_kernel(std::span<const double> breaks) {
  const auto n = static_cast<Eigen::Index>(breaks.size() - 1);
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = rect_log_integral(breaks[static_cast<std::size_t>(i)], breaks[static_cast<std::size_t>(i) + 1],
                                         breaks[static_cast<std::size_t>(j)], breaks[static_cast<std::size_t>(j) + 1]);
      K(i, j) = v;
      K(j, i) = v;
    }
  return K;
}

EnergyProblem build_energy_problem(double R, double S, std::size_t cells) {
  if (!(R > 0.0)) throw DomainError("build_energy_problem: R must be positive");
  if (!(S >= R)) throw DomainError("build_energy_problem: need S >= R");
  if (cells < 4) throw DomainError("build_energy_problem: need at least 4 cells");
  EnergyProblem p;
  const double w0 = 2.0 * S / static_cast<double>(cells);
  p.inner_count = static_cast<std::size_t>(std::max(2.0, std::round(2.0 * R / w0)));
  p.cell_width = 2.0 * R / static_cast<double>(p.inner_count);
  const auto outer = static_cast<std::size_t>(std::ceil((S - R) / p.cell_width - 1e-9));
  p.inner_first = outer;
  p.R = R;
  p.S = R + static_cast<double>(outer) * p.cell_width;
  const std::size_t total = p.inner_count + 2 * outer;
  p.breaks.resize(total + 1);
  for (std::size_t i = 0; i <= total; ++i)
    p.breaks[i] = -R + (static_cast<double>(i) - static_cast<double>(outer)) * p.cell_width;
  p.breaks[outer] = -R;
  p.breaks[outer + p.inner_count] = R;

  const auto nc = static_cast<Eigen::Index>(total);
  const double a = 0.5 * p.cell_width;
  p.kernel.resize(nc, nc);
  for (Eigen::Index i = 0; i < nc; ++i)
    for (Eigen::Index j = i; j < nc; ++j) {
      const double ci = p.breaks[static_cast<std::size_t>(i)] + a, cj = p.breaks[static_cast<std::size_t>(j)] + a;
      const double v = box_log_integral(ci, cj, a);
      p.kernel(i, j) = v;
      p.kernel(j, i) = v;
    }
  p.confinement.resize(nc);
  p.lower.resize(nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    const double lo = p.breaks[static_cast<std::size_t>(i)], hi = p.breaks[static_cast<std::size_t>(i) + 1];
    p.confinement[i] = confinement_integral(lo, hi);
    p.lower[i] = -nu0_mass(lo, hi);
  }
  return p;
}

double EnergyProblem::energy(const Eigen::VectorXd& masses) const {
  const double w2 = cell_width * cell_width;
  return -masses.dot(kernel * masses) / w2;
}

double EnergyProblem::confinement_of(const Eigen::VectorXd& masses) const {
  return masses.dot(confinement) / cell_width;
}

SignedMeasure EnergyProblem::measure(const Eigen::VectorXd& masses) const {
  return SignedMeasure::from_cell_masses(breaks, std::span<const double>(masses.data(), static_cast<std::size_t>(masses.size())));
}

RateSolution minimize_I_R(const SignedMeasure& target, double delta, double R, double S,
                          const RateOptions& options, std::span<const Eigen::VectorXd> warm_start) {
  if (!(delta > 0.0)) throw DomainError("minimize_I_R: delta must be positive");
  if (!(R >= 10.0)) throw DomainError("minimize_I_R: R must be >= 10");
  if (!(S >= R)) throw DomainError("minimize_I_R: need S >= R");
  if (!target.empty() && (target.support_lo() < -R || target.support_hi() > R))
    throw DomainError("minimize_I_R: target must be supported in [-R, R]");

  const EnergyProblem p = build_energy_problem(R, S, options.cells);
  const Layout lay{p};
  const auto nc = static_cast<Eigen::Index>(p.cells());
  const auto nn = static_cast<Eigen::Index>(lay.nodes());
  const Eigen::Index ng = nn - 1;
  const double h = p.cell_width;

  const std::vector<double> th = hat_weights(target, R, p.inner_count);
  const Eigen::VectorXd target_hat = Eigen::Map<const Eigen::VectorXd>(th.data(), nn);

  // Objective on masses: -m'Km/w^2 + c'm. On sum m = 0 the kernel equals its
  // projection onto that subspace, which is positive semidefinite; a
  // multiple of 11' restores definiteness along the constant direction.
  const double w2 = h * h;
  Eigen::MatrixXd Q = -p.kernel / w2;
  const Eigen::VectorXd colmean = Q.rowwise().mean();
  const double allmean = colmean.mean();
  Q.colwise() -= colmean;
  Q.rowwise() -= colmean.transpose();
  Q.array() += allmean;
  const double shift = std::max(1.0, Q.diagonal().mean()) / static_cast<double>(nc);
  Q.array() += shift;

  const Eigen::Index nx = nc + ng;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(nx, nx);
  P.topLeftCorner(nc, nc) = 2.0 * Q;
  Eigen::VectorXd q = Eigen::VectorXd::Zero(nx);
  q.head(nc) = p.confinement / h;

  const Eigen::Index rows = nc + 1 + nn + ng;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, nx);
  A.topLeftCorner(nc, nc).setIdentity();
  A.row(nc).head(nc).setOnes();
  const Eigen::Index ru = nc + 1, rg = ru + nn;
  for (std::size_t c = 0; c < p.inner_count; ++c) {
    const auto col = static_cast<Eigen::Index>(p.inner_first + c);
    A(ru + static_cast<Eigen::Index>(c), col) += 0.5;
    A(ru + static_cast<Eigen::Index>(c) + 1, col) += 0.5;
  }
  // u = Pm - E'g with (E'g)_j = g_{j-1} - g_j.
  for (Eigen::Index j = 0; j < ng; ++j) {
    A(ru + j + 1, nc + j) -= 1.0;
    A(ru + j, nc + j) += 1.0;
  }
  for (Eigen::Index j = 0; j < ng; ++j) A(rg + j, nc + j) = 1.0;

  Eigen::VectorXd rho_scale = Eigen::VectorXd::Ones(rows);
  rho_scale[nc] = 1e3;
  Eigen::VectorXd weights(nn + ng);
  weights.head(nn).setOnes();
  weights.tail(ng).setConstant(h);
  const Eigen::VectorXd lower = p.lower;
  // The solver works on a slightly smaller ball so that its approximate
  // output still lies inside the true one after the exact repair below.
  const double inner_delta = delta * (1.0 - 1e-3);
  const Projection project = [&](Eigen::VectorXd& z) {
    z.head(nc) = z.head(nc).cwiseMax(lower);
    z[nc] = 0.0;
    Eigen::Ref<Eigen::VectorXd> block = z.segment(ru, nn + ng);
    block.head(nn) -= target_hat;
    project_weighted_l1(block, weights, inner_delta);
    block.head(nn) += target_hat;
  };

  AdmmSettings settings;
  settings.max_iter = options.iters;
  settings.eps_abs = 1e-10;
  settings.eps_rel = 1e-9;
  const std::optional<Eigen::VectorXd> anchor = anchor_point(p, target);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(nx);
  if (!warm_start.empty() && warm_start.front().size() == nc) x0.head(nc) = warm_start.front();
  else if (anchor) x0.head(nc) = *anchor;
  const AdmmResult res = solve_admm(P, q, A, rho_scale, project, settings, &x0);

  auto objective = [&](const Eigen::VectorXd& m) { return p.energy(m) + p.confinement_of(m); };

  RateSolution best;
  best.delta = delta;
  best.R = R;
  best.S = p.S;
  best.cells = p.cells();
  best.iterations = res.iterations;
  best.converged = res.converged;
  bool have = false;
  double best_kr = std::numeric_limits<double>::infinity();
  auto consider = [&](const Eigen::VectorXd& m, double anchor_weight) {
    if ((m - lower).minCoeff() < -1e-14 || std::fabs(m.sum()) > 1e-11) return;
    const double kr = kr_of(lay, m, target_hat);
    best_kr = std::min(best_kr, kr);
    if (kr > delta) return;
    const double v = objective(m);
    if (have && v >= best.value) return;
    have = true;
    best.value = v;
    best.masses = m;
    best.kr_gap = kr;
    best.anchor_weight = anchor_weight;
  };

  const Eigen::VectorXd solved = project_box_sum(res.x.head(nc), lower);
  consider(solved, 0.0);
  if (anchor) consider(*anchor, 1.0);
  if (!have && anchor && kr_of(lay, *anchor, target_hat) <= delta) {
    // The distance is convex along the segment, so the feasible part is an
    // interval ending at the anchor.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      const Eigen::VectorXd m = (1.0 - mid) * solved + mid * *anchor;
      (kr_of(lay, m, target_hat) <= delta ? hi : lo) = mid;
    }
    consider((1.0 - hi) * solved + hi * *anchor, hi);
  }
  for (const Eigen::VectorXd& m : warm_start)
    if (m.size() == nc) consider(m, 0.0);
  if (!have) {
    std::ostringstream msg;
    msg << "minimize_I_R: no admissible measure within delta=" << delta << " of the target on this grid"
        << " (cell width " << h << "); best distance reached " << best_kr;
    throw InfeasibleError(msg.str(), best_kr);
  }
  best.energy = p.energy(best.masses);
  best.confinement = p.confinement_of(best.masses);
  best.minimizer = p.measure(best.masses);
  return best;
}

RateLadder rate_ladder(const SignedMeasure& target, std::span<const double> deltas, double R, double S,
                       const RateOptions& options) {
  if (deltas.empty()) throw DomainError("rate_ladder: empty delta ladder");
  RateLadder out;
  out.deltas.assign(deltas.begin(), deltas.end());
  std::vector<std::size_t> order(deltas.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return deltas[a] < deltas[b]; });
  out.solutions.resize(deltas.size());
  std::vector<Eigen::VectorXd> found;
  for (std::size_t idx : order) {
    std::vector<Eigen::VectorXd> warm(found.rbegin(), found.rend());
    out.solutions[idx] = minimize_I_R(target, deltas[idx], R, S, options, warm);
    found.push_back(out.solutions[idx].masses);
  }
  if (order.size() >= 2) {
    const RateSolution& a = out.solutions[order[0]];
    const RateSolution& b = out.solutions[order[1]];
    out.extrapolated = a.value - a.delta * (b.value - a.value) / (b.delta - a.delta);
  } else {
    out.extrapolated = out.solutions[order[0]].value;
  }
  return out;
}

}  // namespace airy
