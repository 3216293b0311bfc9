#include "airy/beta_ensemble.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "airy/error.hpp"
#include "airy/measure.hpp"

namespace airy {
namespace {

constexpr std::size_t kBatch = 8;

// Sturm counts at up to kBatch shifts at once; the shift loop is innermost so
// the divisions of independent sequences overlap.
void sturm_batch(const TridiagonalMatrix& m, const std::vector<double>& e2, double pivmin,
                 const double* shifts, std::size_t count, std::size_t* out) {
  std::array<double, kBatch> x{}, q{};
  std::array<std::size_t, kBatch> neg{};
  for (std::size_t s = 0; s < kBatch; ++s) x[s] = shifts[std::min(s, count - 1)];
  const std::size_t n = m.n();
  for (std::size_t s = 0; s < kBatch; ++s) {
    double v = m.diag[0] - x[s];
    if (std::fabs(v) < pivmin) v = -pivmin;
    q[s] = v;
    neg[s] = v < 0.0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double d = m.diag[i], c = e2[i - 1];
    for (std::size_t s = 0; s < kBatch; ++s) {
      double v = d - x[s] - c / q[s];
      v = std::fabs(v) < pivmin ? -pivmin : v;
      q[s] = v;
      neg[s] += v < 0.0;
    }
  }
  for (std::size_t s = 0; s < count; ++s) out[s] = neg[s];
}

struct Bisector {
  const TridiagonalMatrix& m;
  std::vector<double> e2;
  double pivmin;

  explicit Bisector(const TridiagonalMatrix& mat) : m(mat), e2(mat.offdiag.size()) {
    double emax = 0.0;
    for (std::size_t i = 0; i < e2.size(); ++i) {
      e2[i] = mat.offdiag[i] * mat.offdiag[i];
      emax = std::max(emax, e2[i]);
    }
    pivmin = std::numeric_limits<double>::min() * std::max(1.0, emax);
  }

  void counts(const std::vector<double>& xs, std::vector<std::size_t>& out) const {
    out.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); i += kBatch)
      sturm_batch(m, e2, pivmin, xs.data() + i, std::min(kBatch, xs.size() - i), out.data() + i);
  }

  // Eigenvalues with ascending index in [first, n) lying in [a, b), where
  // ca = #eig < a and cb = #eig < b. Breadth-first splitting.
  std::vector<double> solve(double a, double b, std::size_t ca, std::size_t cb, std::size_t first,
                            double tol) const {
    struct Iv {
      double a, b;
      std::size_t ca, cb;
    };
    std::vector<double> found;
    std::vector<Iv> active{{a, b, ca, cb}}, next;
    std::vector<double> mids;
    std::vector<std::size_t> cm;
    while (!active.empty()) {
      mids.clear();
      next.clear();
      std::vector<Iv> pending;
      for (const Iv& iv : active) {
        if (iv.cb <= iv.ca || iv.cb <= first) continue;
        const double mid = 0.5 * (iv.a + iv.b);
        if (iv.b - iv.a <= tol || mid <= iv.a || mid >= iv.b) {
          for (std::size_t j = std::max(iv.ca, first); j < iv.cb; ++j) found.push_back(mid);
          continue;
        }
        pending.push_back(iv);
        mids.push_back(mid);
      }
      counts(mids, cm);
      for (std::size_t i = 0; i < pending.size(); ++i) {
        const Iv& iv = pending[i];
        const std::size_t c = std::clamp(cm[i], iv.ca, iv.cb);
        next.push_back({iv.a, mids[i], iv.ca, c});
        next.push_back({mids[i], iv.b, c, iv.cb});
      }
      active.swap(next);
    }
    std::sort(found.begin(), found.end(), std::greater<>());
    return found;
  }
};

}  // namespace

void TridiagonalMatrix::validate() const {
  if (diag.empty()) throw DomainError("TridiagonalMatrix: empty");
  if (offdiag.size() + 1 != diag.size()) throw DomainError("TridiagonalMatrix: offdiag must have n-1 entries");
}

TridiagonalMatrix sample_tridiagonal(double beta, std::size_t n, Rng& rng) {
  if (!(beta > 0.0)) throw DomainError("sample_tridiagonal: beta must be positive");
  if (n == 0) throw DomainError("sample_tridiagonal: n must be positive");
  TridiagonalMatrix m;
  m.diag.resize(n);
  m.offdiag.resize(n - 1);
  const double dscale = std::sqrt(2.0 / beta), oscale = 1.0 / std::sqrt(beta);
  for (std::size_t i = 0; i < n; ++i) m.diag[i] = dscale * sample_gaussian(rng);
  for (std::size_t i = 0; i + 1 < n; ++i)
    m.offdiag[i] = oscale * sample_chi(rng, static_cast<double>(n - 1 - i) * beta);
  return m;
}

std::pair<double, double> gershgorin_bounds(const TridiagonalMatrix& m) {
  m.validate();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  const std::size_t n = m.n();
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::fabs(m.offdiag[i - 1]);
    if (i + 1 < n) r += std::fabs(m.offdiag[i]);
    lo = std::min(lo, m.diag[i] - r);
    hi = std::max(hi, m.diag[i] + r);
  }
  return {lo, hi};
}

std::size_t sturm_count(const TridiagonalMatrix& m, double x) {
  m.validate();
  Bisector b(m);
  std::vector<std::size_t> out;
  b.counts({x}, out);
  return out[0];
}

namespace {

std::vector<double> bisect_range(const TridiagonalMatrix& m, double lo, std::size_t first, double tol) {
  m.validate();
  if (!(tol > 0.0)) throw DomainError("eigenvalues_tridiagonal: tol must be positive");
  auto [glo, ghi] = gershgorin_bounds(m);
  const double pad = tol + 1e-12 * std::max({1.0, std::fabs(glo), std::fabs(ghi)});
  glo -= pad;
  ghi += pad;
  Bisector b(m);
  std::size_t clo = 0;
  if (lo > glo) {
    glo = lo;
    std::vector<std::size_t> c;
    b.counts({lo}, c);
    clo = c[0];
  }
  if (!(ghi > glo)) return {};
  return b.solve(glo, ghi, clo, m.n(), first, tol);
}

}  // namespace

std::vector<double> eigenvalues_tridiagonal(const TridiagonalMatrix& m, double tol) {
  return bisect_range(m, -std::numeric_limits<double>::infinity(), 0, tol);
}

std::vector<double> top_eigenvalues(const TridiagonalMatrix& m, std::size_t count, double tol) {
  const std::size_t n = m.n();
  return bisect_range(m, -std::numeric_limits<double>::infinity(), n - std::min(count, n), tol);
}

std::vector<double> eigenvalues_above(const TridiagonalMatrix& m, double threshold, double tol) {
  return bisect_range(m, threshold, 0, tol);
}

EdgeScaledSpectrum edge_rescale(std::vector<double> lambdas, std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw DomainError("edge_rescale: need 1 <= k <= n");
  for (std::size_t i = 1; i < lambdas.size(); ++i)
    if (lambdas[i] > lambdas[i - 1]) throw DomainError("edge_rescale: eigenvalues must be sorted decreasing");
  EdgeScaledSpectrum s;
  s.n = n;
  s.k = k;
  const double nn = static_cast<double>(n);
  const double a = std::pow(nn, 1.0 / 6.0), c = 2.0 * std::sqrt(nn);
  const double kk = std::pow(static_cast<double>(k), -2.0 / 3.0);
  s.tildes.reserve(lambdas.size());
  s.bs.reserve(lambdas.size());
  for (double l : lambdas) {
    const double t = a * (l - c);
    s.tildes.push_back(t);
    s.bs.push_back(-kk * t);
  }
  s.lambdas = std::move(lambdas);
  return s;
}

double mu0_support_end(std::size_t n, std::size_t k) {
  return 4.0 * std::pow(static_cast<double>(n) / static_cast<double>(k), 2.0 / 3.0);
}

double mu0_density(std::size_t n, std::size_t k, double x) {
  if (k == 0 || k > n) throw DomainError("mu0_density: need 1 <= k <= n");
  const double end = mu0_support_end(n, k);
  if (x <= 0.0 || x >= end) return 0.0;
  return std::sqrt(x) * std::sqrt(1.0 - x / end) / std::numbers::pi;
}

double mu0_mass(std::size_t n, std::size_t k, double a, double b) {
  if (k == 0 || k > n) throw DomainError("mu0_mass: need 1 <= k <= n");
  const double end = mu0_support_end(n, k);
  a = std::max(a, 0.0);
  b = std::min(b, end);
  if (!(b > a)) return 0.0;
  // Substituting x = end sin^2(t) removes both square-root endpoints.
  const double ta = std::asin(std::sqrt(a / end)), tb = std::asin(std::sqrt(std::min(1.0, b / end)));
  boost::math::quadrature::tanh_sinh<double> integrator;
  const double scale = end * std::sqrt(end);
  auto f = [scale](double t) {
    const double s = std::sin(t), c = std::cos(t);
    return 2.0 * scale * s * s * c * c / std::numbers::pi;
  };
  return integrator.integrate(f, ta, tb, 1e-13);
}

CountingTriple counting_triple(const EdgeScaledSpectrum& spec, const std::vector<double>& grid) {
  if (!std::is_sorted(grid.begin(), grid.end())) throw DomainError("counting_triple: grid must be sorted");
  CountingTriple ct;
  ct.grid = grid;
  const double kk = static_cast<double>(spec.k);
  double prev_x = 0.0, acc = 0.0;
  for (double x : grid) {
    const auto cnt = static_cast<std::size_t>(std::upper_bound(spec.bs.begin(), spec.bs.end(), x) - spec.bs.begin());
    double n0 = 0.0;
    if (x > 0.0) {
      acc += mu0_mass(spec.n, spec.k, prev_x, x);
      prev_x = x;
      n0 = kk * acc;
    }
    ct.N.push_back(cnt);
    ct.N0.push_back(n0);
    ct.psi.push_back(static_cast<double>(cnt) - n0);
  }
  return ct;
}

SignedMeasure mu0_cells(std::size_t n, std::size_t k, double R, std::size_t cells) {
  if (cells == 0) throw DomainError("mu0_cells: need at least one cell");
  const double top = std::min(R, mu0_support_end(n, k));
  if (!(top > 0.0)) return {};
  std::vector<double> breaks(cells + 1), masses(cells);
  for (std::size_t i = 0; i <= cells; ++i) breaks[i] = top * static_cast<double>(i) / static_cast<double>(cells);
  breaks.back() = top;
  for (std::size_t i = 0; i < cells; ++i) masses[i] = mu0_mass(n, k, breaks[i], breaks[i + 1]);
  return SignedMeasure::from_cell_masses(std::move(breaks), masses);
}

SignedMeasure empirical_mu_nk(const EdgeScaledSpectrum& spec, double R, const SignedMeasure& mu0_part) {
  if (!(R >= 10.0)) throw DomainError("empirical_mu_nk: R must be >= 10");
  const double w = 1.0 / static_cast<double>(spec.k);
  std::vector<Atom> atoms;
  for (double b : spec.bs)
    if (b >= -R && b <= R) atoms.push_back({b, w});
  return SignedMeasure::from_atoms(std::move(atoms)) - mu0_part;
}

SignedMeasure empirical_mu_nk(const EdgeScaledSpectrum& spec, double R, std::size_t cells) {
  if (!(R >= 10.0)) throw DomainError("empirical_mu_nk: R must be >= 10");
  return empirical_mu_nk(spec, R, mu0_cells(spec.n, spec.k, R, cells));
}

std::vector<double> quantile_grid(std::size_t n0, std::size_t m0p, double r0, std::size_t n, std::size_t k) {
  if (!(r0 >= 1.0 && r0 <= 10.0)) throw DomainError("quantile_grid: r0 must lie in [1, 10]");
  if (m0p > n0) throw DomainError("quantile_grid: m0' must not exceed n0");
  if (k == 0 || k > n) throw DomainError("quantile_grid: need 1 <= k <= n");
  const double end = mu0_support_end(n, k);
  if (r0 >= end) throw DomainError("quantile_grid: r0 beyond the support of mu_0");
  const double kk = static_cast<double>(k);
  const std::size_t m0 = n0 - m0p;
  const double above = kk * mu0_mass(n, k, r0, end);
  if (above < static_cast<double>(m0)) {
    std::ostringstream msg;
    msg << "quantile_grid: k mu_0([r0, end]) = " << above << " < m0 = " << m0;
    throw DomainError(msg.str());
  }
  auto solve = [&](double lo, double hi, auto&& g) {
    boost::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::fabs(b - a) <= 1e-13 * std::max(1.0, std::fabs(a)); };
    const auto r = boost::math::tools::toms748_solve(g, lo, hi, tol, iters);
    return 0.5 * (r.first + r.second);
  };
  std::vector<double> rho(n0 + 2);
  rho[0] = 0.0;
  const double below = mu0_mass(n, k, 0.0, r0);
  for (std::size_t i = 1; i <= m0p; ++i) {
    const double target = static_cast<double>(i) / static_cast<double>(m0p + 1) * below;
    rho[i] = solve(0.0, r0, [&](double x) { return mu0_mass(n, k, 0.0, x) - target; });
  }
  rho[m0p + 1] = r0;
  for (std::size_t i = 2; i <= m0 + 1; ++i) {
    const double target = static_cast<double>(i - 1);
    if (kk * mu0_mass(n, k, r0, end) == target) {
      rho[m0p + i] = end;
      continue;
    }
    rho[m0p + i] = solve(rho[m0p + i - 1], end, [&](double x) { return kk * mu0_mass(n, k, r0, x) - target; });
  }
  return rho;
}

}  // namespace airy
