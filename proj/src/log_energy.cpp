#include "airy/log_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "airy/error.hpp"

namespace airy {
namespace {

using ld = long double;

ld xlogx2(ld u) {
  if (u == 0.0L) return 0.0L;
  return 0.5L * u * u * std::log(std::fabs(u));
}

// F'' = log|u|.
ld F(ld u) { return xlogx2(u) - 0.75L * u * u; }

// 1/2 t^2 log|t| second difference, far field: series in (2a/t)^2.
double box_far(double t, double a) {
  const double r = 2.0 * a / t, r2 = r * r;
  double sum = 0.0, term = r2 * r2 * t * t;  // (2a)^4 / t^2
  for (int k = 2; k < 40; ++k) {
    // 2 (2k-3)! / (2k)! = 2 / ((2k)(2k-1)(2k-2))
    const double c = 2.0 / (2.0 * k * (2.0 * k - 1.0) * (2.0 * k - 2.0));
    const double add = c * term;
    sum += add;
    if (std::fabs(add) < 1e-18 * std::fabs(sum)) break;
    term *= r2;
  }
  return 4.0 * a * a * std::log(std::fabs(t)) - sum;
}

}  // namespace

double box_log_integral(double t1, double t2, double inv_n) {
  if (!(inv_n > 0.0)) throw DomainError("box_log_integral: inv_n must be positive");
  const double a = inv_n;
  const double t = std::fabs(t1 - t2);
  if (t >= 8.0 * a) return box_far(t, a);
  const ld tt = t, aa = a;
  const ld v = xlogx2(tt + 2.0L * aa) - 2.0L * xlogx2(tt) + xlogx2(tt - 2.0L * aa) - 6.0L * aa * aa;
  return static_cast<double>(v);
}

double rect_log_integral(double a1, double b1, double a2, double b2) {
  if (!(b1 >= a1 && b2 >= a2)) throw DomainError("rect_log_integral: empty rectangle");
  const ld v = F(ld(b1) - a2) - F(ld(a1) - a2) - F(ld(b1) - b2) + F(ld(a1) - b2);
  return static_cast<double>(v);
}

double log_energy(const SignedMeasure& mu) {
  if (!mu.atoms().empty())
    throw DomainError("log_energy: point atoms have infinite energy; apply smooth_atoms first");
  const auto& br = mu.breaks();
  const auto& v = mu.values();
  ld e = 0.0L;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) continue;
    e += ld(v[i]) * v[i] * rect_log_integral(br[i], br[i + 1], br[i], br[i + 1]);
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      if (v[j] == 0.0) continue;
      e += 2.0L * v[i] * v[j] * rect_log_integral(br[i], br[i + 1], br[j], br[j + 1]);
    }
  }
  return static_cast<double>(-e);
}

double confinement(const SignedMeasure& mu) {
  double s = 0.0;
  for (const Atom& a : mu.atoms())
    if (a.x <= 0.0) s += 4.0 / 3.0 * std::pow(-a.x, 1.5);
  const auto& br = mu.breaks();
  for (std::size_t i = 0; i < mu.cell_count(); ++i) {
    const double lo = br[i], hi = std::min(br[i + 1], 0.0);
    if (!(hi > lo)) continue;
    s += mu.values()[i] * (4.0 / 3.0) * 0.4 * (std::pow(-lo, 2.5) - std::pow(-hi, 2.5));
  }
  return s;
}

RateValue script_I(const SignedMeasure& mu, double smoothing) {
  RateValue out;
  SignedMeasure m = mu;
  if (!mu.atoms().empty()) {
    double h = smoothing;
    if (!(h > 0.0)) {
      const auto& br = mu.breaks();
      h = br.empty() ? 0.01 : std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i + 1 < br.size(); ++i) h = std::min(h, br[i + 1] - br[i]);
    }
    m = smooth_atoms(mu, h);
    out.smoothing_radius = h;
  }
  const std::string why = admissibility_violation(m, std::numeric_limits<double>::infinity(), true, 1e-12);
  if (!why.empty()) throw DomainError("script_I: inadmissible measure: " + why);
  out.energy = log_energy(m);
  out.confinement = confinement(m);
  out.value = out.energy + out.confinement;
  return out;
}

double xi(double x) {
  using boost::math::quadrature::tanh_sinh;
  constexpr ld pi = std::numbers::pi_v<ld>;
  ld X = std::fabs(ld(x));
  tanh_sinh<ld> integrator;
  const ld tol = 1e-17L;
  if (X <= 2.0L) {
    // -(2/pi) int_0^pi log|x - 2 cos t| sin^2 t dt, split at the singularity
    // t0. Near t0 the offset t - t0 comes from the endpoint distance tc, and
    // |2 cos t0 - 2 cos t| = 4 |sin((t + t0)/2) sin((t - t0)/2)|.
    const ld t0 = std::acos(X / 2.0L);
    auto piece = [&](bool left) {
      return [t0, left](ld t, ld tc) {
        const bool near_t0 = left ? tc > 0.0L : tc < 0.0L;
        const ld off = near_t0 ? -tc : t - t0;
        const ld d = 4.0L * std::fabs(std::sin(t0 + off / 2.0L) * std::sin(off / 2.0L));
        const ld st = std::sin(t0 + off);
        if (d < 1e-300L || st == 0.0L) return 0.0L;
        return std::log(d) * st * st;
      };
    };
    ld I = 0.0L;
    if (t0 > 0.0L) I += integrator.integrate(piece(true), 0.0L, t0, tol);
    if (t0 < pi) I += integrator.integrate(piece(false), t0, pi, tol);
    const ld v = -2.0L / pi * I + X * X / 4.0L - 0.5L;
    return static_cast<double>(v);
  }
  // x = 2 + s: difference to the value at 2 without cancellation,
  // log((x - 2 cos t) / (2 - 2 cos t)) = log1p(s / (4 sin^2(t/2))).
  const ld s = X - 2.0L;
  auto g = [s](ld t) {
    const ld h = std::sin(t / 2.0L);
    const ld st = std::sin(t);
    if (h < 1e-300L) return 0.0L;
    return std::log1p(s / (4.0L * h * h)) * st * st;
  };
  const ld tc = std::min(pi / 2.0L, 2.0L * std::asin(std::min(1.0L, std::sqrt(s) / 2.0L)));
  ld I = integrator.integrate(g, 0.0L, tc, tol) + integrator.integrate(g, tc, pi, tol);
  const ld v = (s + s * s / 4.0L) - 2.0L / pi * I + static_cast<ld>(xi(2.0));
  return static_cast<double>(v);
}

double xi_tilde(double x, std::size_t n, std::size_t k, double r_cut) {
  if (k == 0 || k > n) throw DomainError("xi_tilde: need 1 <= k <= n");
  const double ratio = static_cast<double>(k) / static_cast<double>(n);
  if (r_cut > 4.0 * std::pow(1.0 / ratio, 2.0 / 3.0))
    throw DomainError("xi_tilde: r_cut beyond the vanishing interval");
  if (x >= 0.0 && x <= r_cut) return 0.0;
  return xi(2.0 - std::pow(ratio, 2.0 / 3.0) * x) / ratio;
}

}  // namespace airy
