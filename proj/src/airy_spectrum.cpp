#include "airy/airy_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "airy/error.hpp"
#include "airy/parallel.hpp"

namespace airy {
namespace {

constexpr double kPi = std::numbers::pi;

std::size_t q_count(double x, double L, const RiccatiConfig& cfg) {
  return count_blowups(x, 0.0, L, nullptr, 0.0, cfg);
}

double n0_smooth(double x) { return 2.0 / (3.0 * kPi) * std::pow(x, 1.5) + 0.25; }

}  // namespace

double gamma_formula(int i) {
  if (i < 1) throw DomainError("gamma_formula: index must be >= 1");
  return std::pow(1.5 * kPi * (i - 0.25), 2.0 / 3.0);
}

double gamma_ode(int i, const RiccatiConfig& cfg) {
  if (i < 1) throw DomainError("gamma_ode: index must be >= 1");
  const auto target = static_cast<std::size_t>(i);
  const double guess = gamma_formula(i);
  double lo = guess - 1.0, hi = guess + 1.0;
  double L = sao_truncation(hi + 2.0);
  auto bracketed = [&] { return q_count(lo, L, cfg) < target && q_count(hi, L, cfg) >= target; };
  if (!bracketed()) {
    lo -= 2.0;
    hi += 2.0;
    if (!bracketed()) throw NumericalError("gamma_ode: bisection bracket failure for i=" + std::to_string(i));
  }
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (q_count(mid, L, cfg) >= target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

AirySpectrum airy_spectrum(int count, SpectrumSource source, const RiccatiConfig& cfg) {
  AirySpectrum s;
  s.source = source;
  for (int i = 1; i <= count; ++i)
    s.gammas.push_back(source == SpectrumSource::formula ? gamma_formula(i) : gamma_ode(i, cfg));
  return s;
}

N0Count count_n0_detailed(double x, const RiccatiConfig& cfg) {
  if (x <= 0.0) return {0, false};
  const double v = n0_smooth(x);
  const double frac = v - std::floor(v);
  if (frac < 0.05 || frac > 0.95) return {q_count(x, sao_truncation(x), cfg), true};
  return {static_cast<std::size_t>(std::floor(v)), false};
}

std::size_t count_n0(double x) { return count_n0_detailed(x).count; }

double sao_truncation(double lambda_max) { return std::max(10.0, 2.0 * lambda_max + 10.0); }

SaoSample sample_sao_eigenvalues(double beta, double lambda_max, const BrownianPath& noise,
                                 const RiccatiConfig& cfg, std::size_t max_count) {
  const double sigma = noise_amplitude(beta);
  SaoSample out;
  out.beta = beta;
  out.lambda_max = lambda_max;
  out.L = sao_truncation(lambda_max);
  out.dt = cfg.dt;
  out.noise_id = noise.origin();

  std::map<double, std::size_t> cache;
  auto N = [&](double lam) {
    auto it = cache.find(lam);
    if (it != cache.end()) return it->second;
    const std::size_t n = count_blowups(lam, 0.0, out.L, &noise, sigma, cfg, max_count + 1);
    cache.emplace(lam, n);
    return n;
  };

  const std::size_t top = N(lambda_max);
  if (top > max_count) {
    std::ostringstream msg;
    msg << "sample_sao_eigenvalues: more than " << max_count << " eigenvalues below " << lambda_max
        << "; lower lambda_max or raise the cap";
    throw NumericalError(msg.str());
  }
  if (top == 0) return out;

  double bottom = std::min(-1.0, lambda_max - 1.0);
  while (N(bottom) > 0) {
    bottom = 2.0 * bottom - 1.0;
    if (bottom < -1e4) throw NumericalError("sample_sao_eigenvalues: no eigenvalue-free lower bound found");
  }

  // Depth-first interval splitting; a leaf narrower than tol hands out every
  // index it gained to its midpoint. Iteration depth is bounded by 40.
  constexpr double tol = 1e-3;
  constexpr int max_depth = 40;
  std::size_t assigned = 0;
  struct Node {
    double a, b;
    int depth;
  };
  std::vector<Node> stack{{bottom, lambda_max, 0}};
  while (!stack.empty()) {
    const Node nd = stack.back();
    stack.pop_back();
    const std::size_t nb = N(nd.b);
    if (nb <= assigned) continue;
    if (nd.b - nd.a <= tol || nd.depth >= max_depth) {
      const double at = 0.5 * (nd.a + nd.b);
      for (; assigned < nb; ++assigned) out.eigenvalues.push_back(at);
      continue;
    }
    const double mid = 0.5 * (nd.a + nd.b);
    stack.push_back({mid, nd.b, nd.depth + 1});
    stack.push_back({nd.a, mid, nd.depth + 1});
  }
  return out;
}

double smallest_sao_eigenvalue(double beta, const BrownianPath& noise, const RiccatiConfig& cfg,
                               double lo, double hi, double tol) {
  if (!(hi > lo) || !(tol > 0.0)) throw DomainError("smallest_sao_eigenvalue: need lo < hi and tol > 0");
  const double sigma = noise_amplitude(beta);
  const double L = sao_truncation(hi);
  auto explodes = [&](double lam) { return count_blowups(lam, 0.0, L, &noise, sigma, cfg, 1) > 0; };
  if (!explodes(hi)) return hi;
  while (explodes(lo)) {
    lo -= 2.0 * (hi - lo);
    if (lo < -1e4) throw NumericalError("smallest_sao_eigenvalue: no eigenvalue-free lower bound found");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (explodes(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> sample_sao_lambda1(double beta, std::size_t reps, const RngState& rng,
                                       const RiccatiConfig& cfg, int threads) {
  constexpr double lo = -12.0, hi = 12.0;
  const double L = sao_truncation(hi);
  std::vector<double> out(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng gen(rng.substream(r));
    const BrownianPath path = sample_brownian_path(gen, cfg.dt, L);
    out[r] = smallest_sao_eigenvalue(beta, path, cfg, lo, hi, 1e-3);
  });
  return out;
}

Interval wilson_interval(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  const double lo = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = hits >= n ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

TailEstimate lambda1_tail(double beta, double t, std::size_t reps, const RngState& rng,
                          const RiccatiConfig& cfg, int threads) {
  if (!(t > 0.0)) throw DomainError("lambda1_tail: t must be positive");
  if (reps == 0) throw DomainError("lambda1_tail: reps must be positive");
  TailEstimate est;
  est.beta = beta;
  est.t = t;
  est.reps = reps;
  est.horizon = sao_truncation(-t);
  est.bound = std::exp(-2.0 / 3.0 * beta * std::pow(t, 1.5));
  const double sigma = noise_amplitude(beta);
  std::vector<unsigned char> hit(reps, 0);
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng gen(rng.substream(r));
    const BrownianPath path = sample_brownian_path(gen, cfg.dt, est.horizon);
    hit[r] = count_blowups(-t, 0.0, est.horizon, &path, sigma, cfg, 1) > 0;
  });
  est.hits = static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(reps);
  est.wilson = wilson_interval(est.hits, reps);
  est.upper_only = est.hits == 0;
  return est;
}

}  // namespace airy
