#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "airy/airy_spectrum.hpp"
#include "airy/beta_ensemble.hpp"
#include "airy/measure.hpp"
#include "airy/rate_function.hpp"
#include "airy/riccati.hpp"

namespace airy {

struct TailRow {
  TailEstimate estimate;
  bool bound_holds = false;  // p_hat <= exp(-(2/3) beta t^(3/2))
};

// One lambda1_tail run per t (t index i uses rng.substream(i)); reps >= 10^4.
std::vector<TailRow> tails_report(double beta, const std::vector<double>& t_ladder, std::size_t reps,
                                  const RngState& rng, const RiccatiConfig& cfg = {}, int threads = 1);
std::string tails_csv(const std::vector<TailRow>& rows);

// Edge spectrum of one H_{beta,n} draw: every eigenvalue whose b_i <= R.
EdgeScaledSpectrum sample_edge_spectrum(double beta, std::size_t n, std::size_t k, double R, Rng& rng);

// Typical configuration pushed right by `shift`: nu_0 translated by shift and
// restricted to [-R, R], minus nu_{0;R}.
SignedMeasure shifted_reference_target(double shift, double R, std::size_t cells = 400);

struct LdpTrendOptions {
  double beta = 2.0;
  double R = 10.0;
  std::vector<double> deltas{5.5};
  std::vector<std::size_t> k_ladder{1, 2, 3, 4};
  std::size_t reps = 2000;
  std::size_t min_n = 512;   // n = max(min_n, k^4)
  double grid_step = 0.02;   // d_R grid
  std::size_t cells = 400;   // mu_0 cells
  bool reference = true;     // also solve for -(beta/2) I_R(target, delta)
  double S = 14.0;
  RateOptions rate{};
  int threads = 1;
};

struct LdpTrendRow {
  std::size_t k = 0;
  std::size_t n = 0;
  double delta = 0.0;
  std::size_t reps = 0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  Interval wilson;
  // k^-2 log p_hat; with zero hits k^-2 log of the Wilson upper limit.
  double rate_estimate = 0.0;
  double rate_lo = 0.0;  // k^-2 log wilson.lo (-inf with zero hits)
  double rate_hi = 0.0;  // k^-2 log wilson.hi
  bool one_sided = false;
  double mean_distance = 0.0;
};

struct LdpTrendResult {
  LdpTrendOptions options;
  std::vector<LdpTrendRow> rows;
  // Per delta: -(beta/2) I_R(target, delta) from the optimizer, if requested.
  std::vector<std::optional<double>> reference;
  std::vector<std::string> reference_errors;
};

// Monte-Carlo frequencies of d_R(mu_{n,k;R}, target) <= delta over the
// Gaussian beta-ensemble proxy. Replica r at rung k uses
// rng.substream(k).substream(r); the same draws serve every delta.
LdpTrendResult ldp_trend(const SignedMeasure& target, const LdpTrendOptions& options, const RngState& rng);

}  // namespace airy
