#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "airy/riccati.hpp"
#include "airy/rng.hpp"

namespace airy {

enum class SpectrumSource { formula, ode };

struct AirySpectrum {
  std::vector<double> gammas;  // gamma_1 < gamma_2 < ...
  SpectrumSource source = SpectrumSource::formula;
};

// (3 pi (i - 1/4) / 2)^(2/3), i >= 1.
double gamma_formula(int i);

// i-th eigenvalue of -f'' + x f on the half-line with Dirichlet condition,
// as the i-th count threshold of the deterministic Riccati flow (tol 1e-4).
double gamma_ode(int i, const RiccatiConfig& cfg = {});

AirySpectrum airy_spectrum(int count, SpectrumSource source, const RiccatiConfig& cfg = {});

struct N0Count {
  std::size_t count = 0;
  bool ode_fallback = false;  // formula too close to a threshold, flow used
};

// |{i : gamma_i <= x}|. The closed form is used away from thresholds.
std::size_t count_n0(double x);
N0Count count_n0_detailed(double x, const RiccatiConfig& cfg = {});

// Half-line truncation max(10, 2 lambda_max + 10).
double sao_truncation(double lambda_max);

struct SaoSample {
  double beta = 2.0;
  std::vector<double> eigenvalues;  // increasing, all below lambda_max
  double lambda_max = 0.0;
  double L = 0.0;
  double dt = 0.0;
  RngState noise_id;
};

// All stochastic Airy eigenvalues below lambda_max along one noise path, by
// bisection on the explosion count N(lambda) of p on [0, L] (tol 1e-3).
// Throws NumericalError when N(lambda_max) exceeds max_count.
SaoSample sample_sao_eigenvalues(double beta, double lambda_max, const BrownianPath& noise,
                                 const RiccatiConfig& cfg = {}, std::size_t max_count = 4096);

// lambda_1 along one path, searched in [lo, hi]. Returns hi when nothing is
// found below it. L = sao_truncation(hi) must be covered by the noise.
double smallest_sao_eigenvalue(double beta, const BrownianPath& noise, const RiccatiConfig& cfg,
                               double lo = -12.0, double hi = 12.0, double tol = 1e-3);

// Independent lambda_1 draws; replica r uses rng.substream(r).
std::vector<double> sample_sao_lambda1(double beta, std::size_t reps, const RngState& rng,
                                       const RiccatiConfig& cfg = {}, int threads = 1);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for hits/n at normal quantile z.
Interval wilson_interval(std::size_t hits, std::size_t n, double z = 1.959963984540054);

struct TailEstimate {
  double beta = 2.0;
  double t = 0.0;
  std::size_t reps = 0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  Interval wilson;
  double bound = 0.0;       // exp(-(2/3) beta t^(3/2))
  double horizon = 0.0;     // L used for the p_{-t} runs
  bool upper_only = false;  // zero hits: only wilson.hi is meaningful
};

// P(lambda_1 < -t): fraction of replicas whose flow at lambda = -t explodes
// on [0, L]. Replica r uses rng.substream(r).
TailEstimate lambda1_tail(double beta, double t, std::size_t reps, const RngState& rng,
                          const RiccatiConfig& cfg = {}, int threads = 1);

}  // namespace airy
