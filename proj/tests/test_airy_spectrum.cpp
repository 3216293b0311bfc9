#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "airy/airy_spectrum.hpp"
#include "airy/beta_ensemble.hpp"
#include "airy/error.hpp"
#include "airy/rng.hpp"

using namespace airy;

namespace {

// Zeros of Ai (sign flipped), 15 digits, tests/oracles/log_integrals.py.
constexpr double airy_zero[] = {2.33810741045977, 4.08794944413097, 5.52055982809555};
constexpr double airy_zero_10 = 12.8287767528658;
// Mean of the Tracy-Widom (beta = 2) law.
constexpr double tw2_mean = -1.7710868074;

}  // namespace

TEST_SUITE("airy_spectrum") {

TEST_CASE("closed-form eigenvalues") {
  CHECK(gamma_formula(1) == doctest::Approx(2.3204).epsilon(1e-4));
  CHECK(gamma_formula(2) == doctest::Approx(4.0818).epsilon(1e-4));
  for (int i = 1; i < 50; ++i) CHECK(gamma_formula(i + 1) > gamma_formula(i));
  CHECK_THROWS_AS(gamma_formula(0), DomainError);
}

TEST_CASE("flow thresholds match the Airy zeros") {
  for (int i = 1; i <= 3; ++i) CHECK(std::fabs(gamma_ode(i) - airy_zero[i - 1]) <= 2e-3);
  CHECK(std::fabs(gamma_ode(10) - airy_zero_10) <= 2e-3);
  CHECK(std::fabs(gamma_ode(1) - gamma_formula(1)) <= 0.02);
}

TEST_CASE("formula error shrinks with i at dt = 1e-4") {
  RiccatiConfig fine;
  fine.dt = 1e-4;
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 6; ++i) {
    const double err = std::fabs(gamma_ode(i, fine) - gamma_formula(i));
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("counting function") {
  CHECK(count_n0(-3.0) == 0);
  CHECK(count_n0(0.0) == 0);
  CHECK(std::fabs(static_cast<double>(count_n0(10.0)) - 2.0 / (3.0 * std::numbers::pi) * std::pow(10.0, 1.5)) <= 2.0);
  CHECK(count_n0(gamma_formula(3) + 0.05) == 3);
  for (int i = 1; i <= 10; ++i) CHECK(count_n0(gamma_ode(i) + 0.01) == static_cast<std::size_t>(i));
  // right at a threshold the closed form is not trusted
  CHECK(count_n0_detailed(gamma_formula(4)).ode_fallback);
  CHECK_FALSE(count_n0_detailed(0.5 * (gamma_formula(4) + gamma_formula(5))).ode_fallback);
}

TEST_CASE("spectrum lists") {
  const AirySpectrum f = airy_spectrum(5, SpectrumSource::formula);
  CHECK(f.gammas.size() == 5);
  CHECK(f.gammas[0] == gamma_formula(1));
  const AirySpectrum o = airy_spectrum(3, SpectrumSource::ode);
  CHECK(o.gammas[2] == doctest::Approx(airy_zero[2]).epsilon(1e-3));
}

TEST_CASE("zero noise eigenvalues are the Airy thresholds") {
  const RiccatiConfig cfg;
  Rng g(RngState{1});
  const BrownianPath b = sample_brownian_path(g, cfg.dt, sao_truncation(8.0));
  const SaoSample s = sample_sao_eigenvalues(std::numeric_limits<double>::infinity(), 8.0, b, cfg);
  REQUIRE(s.eigenvalues.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(std::fabs(s.eigenvalues[i] - gamma_ode(i + 1)) <= 1e-2);
}

TEST_CASE("counts grow along the bisection grid on one path") {
  const RiccatiConfig cfg;
  Rng g(RngState{2});
  const BrownianPath b = sample_brownian_path(g, cfg.dt, sao_truncation(10.0));
  const SaoSample s = sample_sao_eigenvalues(2.0, 10.0, b, cfg);
  for (std::size_t i = 1; i < s.eigenvalues.size(); ++i) CHECK(s.eigenvalues[i] > s.eigenvalues[i - 1]);
  std::size_t prev = 0;
  for (double lambda = -6.0; lambda <= 10.0; lambda += 0.25) {
    const std::size_t n = count_blowups(lambda, 0.0, s.L, &b, noise_amplitude(2.0), cfg);
    CHECK(n >= prev);
    prev = n;
  }
  CHECK(prev == s.eigenvalues.size());
}

TEST_CASE("smallest eigenvalue mean near the Tracy-Widom mean") {
  const std::vector<double> l1 = sample_sao_lambda1(2.0, 2000, RngState{3}, {}, 0);
  double m = 0.0;
  for (double v : l1) m += v;
  m /= static_cast<double>(l1.size());
  CHECK(std::fabs(m + tw2_mean) <= 0.1);
}

TEST_CASE("Wilson interval") {
  const Interval w = wilson_interval(5, 100);
  CHECK(w.lo == doctest::Approx(0.02154).epsilon(1e-3));
  CHECK(w.hi == doctest::Approx(0.11175).epsilon(1e-3));
  const Interval z = wilson_interval(0, 1000);
  CHECK(z.lo == 0.0);
  CHECK(z.hi > 0.0);
  CHECK(wilson_interval(1000, 1000).hi == doctest::Approx(1.0));
}

TEST_CASE("tail probability at t = 1 respects the bound") {
  const TailEstimate e = lambda1_tail(2.0, 1.0, 20000, RngState{4}, {}, 0);
  CHECK(e.bound == doctest::Approx(0.2636).epsilon(1e-3));
  CHECK(e.p_hat <= e.bound);
}

TEST_CASE("smaller beta gives a heavier left tail") {
  const TailEstimate b1 = lambda1_tail(1.0, 1.5, 20000, RngState{5}, {}, 0);
  const TailEstimate b2 = lambda1_tail(2.0, 1.5, 20000, RngState{5}, {}, 0);
  CHECK(b2.p_hat < b1.p_hat);
  CHECK(b2.wilson.hi < b1.wilson.lo);
}

TEST_CASE("tail near t = 0 agrees with the beta-ensemble edge") {
  const TailEstimate e = lambda1_tail(2.0, 0.01, 5000, RngState{6}, {}, 0);
  CHECK(e.bound == doctest::Approx(std::exp(-(4.0 / 3.0) * 1e-3)));
  CHECK(e.p_hat <= e.bound);
  // Oracle: P(largest edge-scaled GUE eigenvalue > 0.01) at n = 1024.
  const std::size_t n = 1024, reps = 5000;
  int above = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    Rng g(RngState{7}.substream(r));
    const double top = top_eigenvalues(sample_tridiagonal(2.0, n, g), 1, 1e-9).front();
    above += std::pow(static_cast<double>(n), 1.0 / 6.0) * (top - 2.0 * std::sqrt(static_cast<double>(n))) > 0.01;
  }
  const double q = static_cast<double>(above) / reps;
  const double se = std::sqrt(q * (1 - q) / reps + e.p_hat * (1 - e.p_hat) / reps);
  CHECK(std::fabs(e.p_hat - q) <= 4.0 * se);
}

}
