#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "airy/beta_ensemble.hpp"
#include "airy/error.hpp"
#include "airy/measure.hpp"
#include "airy/rng.hpp"
#include "airy/verification.hpp"

using namespace airy;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> dense_eigenvalues(const TridiagonalMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.n());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = m.diag[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = m.offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(v.rbegin(), v.rend());
  return v;
}

}  // namespace

TEST_SUITE("beta_ensemble") {

TEST_CASE("one by one matrix") {
  Rng g(RngState{1});
  const TridiagonalMatrix m = sample_tridiagonal(2.0, 1, g);
  CHECK(m.offdiag.empty());
  CHECK(eigenvalues_tridiagonal(m, 1e-12).front() == doctest::Approx(m.diag[0]).epsilon(1e-12));
}

TEST_CASE("off-diagonal second moments") {
  const double beta = 2.0;
  const std::size_t n = 10;
  const int reps = 20000;
  double s0 = 0.0, s5 = 0.0;
  for (int r = 0; r < reps; ++r) {
    Rng g(RngState{2}.substream(r));
    const TridiagonalMatrix m = sample_tridiagonal(beta, n, g);
    s0 += m.offdiag[0] * m.offdiag[0];
    s5 += m.offdiag[5] * m.offdiag[5];
  }
  // E offdiag[i]^2 = (n - 1 - i) beta / beta, sd of the mean about sqrt(2 (n-1-i) / beta / reps)
  CHECK(std::fabs(s0 / reps - 9.0) <= 4.0 * std::sqrt(9.0 / reps));
  CHECK(std::fabs(s5 / reps - 4.0) <= 4.0 * std::sqrt(4.0 / reps));
}

TEST_CASE("two by two closed form") {
  TridiagonalMatrix m{{1.3, -0.4}, {0.7}};
  const double tr = 0.9, det = 1.3 * -0.4 - 0.49;
  const double disc = std::sqrt(tr * tr - 4.0 * det);
  const auto e = eigenvalues_tridiagonal(m, 1e-14);
  CHECK(std::fabs(e[0] - (tr + disc) / 2.0) <= 1e-12);
  CHECK(std::fabs(e[1] - (tr - disc) / 2.0) <= 1e-12);
}

TEST_CASE("matches a dense symmetric solver") {
  for (double beta : {1.0, 2.0, 4.0}) {
    Rng g(RngState{3}.substream(static_cast<std::uint64_t>(beta)));
    const TridiagonalMatrix m = sample_tridiagonal(beta, 200, g);
    const auto ours = eigenvalues_tridiagonal(m, 1e-11);
    const auto ref = dense_eigenvalues(m);
    REQUIRE(ours.size() == ref.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::fabs(ours[i] - ref[i]));
    CHECK(worst <= 1e-9);
    const auto [lo, hi] = gershgorin_bounds(m);
    CHECK(ref.back() >= lo);
    CHECK(ref.front() <= hi);
    CHECK(sturm_count(m, ref[100] + 1e-7) == 100);
    const auto top = top_eigenvalues(m, 5, 1e-11);
    for (int i = 0; i < 5; ++i) CHECK(std::fabs(top[i] - ref[i]) <= 1e-9);
    const auto above = eigenvalues_above(m, ref[9] - 1e-7, 1e-11);
    CHECK(above.size() == 10);
  }
}

TEST_CASE("rejects malformed matrices") {
  TridiagonalMatrix bad{{1.0, 2.0}, {}};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  Rng g(RngState{1});
  CHECK_THROWS_AS(sample_tridiagonal(0.0, 10, g), DomainError);
}

TEST_CASE("bulk follows the semicircle") {
  Rng g(RngState{4});
  const std::size_t n = 2000;
  auto e = eigenvalues_tridiagonal(sample_tridiagonal(2.0, n, g), 1e-6);
  for (auto& v : e) v /= std::sqrt(static_cast<double>(n));
  CHECK(ks_statistic(e, semicircle_cdf) <= 0.05);
}

TEST_CASE("edge rescaling") {
  const std::size_t n = 4096;
  const double edge = 2.0 * std::sqrt(static_cast<double>(n));
  const EdgeScaledSpectrum s = edge_rescale({edge, edge - 0.5, edge - 3.0}, n, 4);
  CHECK(s.tildes[0] == 0.0);
  CHECK(s.bs[0] == 0.0);
  for (std::size_t i = 0; i < 3; ++i) CHECK(s.bs[i] * std::pow(4.0, 2.0 / 3.0) + s.tildes[i] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(edge_rescale({1.0, 2.0}, n, 1), DomainError);
}

TEST_CASE("mu_0 density and mass") {
  const std::size_t n = 4096, k = 4;
  CHECK(mu0_density(n, k, -1.0) == 0.0);
  const double end = mu0_support_end(n, k);
  CHECK(end == doctest::Approx(4.0 * std::pow(1024.0, 2.0 / 3.0)));
  // int_0^end of (1/pi) sqrt(x) sqrt(1 - x/end) = end^(3/2) / 8, so k times it is n
  CHECK(std::fabs(k * mu0_mass(n, k, 0.0, end) - static_cast<double>(n)) <= 1e-8 * n);
  for (double x = 0.0; x < end; x += end / 97.0) CHECK(mu0_density(n, k, x) <= std::sqrt(x) / pi + 1e-15);
}

TEST_CASE("counting triple") {
  Rng g(RngState{5});
  const std::size_t n = 300, k = 2;
  const EdgeScaledSpectrum s = edge_rescale(eigenvalues_tridiagonal(sample_tridiagonal(2.0, n, g), 1e-10), n, k);
  const double below = s.bs.front() - 1.0;
  const CountingTriple ct = counting_triple(s, {std::min(below, -1.0), 1.0, s.bs.back()});
  CHECK(ct.N[0] == 0);
  CHECK(ct.N0[0] == 0.0);
  CHECK(ct.psi[0] == 0.0);
  CHECK(ct.N[2] == n);
  const std::size_t nb = 1 << 20, kb = 1;
  EdgeScaledSpectrum big;
  big.n = nb;
  big.k = kb;
  const CountingTriple c2 = counting_triple(big, {3.0});
  CHECK(c2.N0[0] == doctest::Approx(2.0 / (3.0 * pi) * std::pow(3.0, 1.5)).epsilon(1e-3));
}

TEST_CASE("empirical measure mass identity and admissibility") {
  Rng g(RngState{6});
  const std::size_t n = 100, k = 1;
  const EdgeScaledSpectrum s = edge_rescale(eigenvalues_tridiagonal(sample_tridiagonal(2.0, n, g), 1e-12), n, k);
  const double R = mu0_support_end(n, k) + 5.0;
  REQUIRE(s.bs.back() < R);
  const SignedMeasure mu = empirical_mu_nk(s, R, 2000);
  CHECK(std::fabs(mu.total_mass()) <= 1e-8);
  CHECK(is_admissible(mu, R, false, 1e-12));
  const SignedMeasure window = empirical_mu_nk(s, 10.0);
  CHECK(is_admissible(window, 10.0, false, 1e-12));
  CHECK_THROWS_AS(empirical_mu_nk(s, 5.0), DomainError);
}

TEST_CASE("two-regime quantile grid") {
  const std::size_t n = 4096, k = 4, n0 = 30, m0p = 6;
  const double r0 = 2.0;
  const auto rho = quantile_grid(n0, m0p, r0, n, k);
  REQUIRE(rho.size() == n0 + 2);
  CHECK(rho[0] == 0.0);
  CHECK(rho[m0p + 1] == r0);
  for (std::size_t i = 1; i < rho.size(); ++i) CHECK(rho[i] > rho[i - 1]);
  for (std::size_t i = m0p + 1; i + 1 < rho.size(); ++i) CHECK(rho[i + 1] - rho[i] <= 2.0 * pi / k);
  CHECK(mu0_mass(n, k, 0.0, rho[3]) == doctest::Approx(3.0 / 7.0 * mu0_mass(n, k, 0.0, r0)).epsilon(1e-9));
  CHECK_THROWS_AS(quantile_grid(n0, m0p, 0.5, n, k), DomainError);
}

}
