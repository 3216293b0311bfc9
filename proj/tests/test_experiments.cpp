#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "airy/error.hpp"
#include "airy/experiments.hpp"
#include "airy/measure.hpp"

using namespace airy;

TEST_SUITE("experiments") {

TEST_CASE("tails report flags and csv") {
  const auto rows = tails_report(2.0, {0.01, 1.0}, 10000, RngState{1});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].estimate.bound == doctest::Approx(std::exp(-(4.0 / 3.0) * std::pow(0.01, 1.5))));
  for (const auto& r : rows) CHECK(r.bound_holds);
  const std::string csv = tails_csv(rows);
  CHECK(csv.rfind("beta,t,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK_THROWS_AS(tails_report(2.0, {1.0}, 100, RngState{1}), DomainError);
}

TEST_CASE("edge spectrum keeps the window") {
  Rng g(RngState{2});
  const EdgeScaledSpectrum s = sample_edge_spectrum(2.0, 512, 2, 10.0, g);
  REQUIRE_FALSE(s.bs.empty());
  for (double b : s.bs) CHECK(b <= 10.0 + 1e-12);
  CHECK(s.bs.front() < 2.0);
}

TEST_CASE("shifted reference target") {
  const SignedMeasure t = shifted_reference_target(7.0, 10.0);
  CHECK(is_admissible(t, 10.0, false));
  CHECK(t.total_mass() == doctest::Approx(nu0_mass(0.0, 3.0) - nu0_mass(0.0, 10.0)).epsilon(1e-12));
  CHECK(shifted_reference_target(0.0, 10.0).empty());
  CHECK_THROWS_AS(shifted_reference_target(10.0, 10.0), DomainError);
}

TEST_CASE("nested events give frequencies nonincreasing as delta shrinks") {
  LdpTrendOptions o;
  o.deltas = {5.5, 4.0, 3.0, 2.0};
  o.k_ladder = {1, 2};
  o.reps = 200;
  o.reference = false;
  const LdpTrendResult r = ldp_trend(SignedMeasure{}, o, RngState{3});
  REQUIRE(r.rows.size() == 8);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t d = 1; d < 4; ++d) CHECK(r.rows[4 * k + d].hits <= r.rows[4 * k + d - 1].hits);
}

TEST_CASE("atypical target is rarer than the typical one at every k") {
  LdpTrendOptions o;
  o.reps = 300;
  const LdpTrendResult zero = ldp_trend(SignedMeasure{}, o, RngState{4});
  const LdpTrendResult shifted = ldp_trend(shifted_reference_target(7.0, o.R), o, RngState{4});
  REQUIRE(zero.reference[0].has_value());
  REQUIRE(shifted.reference[0].has_value());
  CHECK(*zero.reference[0] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(*shifted.reference[0] < *zero.reference[0]);
  for (std::size_t i = 0; i < zero.rows.size(); ++i) {
    CHECK(std::fabs(zero.rows[i].rate_estimate) <= std::max(zero.rows[i].rate_hi - zero.rows[i].rate_lo, 1e-3));
    CHECK(shifted.rows[i].rate_estimate < zero.rows[i].rate_estimate);
    CHECK(shifted.rows[i].n == std::max<std::size_t>(512, shifted.rows[i].k * shifted.rows[i].k * shifted.rows[i].k * shifted.rows[i].k));
  }
}

TEST_CASE("zero hits give a one-sided bound") {
  LdpTrendOptions o;
  o.deltas = {0.05};
  o.k_ladder = {1};
  o.reps = 50;
  o.reference = false;
  const LdpTrendResult r = ldp_trend(SignedMeasure{}, o, RngState{5});
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].hits == 0);
  CHECK(r.rows[0].one_sided);
  CHECK(r.rows[0].rate_estimate == r.rows[0].rate_hi);
  CHECK(std::isinf(r.rows[0].rate_lo));
}

TEST_CASE("results do not depend on the thread count") {
  LdpTrendOptions o;
  o.k_ladder = {2};
  o.reps = 40;
  o.reference = false;
  o.threads = 1;
  const LdpTrendResult a = ldp_trend(SignedMeasure{}, o, RngState{6});
  o.threads = 3;
  const LdpTrendResult b = ldp_trend(SignedMeasure{}, o, RngState{6});
  CHECK(a.rows[0].hits == b.rows[0].hits);
  CHECK(a.rows[0].mean_distance == b.rows[0].mean_distance);
}

}
