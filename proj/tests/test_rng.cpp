#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "airy/error.hpp"
#include "airy/rng.hpp"

using namespace airy;

TEST_SUITE("rng") {

TEST_CASE("fixed state reproduces the sequence") {
  Rng a(RngState{7, 3, 0}), b(RngState{7, 3, 0});
  for (int i = 0; i < 100; ++i) CHECK(sample_gaussian(a) == sample_gaussian(b));
  Rng c(RngState{7}.substream(1)), d(RngState{7}.substream(2));
  int same = 0;
  for (int i = 0; i < 100; ++i) same += c() == d();
  CHECK(same < 3);
  CHECK(RngState{7}.substream(1) == RngState{7}.substream(1));
  CHECK_FALSE(RngState{7}.substream(1) == RngState{8}.substream(1));
}

TEST_CASE("uniform stays inside the open interval") {
  Rng g(RngState{1});
  for (int i = 0; i < 100000; ++i) {
    const double u = g.uniform();
    REQUIRE(u > 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("gaussian moments at 10^6 draws") {
  Rng g(RngState{2024});
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_gaussian(g);
    s += x;
    s2 += x * x;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::fabs(mean) <= 4.0 / 1000.0);
  CHECK(std::fabs(var - 1.0) <= 0.01);
}

TEST_CASE("chi second moment") {
  for (double t : {1.0, 2.5, 10.0}) {
    Rng g(RngState{11}.substream(static_cast<std::uint64_t>(t * 10)));
    const int n = 100000;
    std::vector<double> sq(n);
    for (auto& v : sq) {
      const double x = sample_chi(g, t);
      v = x * x;
    }
    double m = 0.0, m2 = 0.0;
    for (double v : sq) m += v;
    m /= n;
    for (double v : sq) m2 += (v - m) * (v - m);
    const double se = std::sqrt(m2 / (n - 1) / n);
    CHECK(std::fabs(m - t) <= 3.0 * se);
  }
}

TEST_CASE("chi_2 squared is exponential with median 2 log 2") {
  Rng g(RngState{5});
  std::vector<double> sq(100001);
  for (auto& v : sq) {
    const double x = sample_chi(g, 2.0);
    v = x * x;
  }
  std::nth_element(sq.begin(), sq.begin() + 50000, sq.end());
  // standard error of the median is about 2 / (2 sqrt n) * 2 = 0.006
  CHECK(sq[50000] == doctest::Approx(2.0 * std::log(2.0)).epsilon(0.02));
}

TEST_CASE("chi rejects nonpositive degrees") {
  Rng g(RngState{1});
  CHECK_THROWS_AS(sample_chi(g, 0.0), DomainError);
  CHECK_THROWS_AS(sample_chi(g, -1.0), DomainError);
}

TEST_CASE("brownian path size and variance") {
  Rng g(RngState{3});
  CHECK(sample_brownian_path(g, 0.01, 1.0).size() == 100);
  CHECK(brownian_step_count(0.01, 1.0) == 100);
  const int paths = 10000;
  double s2 = 0.0;
  for (int p = 0; p < paths; ++p) {
    Rng r(RngState{3}.substream(p));
    const BrownianPath b = sample_brownian_path(r, 0.01, 1.0);
    const double end = b.value_at(b.size());
    s2 += end * end;
  }
  CHECK(std::fabs(s2 / paths - 1.0) <= 0.05);
}

TEST_CASE("same stream gives bitwise identical increments") {
  Rng a(RngState{9, 4}), b(RngState{9, 4});
  const BrownianPath pa = sample_brownian_path(a, 1e-3, 2.0);
  const BrownianPath pb = sample_brownian_path(b, 1e-3, 2.0);
  REQUIRE(pa.size() == pb.size());
  CHECK(std::equal(pa.increments().begin(), pa.increments().end(), pb.increments().begin()));
  CHECK(pa.origin() == (RngState{9, 4}));
}

}
