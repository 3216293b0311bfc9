#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "airy/error.hpp"
#include "airy/kr_distance.hpp"
#include "airy/measure.hpp"

using namespace airy;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("measure") {

TEST_CASE("canonical form") {
  const SignedMeasure m({{1.0, 0.5}, {-1.0, 0.25}, {1.0, -0.5}}, {0.0, 1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 1.0, 0.0});
  REQUIRE(m.atoms().size() == 1);
  CHECK(m.atoms()[0] == Atom{-1.0, 0.25});
  CHECK(m.breaks() == std::vector<double>{2.0, 3.0});
  CHECK(m.total_mass() == doctest::Approx(1.25));
  CHECK(m.total_variation() == doctest::Approx(1.25));
  CHECK(m.support_lo() == -1.0);
  CHECK(m.support_hi() == 3.0);
  CHECK((m - m).empty());
  CHECK(((m * 2.0) - m) == m);
  CHECK_THROWS_AS(SignedMeasure({}, {0.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(SignedMeasure({}, {1.0, 0.0}, {1.0}), DomainError);
}

TEST_CASE("closed-interval mass") {
  const SignedMeasure m({{0.0, 1.0}, {2.0, -0.5}}, {-1.0, 1.0}, {0.25});
  CHECK(m.mass_in(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(m.mass_in(-1.0, 2.0) == doctest::Approx(1.0));
  CHECK(m.mass_in(0.5, 1.5) == doctest::Approx(0.125));
}

TEST_CASE("reference density nu_0") {
  for (double R : {1.0, 10.0, 12.5}) {
    const SignedMeasure nu = nu0_restricted(R, 400);
    CHECK(nu.total_mass() == doctest::Approx(2.0 / (3.0 * pi) * std::pow(R, 1.5)).epsilon(1e-13));
    for (std::size_t i = 1; i < nu.cell_count(); ++i) {
      CHECK(nu.cell_mass(i) > 0.0);
      CHECK(nu.cell_mass(i) > nu.cell_mass(i - 1));
    }
  }
  CHECK(nu0_restricted(0.0).empty());
  const std::vector<double> br{-2.0, -1.0, 0.5, 2.0};
  const SignedMeasure on = nu0_on_breaks(br);
  CHECK(on.total_mass() == doctest::Approx(nu0_mass(0.0, 2.0)).epsilon(1e-14));
}

TEST_CASE("restriction") {
  const SignedMeasure m({{-3.0, 1.0}, {2.0, 0.5}}, {-4.0, 0.0, 4.0}, {0.1, 0.2});
  CHECK(restrict(m, 5.0) == m);
  const SignedMeasure r = restrict(m, 2.0);
  CHECK(r.atoms().size() == 1);
  CHECK(r.atoms()[0].x == 2.0);
  CHECK(restrict(SignedMeasure::from_atoms({{2.0 + 1e-9, 1.0}}), 2.0).empty());
  const SignedMeasure rest = m - r;
  for (double a : {-5.0, -3.0, -2.0, 0.0, 1.5, 2.0})
    for (double b : {-2.0, 0.0, 2.0, 3.0, 5.0})
      if (a <= b) CHECK(r.mass_in(a, b) + rest.mass_in(a, b) == doctest::Approx(m.mass_in(a, b)));
  CHECK(rest.mass_in(-2.0 + 1e-9, 2.0 - 1e-9) == doctest::Approx(0.0));
  CHECK(r.total_mass() == doctest::Approx(0.5 + 0.1 * 2.0 + 0.2 * 2.0));
}

TEST_CASE("empirical nu_{k;R}") {
  const std::vector<double> none{-50.0, 40.0};
  CHECK(empirical_nu_kR(none, 1, 10.0) == nu0_restricted(10.0) * -1.0);
  const std::vector<double> zero{0.0};
  const SignedMeasure m = empirical_nu_kR(zero, 1, 10.0);
  REQUIRE(m.atoms().size() == 1);
  CHECK(m.atoms()[0] == Atom{0.0, 1.0});
  CHECK(is_admissible(m, 10.0, false));
  const std::vector<double> eigs{-3.0, -1.0, 0.5, 2.0, 7.5, 30.0};
  const SignedMeasure e = empirical_nu_kR(eigs, 3, 10.0);
  CHECK(e.atom_mass() == doctest::Approx(5.0 / 3.0));
  CHECK(is_admissible(e, 10.0, false));
  CHECK_THROWS_AS(empirical_nu_kR(eigs, 3, 5.0), DomainError);
}

TEST_CASE("admissibility") {
  CHECK(is_admissible(SignedMeasure{}, 10.0, false));
  CHECK(is_admissible(SignedMeasure{}, 10.0, true));
  CHECK_FALSE(is_admissible(nu0_restricted(10.0) * -2.0, 10.0, false));
  CHECK_FALSE(admissibility_violation(nu0_restricted(10.0) * -2.0, 10.0, false).empty());
  CHECK_FALSE(is_admissible(SignedMeasure::from_atoms({{1.0, -0.1}}), 10.0, false));
  CHECK_FALSE(is_admissible(SignedMeasure::from_atoms({{1.0, 0.1}}), 10.0, true));
  CHECK(is_admissible(nu0_restricted(10.0) * -1.0, 10.0, false));
}

TEST_CASE("smoothing atoms into boxes") {
  const std::vector<double> one{0.0};
  const SignedMeasure box = smooth_atoms(one, 0.1, 1.0);
  REQUIRE(box.cell_count() == 1);
  CHECK(box.values()[0] == doctest::Approx(5.0));
  const std::vector<double> pts{-1.0, -0.95, 0.3, 2.0};
  const SignedMeasure s = smooth_atoms(pts, 0.1, 0.25);
  CHECK(s.total_mass() == doctest::Approx(1.0));
  const SignedMeasure atoms = SignedMeasure::from_atoms({{-1.0, 0.25}, {-0.95, 0.25}, {0.3, 0.25}, {2.0, 0.25}});
  CHECK(smooth_atoms(atoms, 0.1) == s);
  // transport of every atom by at most h
  CHECK(kr_distance(s, atoms, 5.0, 0.005).value <= 0.1 * atoms.total_variation() + 1e-12);
  CHECK_THROWS_AS(smooth_atoms(pts, 0.0, 1.0), DomainError);
}

}
