#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "airy/error.hpp"
#include "airy/log_energy.hpp"
#include "airy/measure.hpp"
#include "airy/rng.hpp"

using namespace airy;

TEST_SUITE("log_energy") {

// 30-digit values from tests/oracles/log_integrals.py
TEST_CASE("box integrals against quadrature") {
  CHECK(box_log_integral(0.0, 0.0, 1.0) == 4.0 * std::log(2.0) - 6.0);
  CHECK(std::fabs(box_log_integral(0.0, 0.3, 0.25) - -0.3702371422798949) <= 1e-12);
  CHECK(std::fabs(box_log_integral(1.0, 1.05, 0.01) - -0.0012038074603943202) <= 1e-15);
  CHECK(std::fabs(box_log_integral(-2.0, 3.0, 0.5) - 1.6060775242116056) <= 1e-12);
  CHECK(std::fabs(box_log_integral(0.0, 0.9, 0.5) - -0.26762464324095832) <= 1e-12);
  CHECK_THROWS_AS(box_log_integral(0.0, 1.0, 0.0), DomainError);
}

TEST_CASE("box integral is symmetric") {
  Rng g(RngState{1});
  for (int i = 0; i < 200; ++i) {
    const double t1 = 4.0 * g.uniform() - 2.0, t2 = 4.0 * g.uniform() - 2.0, a = g.uniform();
    CHECK(box_log_integral(t1, t2, a) == box_log_integral(t2, t1, a));
  }
}

TEST_CASE("rectangle integrals against quadrature") {
  CHECK(std::fabs(rect_log_integral(0.0, 1.0, 0.0, 1.0) - -1.5) <= 1e-14);
  CHECK(std::fabs(rect_log_integral(0.0, 1.0, 2.0, 3.5) - 1.1734702838075038) <= 1e-13);
  CHECK(std::fabs(rect_log_integral(-1.0, 0.5, 0.0, 2.0) - -0.099036345185184482) <= 1e-13);
  CHECK(rect_log_integral(0.0, 1.0, 2.0, 3.5) == doctest::Approx(rect_log_integral(2.0, 3.5, 0.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("energy of simple measures") {
  CHECK(log_energy(SignedMeasure{}) == 0.0);
  // +1 on [0, 0.1], -1 on [5, 5.1] as densities
  const SignedMeasure dipole({}, {0.0, 0.1, 5.0, 5.1}, {10.0, 0.0, -10.0});
  CHECK(std::fabs(log_energy(dipole) - 10.82397933885553) <= 1e-6);
  CHECK_THROWS_AS(log_energy(SignedMeasure::from_atoms({{0.0, 1.0}})), DomainError);
}

TEST_CASE("energy is nonnegative on zero-mass measures") {
  Rng g(RngState{2});
  for (int trial = 0; trial < 100; ++trial) {
    const int cells = 3 + static_cast<int>(g.next_u64() % 20);
    std::vector<double> br{-3.0 + g.uniform()};
    for (int i = 0; i < cells; ++i) br.push_back(br.back() + 0.05 + g.uniform());
    std::vector<double> masses(cells);
    double s = 0.0;
    for (auto& m : masses) s += (m = sample_gaussian(g));
    for (auto& m : masses) m -= s / cells;
    const SignedMeasure mu = SignedMeasure::from_cell_masses(br, masses);
    CHECK(log_energy(mu) >= -1e-9);
    CHECK(log_energy(mu * 3.0) == doctest::Approx(9.0 * log_energy(mu)).epsilon(1e-10));
  }
}

TEST_CASE("confinement") {
  CHECK(confinement(SignedMeasure::from_atoms({{-1.0, 1.0}})) == doctest::Approx(4.0 / 3.0));
  CHECK(confinement(SignedMeasure({{0.5, 1.0}}, {0.0, 3.0}, {2.0})) == 0.0);
  CHECK(confinement(SignedMeasure({}, {-1.0, 0.0}, {1.0})) == doctest::Approx(8.0 / 15.0));
}

TEST_CASE("rate functional") {
  CHECK(script_I(SignedMeasure{}).value == 0.0);
  Rng g(RngState{3});
  for (int trial = 0; trial < 50; ++trial) {
    // admissible zero-mass: positive mass on the negative axis, removed from nu_0 on [0, 4]
    const double m = 0.5 * g.uniform();
    const double lo = -3.0 * g.uniform() - 0.1;
    const SignedMeasure pos({}, {lo, lo + 0.1}, {m / 0.1});
    const SignedMeasure neg = nu0_restricted(4.0, 40) * (-m / nu0_mass(0.0, 4.0));
    const RateValue v = script_I(pos + neg);
    CHECK(v.energy >= -1e-9);
    CHECK(v.confinement >= -1e-9);
    CHECK(v.value == doctest::Approx(v.energy + v.confinement));
  }
  const SignedMeasure atom_pair = SignedMeasure::from_atoms({{-1.0, 0.5}}) - nu0_restricted(4.0, 40) * (0.5 / nu0_mass(0.0, 4.0));
  CHECK(script_I(atom_pair).smoothing_radius == doctest::Approx(0.1));
  CHECK_THROWS_AS(script_I(nu0_restricted(10.0) * -2.0 + SignedMeasure::from_atoms({{20.0, 2.0 * nu0_mass(0.0, 10.0)}})),
                  DomainError);
  CHECK_THROWS_AS(script_I(SignedMeasure::from_atoms({{1.0, 1.0}})), DomainError);
}

TEST_CASE("xi vanishes on the semicircle support and is nonnegative") {
  for (int i = 0; i <= 40; ++i) CHECK(std::fabs(xi(-2.0 + 0.1 * i)) <= 1e-6);
  for (int i = 0; i < 200; ++i) CHECK(xi(-10.0 + 20.0 * i / 199.0) >= -1e-8);
  CHECK(xi(3.0) > 0.0);
  CHECK(xi(-3.0) == doctest::Approx(xi(3.0)));
}

TEST_CASE("rescaled xi") {
  const std::size_t n = 4096, k = 4;
  const double end = 4.0 * std::pow(1024.0, 2.0 / 3.0);
  for (double x = 0.0; x <= end; x += end / 50.0) CHECK(std::fabs(xi_tilde(x, n, k)) <= 1024.0 * 1e-6);
  CHECK(xi_tilde(3.0, n, k, 5.0) == 0.0);
  for (double x = -5.0; x < 0.0; x += 0.125) {
    const double base = 2.0 / 3.0 * std::pow(-x, 1.5);
    const double v = xi_tilde(x, n, k);
    CHECK(v >= base);
    CHECK(v <= base * (1.0 + 0.25 * std::pow(4.0 / 4096.0, 2.0 / 3.0) * -x));
  }
  CHECK_THROWS_AS(xi_tilde(0.0, n, k, end + 1.0), DomainError);
}

}
