#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace airy {

struct Atom {
  double x = 0.0;
  double mass = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

// Signed measure on the line: point masses plus a piecewise-constant density
// on contiguous cells [breaks[i], breaks[i+1]) with values[i]. Canonical form:
// atoms sorted with distinct locations and nonzero masses, no leading or
// trailing zero cells, no two adjacent zero cells. support() is the smallest
// closed interval holding every atom and cell.
class SignedMeasure {
 public:
  SignedMeasure() = default;
  SignedMeasure(std::vector<Atom> atoms, std::vector<double> breaks, std::vector<double> values);

  static SignedMeasure from_atoms(std::vector<Atom> atoms);
  // Cells [breaks[i], breaks[i+1]) holding the given masses.
  static SignedMeasure from_cell_masses(std::vector<double> breaks, std::span<const double> masses);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<double>& breaks() const { return breaks_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t cell_count() const { return values_.size(); }
  double cell_mass(std::size_t i) const { return values_[i] * (breaks_[i + 1] - breaks_[i]); }

  bool empty() const { return atoms_.empty() && values_.empty(); }
  double support_lo() const;
  double support_hi() const;

  double total_mass() const;
  double total_variation() const;
  double atom_mass() const;
  // Mass of the closed interval [a, b].
  double mass_in(double a, double b) const;

  SignedMeasure operator+(const SignedMeasure& other) const;
  SignedMeasure operator-(const SignedMeasure& other) const;
  SignedMeasure operator*(double c) const;

  friend bool operator==(const SignedMeasure&, const SignedMeasure&) = default;

 private:
  void canonicalize();

  std::vector<Atom> atoms_;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

// nu_0 = (1/pi) sqrt(x) dx on [0, R] as `cells` uniform cells with exact
// masses (2 / 3 pi)(b^(3/2) - a^(3/2)).
SignedMeasure nu0_restricted(double R, std::size_t cells = 400);
// nu_0 on the cells of an arbitrary break grid (clipped to x >= 0).
SignedMeasure nu0_on_breaks(std::span<const double> breaks);
double nu0_mass(double a, double b);

// Restriction to the closed interval [-R, R].
SignedMeasure restrict(const SignedMeasure& mu, double R);

// (1/k) sum of atoms at k^(-2/3) lambda_i in [-R, R] minus nu_{0;R}.
SignedMeasure empirical_nu_kR(std::span<const double> eigs, std::size_t k, double R,
                              std::size_t cells = 400);

// Atoms >= 0, every density cell satisfies mass + nu_0(cell) >= -tol, and
// with zero_mass also |mu(R)| <= 1e-10. R is the window of nu_{0;R} (use
// +infinity for the unrestricted cone).
bool is_admissible(const SignedMeasure& mu, double R, bool zero_mass, double tol = 1e-12);
// Empty when admissible, else a description of the first violated constraint.
std::string admissibility_violation(const SignedMeasure& mu, double R, bool zero_mass,
                                    double tol = 1e-12);

// Each point becomes a uniform box of mass mass_each on [x - h, x + h].
SignedMeasure smooth_atoms(std::span<const double> points, double half_width, double mass_each);
// Replaces every atom of mu by a box of half-width h with the same mass.
SignedMeasure smooth_atoms(const SignedMeasure& mu, double half_width);

}  // namespace airy
