#pragma once

#include <cstddef>
#include <vector>

#include "airy/rng.hpp"

namespace airy {

class SignedMeasure;

// Symmetric tridiagonal matrix with diagonal `diag` and off-diagonal `offdiag`.
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size n - 1

  std::size_t n() const { return diag.size(); }
  void validate() const;
};

// H_{beta,n}: diagonal sqrt(2/beta) N(0,1), offdiag[i] = chi_{(n-1-i) beta} / sqrt(beta).
TridiagonalMatrix sample_tridiagonal(double beta, std::size_t n, Rng& rng);

// Number of eigenvalues strictly below x (negative inertia of T - x).
std::size_t sturm_count(const TridiagonalMatrix& m, double x);

// [min, max] Gershgorin enclosure of the spectrum.
std::pair<double, double> gershgorin_bounds(const TridiagonalMatrix& m);

// All eigenvalues, decreasing, each to absolute tolerance tol.
std::vector<double> eigenvalues_tridiagonal(const TridiagonalMatrix& m, double tol);

// The `count` largest eigenvalues, decreasing.
std::vector<double> top_eigenvalues(const TridiagonalMatrix& m, std::size_t count, double tol);

// Eigenvalues above `threshold`, decreasing.
std::vector<double> eigenvalues_above(const TridiagonalMatrix& m, double threshold, double tol);

struct EdgeScaledSpectrum {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<double> lambdas;  // decreasing
  std::vector<double> tildes;   // n^(1/6) (lambda - 2 sqrt n), decreasing
  std::vector<double> bs;       // -k^(-2/3) tilde, increasing
};

// lambdas may be the top part of the spectrum only; n is the matrix size.
EdgeScaledSpectrum edge_rescale(std::vector<double> lambdas, std::size_t n, std::size_t k);

// mu_0 density (1/pi) sqrt(x) sqrt(1 - (k/n)^(2/3) x / 4) on [0, 4 (n/k)^(2/3)].
double mu0_density(std::size_t n, std::size_t k, double x);
double mu0_support_end(std::size_t n, std::size_t k);
// mu_0([a, b]) by adaptive quadrature (abs tol 1e-10).
double mu0_mass(std::size_t n, std::size_t k, double a, double b);

struct CountingTriple {
  std::vector<double> grid;
  std::vector<std::size_t> N;  // #{i : b_i <= x}
  std::vector<double> N0;      // k mu_0([0, x])
  std::vector<double> psi;     // N - N0
};

CountingTriple counting_triple(const EdgeScaledSpectrum& spec, const std::vector<double>& grid);

// mu_0 restricted to [0, min(R, support end)] on `cells` uniform cells.
SignedMeasure mu0_cells(std::size_t n, std::size_t k, double R, std::size_t cells = 400);

// (1/k) sum of unit atoms at b_i in [-R, R] minus mu_0 on [-R, R], the latter
// as `cells` uniform cells on [0, min(R, support end)] with exact masses.
SignedMeasure empirical_mu_nk(const EdgeScaledSpectrum& spec, double R, std::size_t cells = 400);
// Same with a precomputed mu0_cells(spec.n, spec.k, R, ...).
SignedMeasure empirical_mu_nk(const EdgeScaledSpectrum& spec, double R, const SignedMeasure& mu0_part);

// Two-regime grid rho_0 < ... < rho_{n0+1}: rho_0 = 0, equal mu_0-mass
// quantiles mu_0([0, rho_i]) = i / (m0p + 1) mu_0([0, r0]) for i <= m0p, and
// k mu_0([r0, rho_{m0p+i}]) = i - 1 above, so rho_{m0p+1} = r0.
std::vector<double> quantile_grid(std::size_t n0, std::size_t m0p, double r0, std::size_t n, std::size_t k);

}  // namespace airy
