#include "airy/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "airy/error.hpp"
#include "airy/kr_distance.hpp"
#include "airy/parallel.hpp"

namespace airy {

std::vector<TailRow> tails_report(double beta, const std::vector<double>& t_ladder, std::size_t reps,
                                  const RngState& rng, const RiccatiConfig& cfg, int threads) {
  if (reps < 10000) throw DomainError("tails_report: need at least 10^4 replicas");
  std::vector<TailRow> rows;
  for (std::size_t i = 0; i < t_ladder.size(); ++i) {
    TailRow row;
    row.estimate = lambda1_tail(beta, t_ladder[i], reps, rng.substream(i), cfg, threads);
    row.bound_holds = row.estimate.p_hat <= row.estimate.bound;
    rows.push_back(row);
  }
  return rows;
}

std::string tails_csv(const std::vector<TailRow>& rows) {
  std::ostringstream out;
  out.precision(17);
  out << "beta,t,reps,hits,p_hat,wilson_lo,wilson_hi,bound,bound_holds,horizon\n";
  for (const TailRow& r : rows) {
    const TailEstimate& e = r.estimate;
    out << e.beta << ',' << e.t << ',' << e.reps << ',' << e.hits << ',' << e.p_hat << ',' << e.wilson.lo
        << ',' << e.wilson.hi << ',' << e.bound << ',' << (r.bound_holds ? "true" : "false") << ','
        << e.horizon << '\n';
  }
  return out.str();
}

EdgeScaledSpectrum sample_edge_spectrum(double beta, std::size_t n, std::size_t k, double R, Rng& rng) {
  const TridiagonalMatrix m = sample_tridiagonal(beta, n, rng);
  const double nn = static_cast<double>(n);
  const double threshold =
      2.0 * std::sqrt(nn) - R * std::pow(static_cast<double>(k), 2.0 / 3.0) * std::pow(nn, -1.0 / 6.0);
  std::vector<double> top = eigenvalues_above(m, threshold, 1e-10 * std::max(1.0, std::sqrt(nn)));
  return edge_rescale(std::move(top), n, k);
}

SignedMeasure shifted_reference_target(double shift, double R, std::size_t cells) {
  if (!(shift >= 0.0 && shift < R)) throw DomainError("shifted_reference_target: need 0 <= shift < R");
  std::vector<double> breaks(cells + 1), masses(cells);
  for (std::size_t i = 0; i <= cells; ++i)
    breaks[i] = shift + (R - shift) * static_cast<double>(i) / static_cast<double>(cells);
  breaks.back() = R;
  for (std::size_t i = 0; i < cells; ++i) masses[i] = nu0_mass(breaks[i] - shift, breaks[i + 1] - shift);
  return SignedMeasure::from_cell_masses(std::move(breaks), masses) - nu0_restricted(R, cells);
}

LdpTrendResult ldp_trend(const SignedMeasure& target, const LdpTrendOptions& o, const RngState& rng) {
  if (o.deltas.empty() || o.k_ladder.empty() || o.reps == 0) throw DomainError("ldp_trend: empty ladder");
  if (!is_admissible(target, o.R, false, 1e-12))
    throw DomainError("ldp_trend: target is not admissible: " + admissibility_violation(target, o.R, false));
  LdpTrendResult res;
  res.options = o;
  for (std::size_t k : o.k_ladder) {
    if (k == 0) throw DomainError("ldp_trend: k must be positive");
    const std::size_t n = std::max(o.min_n, k * k * k * k);
    const SignedMeasure mu0 = mu0_cells(n, k, o.R, o.cells);
    const RngState rung = rng.substream(k);
    std::vector<double> dist(o.reps);
    parallel_for(o.reps, o.threads, [&](std::size_t r) {
      Rng gen(rung.substream(r));
      const EdgeScaledSpectrum spec = sample_edge_spectrum(o.beta, n, k, o.R, gen);
      dist[r] = kr_distance(empirical_mu_nk(spec, o.R, mu0), target, o.R, o.grid_step).value;
    });
    double mean = 0.0;
    for (double d : dist) mean += d;
    mean /= static_cast<double>(o.reps);
    const double k2 = static_cast<double>(k * k);
    for (double delta : o.deltas) {
      LdpTrendRow row;
      row.k = k;
      row.n = n;
      row.delta = delta;
      row.reps = o.reps;
      row.hits = static_cast<std::size_t>(std::count_if(dist.begin(), dist.end(), [&](double d) { return d <= delta; }));
      row.p_hat = static_cast<double>(row.hits) / static_cast<double>(o.reps);
      row.wilson = wilson_interval(row.hits, o.reps);
      row.one_sided = row.hits == 0;
      row.rate_hi = std::log(row.wilson.hi) / k2;
      row.rate_lo = row.wilson.lo > 0.0 ? std::log(row.wilson.lo) / k2 : -std::numeric_limits<double>::infinity();
      row.rate_estimate = row.one_sided ? row.rate_hi : std::log(row.p_hat) / k2;
      row.mean_distance = mean;
      res.rows.push_back(row);
    }
  }
  for (double delta : o.deltas) {
    if (!o.reference) {
      res.reference.emplace_back();
      res.reference_errors.emplace_back();
      continue;
    }
    try {
      const RateSolution sol = minimize_I_R(target, delta, o.R, std::max(o.S, o.R), o.rate);
      res.reference.emplace_back(-0.5 * o.beta * sol.value);
      res.reference_errors.emplace_back();
    } catch (const NumericalError& e) {
      res.reference.emplace_back();
      res.reference_errors.emplace_back(e.what());
    }
  }
  return res;
}

}  // namespace airy
