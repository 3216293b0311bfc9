#include "airy/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "json.hpp"
#include "airy/airy_spectrum.hpp"
#include "airy/beta_ensemble.hpp"
#include "airy/error.hpp"
#include "airy/experiments.hpp"
#include "airy/kr_distance.hpp"
#include "airy/log_energy.hpp"
#include "airy/measure.hpp"
#include "airy/parallel.hpp"
#include "airy/rate_function.hpp"
#include "airy/riccati.hpp"
#include "airy/rng.hpp"
#include "airy/serialize.hpp"

namespace airy {

namespace {

constexpr double pi = std::numbers::pi;

std::string format(const char* fmt, ...) {
  char buf[1024];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

struct Outcome {
  bool ok = true;
  std::string detail;
  bool known_unattainable = false;
};

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

bool full(const VerifyOptions& o) { return o.scale == VerifyScale::full; }

std::string data_path(const VerifyOptions& o, const char* name) {
  std::string dir = o.data_dir.empty() ? std::string(".") : o.data_dir;
  return dir + "/" + name;
}

// 1 ---------------------------------------------------------------------------

Outcome blowup_bracket(const VerifyOptions&) {
  const RiccatiConfig cfg;
  const double lambda1s[] = {0.0, 3.0, 7.0, 12.0};
  const double widths[] = {11.0, 15.0, 20.0, 28.0, 40.0};
  const double extra[] = {0.0, 2.5, 6.0};
  Outcome out;
  int points = 0, inside = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 5; ++b) {
      const double l1 = lambda1s[a], l2 = l1 + widths[b];
      const double lambda = 2.0 * l2 - l1 + extra[(a + b) % 3];
      const double n = static_cast<double>(count_blowups(lambda, l1, l2, nullptr, 0.0, cfg));
      const double root = std::sqrt(lambda - l1) * (l2 - l1);
      const double lo = root / (4.0 * pi), hi = root / pi;
      ++points;
      if (n >= lo && n <= hi) ++inside;
      else out.detail += format(" miss(l1=%g,l2=%g,l=%g,N=%g)", l1, l2, lambda, n);
      worst = std::min(worst, std::min(n - lo, hi - n));
    }
  out.ok = inside == points;
  out.detail = format("%d/%d counts inside, smallest margin %.2f", inside, points, worst) + out.detail;
  return out;
}

// 2 ---------------------------------------------------------------------------

Outcome gap_bracket(const VerifyOptions&) {
  const RiccatiConfig cfg;
  const double threshold = std::pow(4.0 * pi, 2.0 / 3.0);
  Outcome out;
  int gaps = 0, inside = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (double lambda : {8.0, 15.0, 30.0, 60.0, 100.0}) {
    const RiccatiTrace tr = integrate_q(lambda, 0.0, lambda, cfg);
    std::vector<double> tau{0.0};
    tau.insert(tau.end(), tr.blowups.begin(), tr.blowups.end());
    for (std::size_t j = 0; j + 1 < tau.size(); ++j) {
      const double room = lambda - tau[j];
      if (room < threshold) continue;
      const double gap = tau[j + 1] - tau[j];
      const double lo = pi / std::sqrt(room);
      const double hi = pi / std::sqrt(room - 2.0 * pi / std::sqrt(room));
      ++gaps;
      if (gap >= lo && gap <= hi) ++inside;
      else out.detail += format(" miss(l=%g,tau=%.4f,gap=%.5f)", lambda, tau[j], gap);
      worst = std::min(worst, std::min(gap - lo, hi - gap));
    }
  }
  out.ok = gaps > 0 && inside == gaps;
  out.detail = format("%d/%d gaps inside, smallest margin %.2e", inside, gaps, worst) + out.detail;
  return out;
}

// 3 ---------------------------------------------------------------------------

Outcome airy_eigenvalues(const VerifyOptions&) {
  Outcome out;
  double err1 = 0.0, err_rest = 0.0, worst_r = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double g = gamma_ode(i);
    const double err = std::fabs(g - gamma_formula(i));
    const double r = 2.0 / (3.0 * pi) * std::pow(g, 1.5) - (i - 0.25);
    worst_r = std::max(worst_r, i * std::fabs(r));
    if (i == 1) err1 = err;
    if (i >= 3) err_rest = std::max(err_rest, err);
  }
  out.ok = err1 <= 0.02 && err_rest <= 0.005 && worst_r <= 0.05;
  out.detail = format("|err| at i=1 %.2e, max for i>=3 %.2e, max i|R(i)| %.4f", err1, err_rest, worst_r);
  return out;
}

// 4 ---------------------------------------------------------------------------

Outcome n0_asymptotic(const VerifyOptions&) {
  const RiccatiConfig cfg;
  Outcome out;
  double worst = 0.0;
  for (double x : {5.0, 10.0, 20.0, 40.0}) {
    const double weyl = 2.0 / (3.0 * pi) * std::pow(x, 1.5);
    const double closed = static_cast<double>(count_n0(x));
    const double flow = static_cast<double>(count_blowups(x, 0.0, sao_truncation(x), nullptr, 0.0, cfg));
    const double dev = std::max(std::fabs(closed - weyl), std::fabs(flow - weyl));
    worst = std::max(worst, dev);
    if (closed != flow) out.ok = false;
    out.detail += format(" x=%g:N0=%g/%g", x, closed, flow);
  }
  out.ok = out.ok && worst <= 2.0;
  out.detail = format("max |N0 - (2/3pi)x^1.5| %.3f;", worst) + out.detail;
  return out;
}

// 5 ---------------------------------------------------------------------------

Outcome chi_sampler(const VerifyOptions& o, const RngState& rng) {
  const std::size_t draws = full(o) ? 100000 : 20000;
  Outcome out;
  std::uint64_t stream = 0;
  for (double t : {1.0, 2.5, 10.0, 40.0}) {
    Rng gen(rng.substream(stream++));
    std::vector<double> sq(draws);
    for (auto& v : sq) {
      const double x = sample_chi(gen, t);
      v = x * x;
    }
    const double m = mean_of(sq);
    const double se = std::sqrt(variance_of(sq) / static_cast<double>(draws));
    const double z = std::fabs(m - t) / se;
    if (z > 3.0) out.ok = false;
    out.detail += format("t=%g z=%.2f; ", t, z);
  }
  Rng gen(rng.substream(stream));
  std::vector<double> x(draws);
  for (auto& v : x) v = sample_chi(gen, 3.0);
  const double ks = ks_statistic(std::move(x), [](double y) { return chi_cdf(3.0, y); });
  out.ok = out.ok && ks <= 0.01;
  out.detail += format("KS(t=3) %.4f", ks);
  return out;
}

// 6 ---------------------------------------------------------------------------

Outcome semicircle(const VerifyOptions& o, const RngState& rng) {
  const std::size_t n = 2000;
  const std::size_t draws = full(o) ? 20 : 3;
  Outcome out;
  std::uint64_t stream = 0;
  for (double beta : {1.0, 2.0, 4.0}) {
    std::vector<double> err(draws);
    const RngState base = rng.substream(stream++);
    parallel_for(draws, o.threads, [&](std::size_t d) {
      Rng gen(base.substream(d));
      std::vector<double> eig = eigenvalues_tridiagonal(sample_tridiagonal(beta, n, gen), 1e-6);
      std::sort(eig.begin(), eig.end());
      const double scale = 1.0 / std::sqrt(static_cast<double>(n));
      double sup = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double f = semicircle_cdf(eig[i] * scale);
        sup = std::max({sup, std::fabs(f - static_cast<double>(i) / n), std::fabs(f - static_cast<double>(i + 1) / n)});
      }
      err[d] = sup;
    });
    const double avg = mean_of(err);
    if (avg > 0.05) out.ok = false;
    out.detail += format("beta=%g mean sup error %.4f; ", beta, avg);
  }
  return out;
}

// 7 ---------------------------------------------------------------------------

Outcome edge_agreement(const VerifyOptions& o, const RngState& rng) {
  const std::size_t n = 4096;
  const std::size_t reps = full(o) ? 2000 : 300;
  std::vector<double> gbe(reps);
  const RngState gbe_rng = rng.substream(0);
  parallel_for(reps, o.threads, [&](std::size_t r) {
    Rng gen(gbe_rng.substream(r));
    const double top = top_eigenvalues(sample_tridiagonal(2.0, n, gen), 1, 1e-9).front();
    const double nd = static_cast<double>(n);
    gbe[r] = -std::pow(nd, 1.0 / 6.0) * (top - 2.0 * std::sqrt(nd));
  });
  RiccatiConfig cfg;
  cfg.dt = 1e-3;
  std::vector<double> sao = sample_sao_lambda1(2.0, reps, rng.substream(1), cfg, o.threads);
  const double ks = ks_two_sample(gbe, sao);
  const double diff = std::fabs(mean_of(gbe) - mean_of(sao));
  const double se = std::sqrt(variance_of(gbe) / reps + variance_of(sao) / reps);
  Outcome out;
  out.ok = ks <= 0.1 && diff <= 3.0 * se;
  out.detail = format("KS %.4f, means %.4f vs %.4f (diff %.4f, 3 SE %.4f)", ks, mean_of(gbe), mean_of(sao),
                      diff, 3.0 * se);
  return out;
}

// 8 ---------------------------------------------------------------------------

Outcome tail_bound(const VerifyOptions& o, const RngState& rng) {
  const std::size_t reps = full(o) ? 200000 : 20000;
  const std::vector<double> ts{1.0, 1.5, 2.0};
  const auto rows = tails_report(2.0, ts, reps, rng, RiccatiConfig{}, o.threads);
  Outcome out;
  bool bounds = true;
  for (const auto& row : rows) {
    const TailEstimate& e = row.estimate;
    const bool scarce = e.hits < 10;
    const double used = scarce ? e.wilson.hi : e.p_hat;
    if (!(used <= e.bound)) bounds = false;
    out.detail += format("t=%g p=%.3e (%zu hits%s) bound %.4f; ", e.t, e.p_hat, e.hits,
                         scarce ? ", Wilson upper" : "", e.bound);
  }
  const double p1 = rows[0].estimate.p_hat, p2 = rows[2].estimate.p_hat;
  const double ratio = (p1 > 0.0 && p2 > 0.0) ? std::log(p2) / std::log(p1) : std::nan("");
  const bool ratio_ok = ratio >= 1.6;
  out.detail += format("log p(2)/log p(1) = %.3f (need >= 1.6)", ratio);
  out.ok = bounds && ratio_ok;
  // The exact Tracy-Widom(2) probabilities give a ratio of about 1.52, so the
  // ratio part cannot pass at any replica count.
  out.known_unattainable = bounds && !ratio_ok;
  return out;
}

// 9 ---------------------------------------------------------------------------

SignedMeasure random_grid_measure(Rng& gen, double R, double step) {
  const auto nodes = static_cast<std::uint64_t>(std::llround(2.0 * R / step));
  auto node = [&] { return -R + step * static_cast<double>(gen.next_u64() % (nodes + 1)); };
  std::vector<Atom> atoms;
  for (std::uint64_t i = 0, m = gen.next_u64() % 5; i < m; ++i) atoms.push_back({node(), 2.0 * gen.uniform() - 1.0});
  std::vector<double> breaks, values;
  if (const std::uint64_t cells = gen.next_u64() % 9; cells > 0) {
    while (breaks.size() < cells + 1) {
      const double x = node();
      if (std::find(breaks.begin(), breaks.end(), x) == breaks.end()) breaks.push_back(x);
    }
    std::sort(breaks.begin(), breaks.end());
    for (std::uint64_t i = 0; i < cells; ++i) values.push_back(0.5 * sample_gaussian(gen));
  }
  return SignedMeasure(std::move(atoms), std::move(breaks), std::move(values));
}

Outcome kr_checks(const VerifyOptions& o, const RngState& rng) {
  Outcome out;
  {
    Rng gen(rng.substream(0));
    const double R = 5.0, step = 0.01;
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = -R + step * static_cast<double>(gen.next_u64() % 1001);
      const double y = -R + step * static_cast<double>(gen.next_u64() % 1001);
      const double d = kr_distance(SignedMeasure::from_atoms({{x, 1.0}}), SignedMeasure::from_atoms({{y, 1.0}}),
                                   R, step).value;
      worst = std::max(worst, std::fabs(d - std::min(std::fabs(x - y), 2.0)));
    }
    if (worst > 1e-9) out.ok = false;
    out.detail += format("atom pairs max error %.1e; ", worst);
  }
  {
    const Json table = Json::parse(read_text_file(data_path(o, "kr_oracle.json")));
    const double R = table.at("R").get<double>(), step = table.at("grid_step").get<double>();
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& inst : table.at("instances")) {
      const double ref = inst.at("value").get<double>();
      const double d =
          kr_distance(measure_from_json(inst.at("a")), measure_from_json(inst.at("b")), R, step).value;
      worst = std::max(worst, std::fabs(d - ref) / std::fabs(ref));
      ++count;
    }
    if (count != 100 || worst > 1e-3) out.ok = false;
    out.detail += format("oracle %zu instances max rel error %.1e; ", count, worst);
  }
  {
    Rng gen(rng.substream(1));
    const double R = 5.0, step = 0.05;
    double asym = 0.0, tri = -std::numeric_limits<double>::infinity(), self = 0.0;
    bool separated = true;
    for (int i = 0; i < 50; ++i) {
      const SignedMeasure a = random_grid_measure(gen, R, step);
      const SignedMeasure b = random_grid_measure(gen, R, step);
      const SignedMeasure c = random_grid_measure(gen, R, step);
      auto d = [&](const SignedMeasure& p, const SignedMeasure& q) { return kr_distance(p, q, R, step).value; };
      const double ab = d(a, b), ba = d(b, a), bc = d(b, c), ac = d(a, c);
      asym = std::max(asym, std::fabs(ab - ba));
      tri = std::max(tri, ac - ab - bc);
      self = std::max(self, d(a, a));
      if (!(a == b) && !(ab > 0.0)) separated = false;
    }
    if (asym > 1e-12 || tri > 1e-9 || self > 1e-12 || !separated) out.ok = false;
    out.detail += format("axioms: asymmetry %.1e, triangle excess %.1e, d(a,a) %.1e", asym, tri, self);
  }
  return out;
}

// 10 --------------------------------------------------------------------------

// Integral of log|x - y| over the two boxes by nested tanh-sinh quadrature in
// coordinates relative to the box centres, split at kinks and singular lines.
double box_log_quadrature(double t1, double t2, double a) {
  boost::math::quadrature::tanh_sinh<double> ts(12);
  const double D = t2 - t1;
  auto log_from = [&](double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    return ts.integrate([](double d) { return d > 0.0 ? std::log(d) : 0.0; }, lo, hi, 1e-12);
  };
  // integral over r in [-a, a] of log|u - r|
  auto inner = [&](double s) {
    const double u = std::fabs(s - D);
    if (u < a) return log_from(0.0, a + u) + log_from(0.0, a - u);
    return log_from(u - a, u + a);
  };
  std::vector<double> cuts{-a, a};
  for (double c : {D - a, D + a})
    if (c > -a && c < a) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] - cuts[i] > 1e-14 * a) total += ts.integrate(inner, cuts[i], cuts[i + 1], 1e-11);
  return total;
}

Outcome box_log(const VerifyOptions& o, const RngState& rng) {
  Outcome out;
  {
    Rng gen(rng.substream(0));
    const int draws = full(o) ? 1000 : 200;
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double a = std::pow(10.0, -3.0 * gen.uniform());
      const double t1 = 6.0 * gen.uniform() - 3.0;
      const double t2 = t1 + (gen.uniform() < 0.5 ? -1.0 : 1.0) * a * 40.0 * gen.uniform() * gen.uniform();
      worst = std::max(worst, std::fabs(box_log_integral(t1, t2, a) - box_log_quadrature(t1, t2, a)));
    }
    if (worst > 1e-6) out.ok = false;
    out.detail += format("quadrature max abs error %.1e over %d inputs; ", worst, draws);
  }
  const double coincident = box_log_integral(0.0, 0.0, 1.0);
  const double exact = 4.0 * std::log(2.0) - 6.0;
  if (std::fabs(coincident - exact) > 1e-15) out.ok = false;
  out.detail += format("coincident %.17g vs %.17g; ", coincident, exact);
  {
    const Json c = Json::parse(read_text_file(data_path(o, "box_log_constant.json")));
    const double C = c.at("frozen").get<double>();
    Rng gen(rng.substream(1));
    int close = 0, violations = 0;
    for (int i = 0; i < 10000; ++i) {
      const double n = std::floor(std::pow(10.0, 4.0 * gen.uniform())) + 1.0;
      const double t1 = 10.0 * gen.uniform() - 5.0;
      const double s = (i % 2 == 0) ? 10.0 * gen.uniform() : std::pow(10.0, 6.0 * gen.uniform() - 3.0);
      const double t2 = t1 + s / n;
      const double v = box_log_integral(t1, t2, 1.0 / n);
      const double gap = n * (t2 - t1);
      if (gap > 0.0 && v < 4.0 / (n * n) * std::log(t2 - t1) - C / (n * n * std::max(gap, 1.0))) ++violations;
      if (gap <= 10.0) {
        ++close;
        if (v < -4.0 * std::log(n) / (n * n) - C / (n * n)) ++violations;
      }
    }
    if (violations > 0) out.ok = false;
    out.detail += format("lower bounds with C=%g: %d violations (%d close draws)", C, violations, close);
  }
  return out;
}

// 11 --------------------------------------------------------------------------

Outcome energy_positivity(const VerifyOptions&, const RngState& rng) {
  std::vector<double> breaks(65);
  for (int i = 0; i <= 64; ++i) breaks[i] = -10.0 + 20.0 * i / 64.0;
  const Eigen::MatrixXd K = log_kernel(breaks);
  Rng gen(rng);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) {
    Eigen::VectorXd v(64);
    for (int j = 0; j < 64; ++j) v[j] = sample_gaussian(gen);
    v.array() -= v.mean();
    v.normalize();
    worst = std::min(worst, -v.dot(K * v));
  }
  Outcome out;
  out.ok = worst >= -1e-9;
  out.detail = format("min -v'Kv %.4e over 200 unit zero-mass vectors", worst);
  return out;
}

// 12 --------------------------------------------------------------------------

Outcome xi_properties(const VerifyOptions&) {
  Outcome out;
  double inside = 0.0;
  for (int i = 0; i <= 100; ++i) inside = std::max(inside, std::fabs(xi(-2.0 + 4.0 * i / 100.0)));
  double lowest = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 200; ++i) lowest = std::min(lowest, xi(-10.0 + 20.0 * i / 199.0));
  const double c = std::pow(4.0 / 4096.0, 2.0 / 3.0) / 4.0;
  double lower_margin = std::numeric_limits<double>::infinity(), upper_margin = lower_margin;
  for (int i = 0; i < 200; ++i) {
    const double x = -5.0 + 5.0 * i / 200.0;
    const double v = xi_tilde(x, 4096, 4);
    const double base = 2.0 / 3.0 * std::pow(std::fabs(x), 1.5);
    lower_margin = std::min(lower_margin, v - base);
    upper_margin = std::min(upper_margin, base * (1.0 + c * std::fabs(x)) - v);
  }
  out.ok = inside <= 1e-6 && lowest >= -1e-8 && lower_margin >= 0.0 && upper_margin >= 0.0;
  out.detail = format("max |xi| on [-2,2] %.1e; min xi on [-10,10] %.1e; bracket margins %.2e / %.2e", inside,
                      lowest, lower_margin, upper_margin);
  return out;
}

// 13 --------------------------------------------------------------------------

SignedMeasure depletion_target() {
  const SignedMeasure bump({}, {-2.0, -1.0}, {0.2});
  std::vector<double> breaks(301);
  for (int i = 0; i <= 300; ++i) breaks[i] = 3.0 * i / 300.0;
  return bump - nu0_on_breaks(breaks) * 0.5;
}

Outcome rate_sanity(const VerifyOptions& o) {
  const std::vector<double> deltas{0.08, 0.04, 0.02, 0.01};
  const double R = 10.0, S = 14.0;
  RateOptions opts;
  if (!full(o)) opts.cells = 256;
  Outcome out;
  double gap_excess = -std::numeric_limits<double>::infinity();
  auto record_gaps = [&](const RateLadder& ladder) {
    for (const auto& s : ladder.solutions) gap_excess = std::max(gap_excess, s.kr_gap - s.delta);
  };
  const RateLadder zero = rate_ladder(SignedMeasure{}, deltas, R, S, opts);
  record_gaps(zero);
  double zero_max = 0.0;
  for (const auto& s : zero.solutions) zero_max = std::max(zero_max, s.value);
  if (zero_max > 1e-6) out.ok = false;
  out.detail += format("zero target max %.1e; ", zero_max);
  const SignedMeasure targets[] = {depletion_target(), shifted_reference_target(0.5, R)};
  const char* names[] = {"depletion", "shift 0.5"};
  for (int t = 0; t < 2; ++t) {
    const RateLadder ladder = rate_ladder(targets[t], deltas, R, S, opts);
    record_gaps(ladder);
    bool monotone = true;
    out.detail += format("%s:", names[t]);
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      out.detail += format(" %.4f", ladder.solutions[i].value);
      if (i > 0 && ladder.solutions[i].value < ladder.solutions[i - 1].value) monotone = false;
    }
    out.detail += monotone ? "; " : " (not monotone); ";
    if (!monotone) out.ok = false;
  }
  if (gap_excess > 1e-6) out.ok = false;
  out.detail += format("max kr_gap - delta %.1e", gap_excess);
  return out;
}

// 14 --------------------------------------------------------------------------

Outcome ldp_trend_check(const VerifyOptions& o, const RngState& rng) {
  LdpTrendOptions opts;
  opts.reps = full(o) ? 2000 : 300;
  opts.threads = o.threads;
  const LdpTrendResult typical = ldp_trend(SignedMeasure{}, opts, rng);
  const LdpTrendResult shifted = ldp_trend(shifted_reference_target(7.0, opts.R), opts, rng);
  Outcome out;
  if (!typical.reference[0] || !shifted.reference[0]) {
    out.ok = false;
    out.detail = "optimizer failed: " + typical.reference_errors[0] + shifted.reference_errors[0];
    return out;
  }
  const double ref0 = *typical.reference[0], ref1 = *shifted.reference[0];
  // Optimizer order: -(beta/2) I_R is larger for the typical target.
  const bool optimizer_order = ref1 < ref0;
  out.ok = optimizer_order;
  out.detail = format("optimizer -(b/2)I_R: %.4f (zero) vs %.4f (shift 7);", ref0, ref1);
  for (std::size_t i = 0; i < typical.rows.size(); ++i) {
    const LdpTrendRow& a = typical.rows[i];
    const LdpTrendRow& b = shifted.rows[i];
    const double noise = std::max(a.rate_hi - a.rate_lo, 1e-3);
    const bool near_zero = std::fabs(a.rate_estimate) <= noise;
    const bool ordered = b.rate_estimate < a.rate_estimate;
    if (!near_zero || !ordered) out.ok = false;
    out.detail += format(" k=%zu: %.4f vs %.4f%s", a.k, a.rate_estimate, b.rate_estimate,
                         near_zero && ordered ? "" : " (bad)");
  }
  return out;
}

struct Spec {
  const char* name;
  double budget;
};

constexpr Spec specs[criterion_count] = {
    {"deterministic blow-up bracket", 30.0},
    {"blow-up gap bracket", 10.0},
    {"Airy eigenvalues", 60.0},
    {"N0 asymptotic", 30.0},
    {"chi sampler", 20.0},
    {"bulk semicircle", 60.0},
    {"edge agreement", 600.0},
    {"tail bound", 600.0},
    {"KR distance", 60.0},
    {"box log-integral", 60.0},
    {"energy positivity", 10.0},
    {"xi properties", 60.0},
    {"rate function sanity", 300.0},
    {"ldp trend", 900.0},
};

}  // namespace

double semicircle_cdf(double x) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * pi) + std::asin(x / 2.0) / pi;
}

double chi_cdf(double t, double x) {
  if (!(t > 0.0)) throw DomainError("chi_cdf: t must be positive");
  if (x <= 0.0) return 0.0;
  const double log_norm = (1.0 - t / 2.0) * std::log(2.0) - std::lgamma(t / 2.0);
  auto f = [&](double y) { return y > 0.0 ? std::exp(log_norm + (t - 1.0) * std::log(y) - y * y / 2.0) : 0.0; };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, x, 15, 1e-12);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  if (id < 1 || id > criterion_count) throw DomainError("run_criterion: id must be in 1..14");
  CriterionResult res;
  res.id = id;
  res.name = specs[id - 1].name;
  res.budget_seconds = specs[id - 1].budget;
  VerifyOptions o = options;
  o.threads = resolve_thread_count(o.threads);
  const RngState rng = RngState{o.seed}.substream(static_cast<std::uint64_t>(id));
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    switch (id) {
      case 1: out = blowup_bracket(o); break;
      case 2: out = gap_bracket(o); break;
      case 3: out = airy_eigenvalues(o); break;
      case 4: out = n0_asymptotic(o); break;
      case 5: out = chi_sampler(o, rng); break;
      case 6: out = semicircle(o, rng); break;
      case 7: out = edge_agreement(o, rng); break;
      case 8: out = tail_bound(o, rng); break;
      case 9: out = kr_checks(o, rng); break;
      case 10: out = box_log(o, rng); break;
      case 11: out = energy_positivity(o, rng); break;
      case 12: out = xi_properties(o); break;
      case 13: out = rate_sanity(o); break;
      case 14: out = ldp_trend_check(o, rng); break;
    }
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("error: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.detail = out.detail;
  res.known_unattainable = out.known_unattainable;
  res.passed = out.ok && res.seconds <= res.budget_seconds;
  if (out.ok && !res.passed) res.detail += format(" [over time budget %.0f s]", res.budget_seconds);
  return res;
}

std::vector<CriterionResult> run_criteria(std::span<const int> ids, const VerifyOptions& options,
                                          const std::function<void(const CriterionResult&)>& report) {
  std::vector<int> list(ids.begin(), ids.end());
  if (list.empty())
    for (int i = 1; i <= criterion_count; ++i) list.push_back(i);
  std::vector<CriterionResult> out;
  for (int id : list) {
    out.push_back(run_criterion(id, options));
    if (report) report(out.back());
  }
  return out;
}

}  // namespace airy
