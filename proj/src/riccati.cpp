#include "airy/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "airy/error.hpp"
#include "airy/parallel.hpp"

namespace airy {
namespace {

constexpr int kMaxRefineDepth = 12;

// Heun predictor-corrector for the drift with the noise increment applied
// additively (strong order 1 for the additive-noise direct coordinate). In the
// inverted coordinate u = 1/p Ito's formula gives
//   du = (1 - (x - lambda) u^2 + sigma^2 u^3) dx - sigma u^2 dB,
// integrated with the same drift rule plus a Milstein term for the
// multiplicative noise. An explosion of p to -infinity is u crossing 0 from
// below; the continuation u > 0 is the restart at +infinity.
class RiccatiFlow {
 public:
  RiccatiFlow(double lambda, double sigma, const RiccatiConfig& cfg)
      : lambda_(lambda), sigma_(sigma), cfg_(cfg), inv_switch_(1.0 / cfg.switch_height) {}

  // Integrates over [start, stop]; dw points at the increment of the first
  // step (null for the deterministic flow). Returns explosions seen.
  std::size_t run(double start, double stop, const double* dw, std::vector<double>* out,
                  std::size_t max_count) {
    inverted_ = true;
    value_ = 0.0;
    start_ = start;
    stop_ = stop;
    out_ = out;
    count_ = 0;
    max_count_ = max_count;
    const double dt = cfg_.dt;
    const auto steps = static_cast<std::size_t>(std::ceil((stop - start) / dt - 1e-9));
    for (std::size_t j = 0; j < steps && count_ < max_count_; ++j) {
      const double x = start + static_cast<double>(j) * dt;
      const double x_next = std::min(stop, start + static_cast<double>(j + 1) * dt);
      const double h = x_next - x;
      double w = dw ? dw[j] : 0.0;
      if (dw && h < dt) w *= std::sqrt(h / dt);
      advance(x, h, w, 0);
    }
    return count_;
  }

 private:
  double drift_direct(double x, double p) const { return x - lambda_ - p * p; }
  double drift_inverted(double x, double u) const {
    return 1.0 - (x - lambda_) * u * u + sigma_ * sigma_ * u * u * u;
  }

  [[noreturn]] void fail(const char* what, double x) const {
    std::ostringstream msg;
    msg << "Riccati flow: " << what << " at x=" << x << " (lambda=" << lambda_
        << ", dt=" << cfg_.dt << ", coordinate=" << (inverted_ ? "inverted" : "direct")
        << ", value=" << value_ << ")";
    throw NumericalError(msg.str());
  }

  void advance(double x, double h, double dw, int depth) {
    if (count_ >= max_count_) return;
    if (inverted_) {
      const double u = value_;
      const double noise = -sigma_ * u * u * dw;
      const double g0 = drift_inverted(x, u);
      const double pred = u + g0 * h + noise;
      const double g1 = drift_inverted(x + h, pred);
      const double next = u + 0.5 * (g0 + g1) * h + noise + sigma_ * sigma_ * u * u * u * (dw * dw - h);
      const bool crossing = u < 0.0 && next >= 0.0;
      const bool pred_crossing = u < 0.0 && pred >= 0.0;
      const bool too_coarse = std::fabs(next - u) > 0.5 * inv_switch_ || crossing != pred_crossing;
      if (too_coarse) {
        refine(x, h, dw, depth);
        return;
      }
      if (!std::isfinite(next)) fail("non-finite state", x);
      if (crossing) {
        const double t = x + h * (-u) / (next - u);
        if (t > start_ && t <= stop_) {
          if (out_) out_->push_back(t);
          ++count_;
        }
      }
      value_ = next;
      if (std::fabs(next) > 2.0 * inv_switch_) {
        inverted_ = false;
        value_ = 1.0 / next;
      }
    } else {
      const double p = value_;
      const double noise = sigma_ * dw;
      const double f0 = drift_direct(x, p);
      const double pred = p + f0 * h + noise;
      const double f1 = drift_direct(x + h, pred);
      const double next = p + 0.5 * (f0 + f1) * h + noise;
      const double limit = std::max(1.0, 0.5 * std::fabs(p));
      if (std::fabs(pred - p) > limit || std::fabs(next - p) > limit) {
        refine(x, h, dw, depth);
        return;
      }
      if (!std::isfinite(next)) fail("non-finite state", x);
      if (next > cfg_.cap || next < cfg_.blowdown) fail("direct coordinate escaped its range", x);
      value_ = next;
      if (std::fabs(next) > cfg_.switch_height) {
        inverted_ = true;
        value_ = 1.0 / next;
      }
    }
  }

  // Halves the step; the noise increment is split evenly between the halves
  // (linear interpolation of the driving path inside the coarse step).
  void refine(double x, double h, double dw, int depth) {
    if (depth >= kMaxRefineDepth) fail("step too coarse to resolve an explosion", x);
    advance(x, 0.5 * h, 0.5 * dw, depth + 1);
    advance(x + 0.5 * h, 0.5 * h, 0.5 * dw, depth + 1);
  }

  double lambda_;
  double sigma_;
  RiccatiConfig cfg_;
  double inv_switch_;
  bool inverted_ = true;
  double value_ = 0.0;
  double start_ = 0.0;
  double stop_ = 0.0;
  std::vector<double>* out_ = nullptr;
  std::size_t count_ = 0;
  std::size_t max_count_ = 0;
};

void check_interval(double start, double stop) {
  if (!(start >= 0.0) || !(stop > start) || !std::isfinite(stop))
    throw DomainError("Riccati flow: require 0 <= start < stop < infinity");
}

// Index of the noise increment starting at `start`; the path must cover stop.
std::size_t noise_offset(const BrownianPath& noise, const RiccatiConfig& cfg, double start,
                         double stop) {
  if (std::fabs(noise.dt() - cfg.dt) > 1e-12 * cfg.dt)
    throw DomainError("Riccati flow: noise path step differs from config dt");
  const double k = start / cfg.dt;
  const double k0 = std::round(k);
  if (std::fabs(k - k0) > 1e-6) throw DomainError("Riccati flow: start is not a grid point of the noise path");
  if (noise.horizon() < stop - 1e-9 * std::max(1.0, stop))
    throw DomainError("Riccati flow: noise horizon shorter than the integration window");
  return static_cast<std::size_t>(k0);
}

}  // namespace

void RiccatiConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("RiccatiConfig: dt must be positive");
  if (!(switch_height > 0.0 && switch_height <= cap && blowdown <= -switch_height))
    throw DomainError("RiccatiConfig: require blowdown <= -switch_height < 0 < switch_height <= cap");
}

double noise_amplitude(double beta) {
  if (!(beta > 0.0)) throw DomainError("noise_amplitude: beta must be positive");
  if (std::isinf(beta)) return 0.0;
  return 2.0 / std::sqrt(beta);
}

RiccatiTrace integrate_q(double lambda, double start, double stop, const RiccatiConfig& cfg) {
  cfg.validate();
  check_interval(start, stop);
  RiccatiTrace trace{lambda, start, stop, cfg.dt, 0.0, false, {}};
  RiccatiFlow(lambda, 0.0, cfg).run(start, stop, nullptr, &trace.blowups, std::numeric_limits<std::size_t>::max());
  return trace;
}

RiccatiTrace integrate_p(double lambda, double start, double stop, const BrownianPath& noise,
                         double amplitude, const RiccatiConfig& cfg) {
  cfg.validate();
  check_interval(start, stop);
  const std::size_t k0 = noise_offset(noise, cfg, start, stop);
  RiccatiTrace trace{lambda, start, stop, cfg.dt, amplitude, true, {}};
  RiccatiFlow(lambda, amplitude, cfg)
      .run(start, stop, noise.increments().data() + k0, &trace.blowups, std::numeric_limits<std::size_t>::max());
  return trace;
}

std::size_t count_blowups(double lambda, double start, double stop, const BrownianPath* noise,
                          double amplitude, const RiccatiConfig& cfg, std::size_t max_count) {
  cfg.validate();
  check_interval(start, stop);
  const double* dw = nullptr;
  if (noise) dw = noise->increments().data() + noise_offset(*noise, cfg, start, stop);
  return RiccatiFlow(lambda, noise ? amplitude : 0.0, cfg).run(start, stop, dw, nullptr, max_count);
}

WindowCount count_window(const RiccatiTrace& trace, double lo, double hi) {
  WindowCount wc{trace.lambda, lo, hi, 0, false};
  if (std::isinf(hi) && hi > 0) {
    wc.hi = trace.stop;
    wc.truncated = true;
  }
  if (!(lo >= trace.start && lo < wc.hi && wc.hi <= trace.stop))
    throw DomainError("count_window: window outside the trace");
  const auto first = std::upper_bound(trace.blowups.begin(), trace.blowups.end(), lo);
  const auto last = std::upper_bound(trace.blowups.begin(), trace.blowups.end(), wc.hi);
  wc.count = static_cast<std::size_t>(last - first);
  return wc;
}

std::optional<double> first_blowup_time(double lambda, const BrownianPath& noise, double amplitude,
                                        const RiccatiConfig& cfg) {
  cfg.validate();
  const double stop = noise.horizon();
  check_interval(0.0, stop);
  noise_offset(noise, cfg, 0.0, stop);
  std::vector<double> times;
  RiccatiFlow(lambda, amplitude, cfg).run(0.0, stop, noise.increments().data(), &times, 1);
  if (times.empty()) return std::nullopt;
  return times.front();
}

std::vector<DeviationStat> count_deviation_profile(double lambda, std::span<const Window> windows,
                                                   std::size_t reps, const RngState& rng,
                                                   double beta, const RiccatiConfig& cfg,
                                                   CountMode mode, double truncation, int threads) {
  cfg.validate();
  if (windows.empty()) return {};
  std::vector<Window> ws(windows.begin(), windows.end());
  std::vector<bool> truncated(ws.size(), false);
  double horizon = 0.0;
  for (std::size_t w = 0; w < ws.size(); ++w) {
    if (std::isinf(ws[w].hi)) {
      ws[w].hi = truncation;
      truncated[w] = true;
    }
    if (!(ws[w].lo >= 0.0 && ws[w].hi > ws[w].lo)) throw DomainError("count_deviation_profile: bad window");
    horizon = std::max(horizon, ws[w].hi);
  }
  const double sigma = noise_amplitude(beta);

  auto deterministic = [&](std::size_t w) {
    if (mode == CountMode::windowed) return count_blowups(lambda, ws[w].lo, ws[w].hi, nullptr, 0.0, cfg);
    return count_window(integrate_q(lambda, 0.0, horizon, cfg), ws[w].lo, ws[w].hi).count;
  };
  std::vector<std::size_t> n0(ws.size());
  for (std::size_t w = 0; w < ws.size(); ++w) n0[w] = deterministic(w);

  std::vector<std::vector<std::size_t>> counts(reps, std::vector<std::size_t>(ws.size()));
  parallel_for(reps, threads, [&](std::size_t r) {
    Rng gen(rng.substream(r));
    const BrownianPath path = sample_brownian_path(gen, cfg.dt, horizon);
    if (mode == CountMode::windowed) {
      for (std::size_t w = 0; w < ws.size(); ++w)
        counts[r][w] = count_blowups(lambda, ws[w].lo, ws[w].hi, &path, sigma, cfg);
    } else {
      const RiccatiTrace trace = integrate_p(lambda, 0.0, horizon, path, sigma, cfg);
      for (std::size_t w = 0; w < ws.size(); ++w) counts[r][w] = count_window(trace, ws[w].lo, ws[w].hi).count;
    }
  });

  std::vector<DeviationStat> out(ws.size());
  for (std::size_t w = 0; w < ws.size(); ++w) {
    DeviationStat& s = out[w];
    s.window = ws[w];
    s.deterministic_count = n0[w];
    s.truncated = truncated[w];
    double sum_abs = 0.0, sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::size_t n = counts[r][w];
      const std::size_t dev = n > n0[w] ? n - n0[w] : n0[w] - n;
      sum_abs += static_cast<double>(dev);
      sum += static_cast<double>(n);
      s.max_abs = std::max(s.max_abs, dev);
    }
    if (reps > 0) {
      s.mean_abs = sum_abs / static_cast<double>(reps);
      s.mean_count = sum / static_cast<double>(reps);
    }
  }
  return out;
}

}  // namespace airy
