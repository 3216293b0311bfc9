#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "airy/rng.hpp"

namespace airy {

// Discretization parameters of the Riccati flows
//   dq = (x - lambda - q^2) dx,   dp = (x - lambda - p^2) dx + sigma dB,
// started at +infinity and restarted at +infinity after every explosion to
// -infinity. While |value| > switch_height the flow is integrated in the
// inverted coordinate u = 1/value, which passes through the singularity.
struct RiccatiConfig {
  double dt = 1e-3;
  double cap = 1e6;             // direct-coordinate magnitude treated as +infinity
  double blowdown = -1e6;       // direct-coordinate value treated as -infinity
  double switch_height = 1e2;   // |value| above which u = 1/value is integrated

  // Requires blowdown <= -switch_height < 0 < switch_height <= cap and dt > 0.
  void validate() const;
};

// Noise coefficient 2/sqrt(beta); beta = +infinity gives 0 (deterministic flow).
double noise_amplitude(double beta);

// One integrated path with its ordered explosion times in (start, stop].
struct RiccatiTrace {
  double lambda = 0.0;
  double start = 0.0;
  double stop = 0.0;
  double dt = 0.0;
  double amplitude = 0.0;
  bool stochastic = false;
  std::vector<double> blowups;
};

struct WindowCount {
  double lambda = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  // hi was +infinity and got replaced by the end of the trace.
  bool truncated = false;
};

// Deterministic flow on [start, stop], restarted at +infinity at `start`.
RiccatiTrace integrate_q(double lambda, double start, double stop, const RiccatiConfig& cfg);

// Stochastic flow driven by `noise` (indexed by absolute time, so `start` must
// be a grid point of the path and noise.horizon() >= stop). amplitude is
// 2/sqrt(beta); amplitude 0 reproduces integrate_q exactly.
RiccatiTrace integrate_p(double lambda, double start, double stop, const BrownianPath& noise,
                         double amplitude, const RiccatiConfig& cfg);

// Explosion count only, stopping early once `max_count` explosions are seen.
// noise may be null for the deterministic flow.
std::size_t count_blowups(double lambda, double start, double stop, const BrownianPath* noise,
                          double amplitude, const RiccatiConfig& cfg,
                          std::size_t max_count = std::numeric_limits<std::size_t>::max());

// Number of recorded explosions in (lo, hi]. hi = +infinity counts to the end
// of the trace and marks the result truncated.
WindowCount count_window(const RiccatiTrace& trace, double lo, double hi);

// First explosion time of the flow started at 0, or nullopt before the end of
// the noise path.
std::optional<double> first_blowup_time(double lambda, const BrownianPath& noise, double amplitude,
                                        const RiccatiConfig& cfg);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

struct DeviationStat {
  Window window;
  double mean_abs = 0.0;   // mean |N - N0| over replicas
  std::size_t max_abs = 0; // max |N - N0|
  double mean_count = 0.0; // mean N
  std::size_t deterministic_count = 0;  // N0
  bool truncated = false;
};

enum class CountMode {
  // N(lambda; lo, hi): explosions in (lo, hi] of the flow started at 0.
  from_origin,
  // Explosions of the flow restarted at +infinity at lo; measurable with
  // respect to the increments on [lo, hi] only.
  windowed,
};

// Monte-Carlo summary of |N - N0| per window. Replica r uses rng.substream(r).
// Infinite window ends are truncated at `truncation`.
std::vector<DeviationStat> count_deviation_profile(double lambda, std::span<const Window> windows,
                                                   std::size_t reps, const RngState& rng,
                                                   double beta, const RiccatiConfig& cfg,
                                                   CountMode mode = CountMode::from_origin,
                                                   double truncation = 40.0, int threads = 1);

}  // namespace airy
