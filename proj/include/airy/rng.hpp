#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace airy {

// Address of a random stream: a key (seed), an independent substream index and
// the position inside that substream. Variates are a pure function of it.
struct RngState {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::uint64_t counter = 0;

  // Deterministically derived child stream, e.g. one per Monte-Carlo replica.
  RngState substream(std::uint64_t index) const;

  friend bool operator==(const RngState&, const RngState&) = default;
};

// Philox4x32-10 counter-based generator. Each counter value yields four
// 32-bit words; distinct (seed, stream) pairs never share a counter block.
class Rng {
 public:
  using result_type = std::uint32_t;

  explicit Rng(RngState state = {});

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();

  // Position to resume from. Words left over in a partially consumed block are
  // discarded, so resuming from state() is deterministic but not contiguous.
  RngState state() const { return state_; }

 private:
  void refill();

  RngState state_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
};

// Standard normal variate (ziggurat, 128 layers).
double sample_gaussian(Rng& rng);

// chi_t variate: square root of twice a Gamma(t/2, 1) variate. Valid for all
// real t > 0. Throws DomainError for t <= 0.
double sample_chi(Rng& rng, double t);

// Fixed-step Brownian increments on [0, horizon]; immutable once generated so
// that several consumers (different spectral parameters) see identical noise.
class BrownianPath {
 public:
  BrownianPath() = default;
  BrownianPath(double dt, std::vector<double> increments, RngState origin);

  double dt() const { return dt_; }
  double horizon() const { return dt_ * static_cast<double>(increments_.size()); }
  std::size_t size() const { return increments_.size(); }
  std::span<const double> increments() const { return increments_; }
  // Stream the path was drawn from; identifies the noise for provenance.
  const RngState& origin() const { return origin_; }
  // B at grid time index i (sum of the first i increments).
  double value_at(std::size_t i) const;

 private:
  double dt_ = 0.0;
  std::vector<double> increments_;
  RngState origin_{};
};

// Draws ceil(horizon/dt) increments ~ N(0, dt). A horizon that is not a
// multiple of dt is rounded up; the effective horizon is path.horizon().
BrownianPath sample_brownian_path(Rng& rng, double dt, double horizon);

// Same, writing into a caller-owned buffer (hot Monte-Carlo loops).
void fill_brownian_increments(Rng& rng, double dt, std::span<double> out);

std::size_t brownian_step_count(double dt, double horizon);

}  // namespace airy
