#include "airy/rng.hpp"

#include <cmath>
#include <random>

#include "airy/error.hpp"

namespace airy {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kPhiloxM0, ctr[0], lo0, hi0);
    mulhilo(kPhiloxM1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Ziggurat tables for the standard normal (Doornik's ZIGNOR layout).
constexpr int kZigLayers = 128;
constexpr double kZigR = 3.442619855899;
constexpr double kZigV = 9.91256303526217e-3;

struct ZigTables {
  double x[kZigLayers + 1];
  double ratio[kZigLayers];
  ZigTables() {
    double f = std::exp(-0.5 * kZigR * kZigR);
    x[0] = kZigV / f;
    x[1] = kZigR;
    x[kZigLayers] = 0.0;
    for (int i = 2; i < kZigLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kZigV / x[i - 1] + f));
      f = std::exp(-0.5 * x[i] * x[i]);
    }
    for (int i = 0; i < kZigLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

const ZigTables& zig_tables() {
  static const ZigTables tables;
  return tables;
}

double gaussian_tail(Rng& rng, bool negative) {
  double x, y;
  do {
    x = std::log(rng.uniform()) / kZigR;
    y = std::log(rng.uniform());
  } while (-2.0 * y < x * x);
  return negative ? x - kZigR : kZigR - x;
}

}  // namespace

RngState RngState::substream(std::uint64_t index) const {
  return RngState{seed, splitmix64(splitmix64(stream) ^ (index + 0x632BE59BD9B4E019ULL)), 0};
}

Rng::Rng(RngState state) : state_(state) {}

void Rng::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(state_.counter), static_cast<std::uint32_t>(state_.counter >> 32),
      static_cast<std::uint32_t>(state_.stream), static_cast<std::uint32_t>(state_.stream >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(state_.seed),
                                            static_cast<std::uint32_t>(state_.seed >> 32)};
  block_ = philox4x32_10(ctr, key);
  ++state_.counter;
  used_ = 0;
}

Rng::result_type Rng::operator()() {
  if (used_ == 4) refill();
  return block_[used_++];
}

std::uint64_t Rng::next_u64() {
  const std::uint64_t hi = (*this)();
  const std::uint64_t lo = (*this)();
  return (hi << 32) | lo;
}

double Rng::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double sample_gaussian(Rng& rng) {
  const ZigTables& z = zig_tables();
  for (;;) {
    const std::uint64_t bits = rng.next_u64();
    const int layer = static_cast<int>(bits & 0x7F);
    // 53 high bits -> u uniform on (-1, 1)
    const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-52 - 1.0;
    if (std::fabs(u) < z.ratio[layer]) return u * z.x[layer];
    if (layer == 0) return gaussian_tail(rng, u < 0.0);
    const double x = u * z.x[layer];
    const double f0 = std::exp(-0.5 * (z.x[layer] * z.x[layer] - x * x));
    const double f1 = std::exp(-0.5 * (z.x[layer + 1] * z.x[layer + 1] - x * x));
    if (f1 + rng.uniform() * (f0 - f1) < 1.0) return x;
  }
}

double sample_chi(Rng& rng, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("sample_chi: degrees of freedom must be positive");
  std::gamma_distribution<double> gamma(0.5 * t, 1.0);
  return std::sqrt(2.0 * gamma(rng));
}

BrownianPath::BrownianPath(double dt, std::vector<double> increments, RngState origin)
    : dt_(dt), increments_(std::move(increments)), origin_(origin) {}

double BrownianPath::value_at(std::size_t i) const {
  double b = 0.0;
  for (std::size_t j = 0; j < i && j < increments_.size(); ++j) b += increments_[j];
  return b;
}

std::size_t brownian_step_count(double dt, double horizon) {
  if (!(dt > 0.0)) throw DomainError("Brownian path: dt must be positive");
  if (!(horizon >= dt)) throw DomainError("Brownian path: horizon must be at least dt");
  // Tolerate representation error when horizon is meant to be a multiple of dt.
  return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

void fill_brownian_increments(Rng& rng, double dt, std::span<double> out) {
  const double scale = std::sqrt(dt);
  for (double& v : out) v = scale * sample_gaussian(rng);
}

BrownianPath sample_brownian_path(Rng& rng, double dt, double horizon) {
  const RngState origin = rng.state();
  std::vector<double> inc(brownian_step_count(dt, horizon));
  fill_brownian_increments(rng, dt, inc);
  return BrownianPath(dt, std::move(inc), origin);
}

}  // namespace airy
