#include "airy/kr_distance.hpp"

#include <algorithm>
#include <cmath>

#include "airy/error.hpp"

namespace airy {
namespace {

struct Vertex {
  double x;
  double y;
};

// Index of the leftmost and rightmost maximizers of a concave polyline.
std::pair<std::size_t, std::size_t> plateau(const std::vector<Vertex>& v) {
  const std::size_t last = v.size() - 1;
  std::size_t il = 0;
  while (il < last && v[il + 1].y > v[il].y) ++il;
  std::size_t ir = il;
  while (ir < last && v[ir + 1].y >= v[ir].y) ++ir;
  return {il, ir};
}

double interpolate(const Vertex& a, const Vertex& b, double x) {
  if (b.x == a.x) return std::max(a.y, b.y);
  const double t = (x - a.x) / (b.x - a.x);
  return a.y + t * (b.y - a.y);
}

// Clips the polyline to [-1, 1] (the domain always covers it).
void clip(std::vector<Vertex>& v) {
  std::vector<Vertex> out;
  out.reserve(v.size() + 2);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].x < -1.0) {
      if (i + 1 < v.size() && v[i + 1].x > -1.0) out.push_back({-1.0, interpolate(v[i], v[i + 1], -1.0)});
      continue;
    }
    if (v[i].x > 1.0) {
      if (i > 0 && v[i - 1].x < 1.0) out.push_back({1.0, interpolate(v[i - 1], v[i], 1.0)});
      break;
    }
    out.push_back(v[i]);
  }
  v.swap(out);
}

}  // namespace

std::size_t kr_interval_count(double R, double grid_step) {
  if (!(grid_step > 0.0)) throw DomainError("kr_distance: grid_step must be positive");
  if (!(R > 0.0)) throw DomainError("kr_distance: R must be positive");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 * R / grid_step - 1e-9)));
}

std::vector<double> hat_weights(const SignedMeasure& mu, double R, std::size_t intervals) {
  const double h = 2.0 * R / static_cast<double>(intervals);
  std::vector<double> w(intervals + 1, 0.0);
  auto node = [&](std::size_t j) { return -R + static_cast<double>(j) * h; };
  auto locate = [&](double x) {
    const double s = std::floor((x + R) / h);
    return static_cast<std::size_t>(std::clamp(s, 0.0, static_cast<double>(intervals - 1)));
  };
  for (const Atom& a : mu.atoms()) {
    const std::size_t j = locate(a.x);
    const double theta = std::clamp((a.x - node(j)) / h, 0.0, 1.0);
    w[j] += (1.0 - theta) * a.mass;
    w[j + 1] += theta * a.mass;
  }
  const auto& br = mu.breaks();
  for (std::size_t c = 0; c < mu.cell_count(); ++c) {
    const double v = mu.values()[c];
    const double lo = std::max(br[c], -R), hi = std::min(br[c + 1], R);
    if (!(hi > lo)) continue;
    for (std::size_t j = locate(lo); j < intervals; ++j) {
      const double xl = node(j);
      if (xl >= hi) break;
      const double s = std::max(lo, xl) - xl, t = std::min(hi, xl + h) - xl;
      if (!(t > s)) continue;
      // integrals of (h - u)/h and u/h over u in [s, t]
      const double right = (t * t - s * s) / (2.0 * h);
      w[j] += v * ((t - s) - right);
      w[j + 1] += v * right;
    }
  }
  return w;
}

double bounded_lipschitz_lp(std::span<const double> w, double h, std::vector<double>* witness) {
  if (w.empty()) {
    if (witness) witness->clear();
    return 0.0;
  }
  const std::size_t M = w.size();
  std::vector<Vertex> v{{-1.0, -w[0]}, {1.0, w[0]}};
  std::vector<double> argmax(M);
  std::vector<Vertex> next;
  for (std::size_t j = 1; j < M; ++j) {
    const auto [il, ir] = plateau(v);
    argmax[j - 1] = v[il].x;
    next.clear();
    for (std::size_t k = 0; k <= il; ++k) next.push_back({v[k].x - h, v[k].y});
    for (std::size_t k = ir; k < v.size(); ++k) next.push_back({v[k].x + h, v[k].y});
    clip(next);
    for (Vertex& p : next) p.y += w[j] * p.x;
    v.swap(next);
  }
  const auto [il, ir] = plateau(v);
  (void)ir;
  argmax[M - 1] = v[il].x;
  const double value = v[il].y;
  if (witness) {
    witness->assign(M, 0.0);
    (*witness)[M - 1] = argmax[M - 1];
    for (std::size_t j = M - 1; j > 0; --j)
      (*witness)[j - 1] = std::clamp(argmax[j - 1], (*witness)[j] - h, (*witness)[j] + h);
  }
  return value;
}

KrResult kr_distance(const SignedMeasure& a, const SignedMeasure& b, double R, double grid_step) {
  const std::size_t M = kr_interval_count(R, grid_step);
  const double slack = 1e-12 * std::max(1.0, R);
  for (const SignedMeasure* m : {&a, &b})
    if (!m->empty() && (m->support_lo() < -R - slack || m->support_hi() > R + slack))
      throw DomainError("kr_distance: measure not supported in [-R, R]; restrict it first");
  KrResult out;
  out.R = R;
  out.grid_step = 2.0 * R / static_cast<double>(M);
  std::vector<double> w = hat_weights(a, R, M);
  const std::vector<double> wb = hat_weights(b, R, M);
  for (std::size_t j = 0; j < w.size(); ++j) w[j] -= wb[j];
  out.value = std::max(0.0, bounded_lipschitz_lp(w, out.grid_step, &out.witness));
  return out;
}

}  // namespace airy
