#include "airy/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "airy/error.hpp"

namespace airy {
namespace {

// Piecewise-constant density from box events (position, jump, +1 open / -1 close).
struct BoxEvent {
  double x;
  double jump;
  int open;
  bool operator<(const BoxEvent& o) const { return x < o.x; }
};

void sweep_events(std::vector<BoxEvent>& events, std::vector<double>& breaks, std::vector<double>& values) {
  std::stable_sort(events.begin(), events.end());
  double level = 0.0;
  int open = 0;
  for (std::size_t i = 0; i < events.size();) {
    const double x = events[i].x;
    for (; i < events.size() && events[i].x == x; ++i) {
      level += events[i].jump;
      open += events[i].open;
    }
    if (open == 0) level = 0.0;
    breaks.push_back(x);
    if (i < events.size()) values.push_back(level);
  }
}

}  // namespace

SignedMeasure::SignedMeasure(std::vector<Atom> atoms, std::vector<double> breaks,
                             std::vector<double> values)
    : atoms_(std::move(atoms)), breaks_(std::move(breaks)), values_(std::move(values)) {
  if (breaks_.empty() != values_.empty() || (!breaks_.empty() && breaks_.size() != values_.size() + 1))
    throw DomainError("SignedMeasure: need breaks.size() == values.size() + 1");
  for (std::size_t i = 0; i + 1 < breaks_.size(); ++i)
    if (!(breaks_[i] < breaks_[i + 1])) throw DomainError("SignedMeasure: breaks must be strictly increasing");
  for (double b : breaks_)
    if (!std::isfinite(b)) throw DomainError("SignedMeasure: non-finite break");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("SignedMeasure: non-finite density value");
  for (const Atom& a : atoms_)
    if (!std::isfinite(a.x) || !std::isfinite(a.mass)) throw DomainError("SignedMeasure: non-finite atom");
  canonicalize();
}

SignedMeasure SignedMeasure::from_atoms(std::vector<Atom> atoms) { return SignedMeasure(std::move(atoms), {}, {}); }

SignedMeasure SignedMeasure::from_cell_masses(std::vector<double> breaks, std::span<const double> masses) {
  if (breaks.size() != masses.size() + 1) throw DomainError("from_cell_masses: need one more break than masses");
  std::vector<double> values(masses.size());
  for (std::size_t i = 0; i < masses.size(); ++i) values[i] = masses[i] / (breaks[i + 1] - breaks[i]);
  return SignedMeasure({}, std::move(breaks), std::move(values));
}

void SignedMeasure::canonicalize() {
  std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  std::vector<Atom> merged;
  for (const Atom& a : atoms_) {
    if (!merged.empty() && merged.back().x == a.x)
      merged.back().mass += a.mass;
    else
      merged.push_back(a);
  }
  std::erase_if(merged, [](const Atom& a) { return a.mass == 0.0; });
  atoms_ = std::move(merged);

  std::vector<double> b, v;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] == 0.0 && (v.empty() || v.back() == 0.0)) {
      if (v.empty()) continue;  // leading zero cell
      b.back() = breaks_[i + 1];  // extend the previous zero cell
      continue;
    }
    if (b.empty()) b.push_back(breaks_[i]);
    v.push_back(values_[i]);
    b.push_back(breaks_[i + 1]);
  }
  while (!v.empty() && v.back() == 0.0) {
    v.pop_back();
    b.pop_back();
  }
  if (v.empty()) b.clear();
  breaks_ = std::move(b);
  values_ = std::move(v);
}

double SignedMeasure::support_lo() const {
  double lo = std::numeric_limits<double>::infinity();
  if (!atoms_.empty()) lo = atoms_.front().x;
  if (!breaks_.empty()) lo = std::min(lo, breaks_.front());
  return std::isinf(lo) ? 0.0 : lo;
}

double SignedMeasure::support_hi() const {
  double hi = -std::numeric_limits<double>::infinity();
  if (!atoms_.empty()) hi = atoms_.back().x;
  if (!breaks_.empty()) hi = std::max(hi, breaks_.back());
  return std::isinf(hi) ? 0.0 : hi;
}

double SignedMeasure::atom_mass() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.mass;
  return s;
}

double SignedMeasure::total_mass() const {
  double s = atom_mass();
  for (std::size_t i = 0; i < values_.size(); ++i) s += cell_mass(i);
  return s;
}

double SignedMeasure::total_variation() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += std::fabs(a.mass);
  for (std::size_t i = 0; i < values_.size(); ++i) s += std::fabs(cell_mass(i));
  return s;
}

double SignedMeasure::mass_in(double a, double b) const {
  if (!(a <= b)) return 0.0;
  double s = 0.0;
  for (const Atom& at : atoms_)
    if (at.x >= a && at.x <= b) s += at.mass;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double lo = std::max(a, breaks_[i]), hi = std::min(b, breaks_[i + 1]);
    if (hi > lo) s += values_[i] * (hi - lo);
  }
  return s;
}

SignedMeasure SignedMeasure::operator+(const SignedMeasure& other) const {
  std::vector<Atom> atoms = atoms_;
  atoms.insert(atoms.end(), other.atoms_.begin(), other.atoms_.end());
  if (breaks_.empty()) return SignedMeasure(std::move(atoms), other.breaks_, other.values_);
  if (other.breaks_.empty()) return SignedMeasure(std::move(atoms), breaks_, values_);
  std::vector<double> breaks;
  std::merge(breaks_.begin(), breaks_.end(), other.breaks_.begin(), other.breaks_.end(),
             std::back_inserter(breaks));
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto value_at = [](const std::vector<double>& br, const std::vector<double>& val, double x) {
    if (x < br.front() || x >= br.back()) return 0.0;
    const auto it = std::upper_bound(br.begin(), br.end(), x);
    return val[static_cast<std::size_t>(it - br.begin()) - 1];
  };
  std::vector<double> values(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    values[i] = value_at(breaks_, values_, mid) + value_at(other.breaks_, other.values_, mid);
  }
  return SignedMeasure(std::move(atoms), std::move(breaks), std::move(values));
}

SignedMeasure SignedMeasure::operator*(double c) const {
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.mass *= c;
  std::vector<double> values = values_;
  for (double& v : values) v *= c;
  return SignedMeasure(std::move(atoms), breaks_, std::move(values));
}

SignedMeasure SignedMeasure::operator-(const SignedMeasure& other) const { return *this + other * -1.0; }

double nu0_mass(double a, double b) {
  a = std::max(a, 0.0);
  if (!(b > a)) return 0.0;
  return 2.0 / (3.0 * std::numbers::pi) * (std::pow(b, 1.5) - std::pow(a, 1.5));
}

SignedMeasure nu0_on_breaks(std::span<const double> breaks) {
  if (breaks.size() < 2) return {};
  std::vector<double> masses(breaks.size() - 1);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) masses[i] = nu0_mass(breaks[i], breaks[i + 1]);
  return SignedMeasure::from_cell_masses(std::vector<double>(breaks.begin(), breaks.end()), masses);
}

SignedMeasure nu0_restricted(double R, std::size_t cells) {
  if (!(R >= 0.0)) throw DomainError("nu0_restricted: R must be >= 0");
  if (R == 0.0) return {};
  if (cells == 0) throw DomainError("nu0_restricted: need at least one cell");
  std::vector<double> breaks(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) breaks[i] = R * static_cast<double>(i) / static_cast<double>(cells);
  breaks.back() = R;
  return nu0_on_breaks(breaks);
}

SignedMeasure restrict(const SignedMeasure& mu, double R) {
  if (!(R >= 0.0)) throw DomainError("restrict: R must be >= 0");
  std::vector<Atom> atoms;
  for (const Atom& a : mu.atoms())
    if (a.x >= -R && a.x <= R) atoms.push_back(a);
  std::vector<double> breaks, values;
  const auto& br = mu.breaks();
  for (std::size_t i = 0; i < mu.cell_count(); ++i) {
    const double lo = std::max(br[i], -R), hi = std::min(br[i + 1], R);
    if (!(hi > lo)) continue;
    if (breaks.empty()) breaks.push_back(lo);
    breaks.back() = lo;
    values.push_back(mu.values()[i]);
    breaks.push_back(hi);
  }
  return SignedMeasure(std::move(atoms), std::move(breaks), std::move(values));
}

SignedMeasure empirical_nu_kR(std::span<const double> eigs, std::size_t k, double R, std::size_t cells) {
  if (k == 0) throw DomainError("empirical_nu_kR: k must be positive");
  if (!(R >= 10.0)) throw DomainError("empirical_nu_kR: R must be >= 10");
  const double scale = std::pow(static_cast<double>(k), -2.0 / 3.0);
  const double w = 1.0 / static_cast<double>(k);
  std::vector<Atom> atoms;
  for (double l : eigs) {
    const double x = scale * l;
    if (x >= -R && x <= R) atoms.push_back({x, w});
  }
  return SignedMeasure::from_atoms(std::move(atoms)) - nu0_restricted(R, cells);
}

std::string admissibility_violation(const SignedMeasure& mu, double R, bool zero_mass, double tol) {
  std::ostringstream msg;
  for (const Atom& a : mu.atoms())
    if (a.mass < 0.0) {
      msg << "negative atom of mass " << a.mass << " at x=" << a.x;
      return msg.str();
    }
  const auto& br = mu.breaks();
  for (std::size_t i = 0; i < mu.cell_count(); ++i) {
    const double lo = br[i], hi = br[i + 1];
    const double floor = nu0_mass(std::max(lo, -R), std::min(hi, R));
    if (mu.cell_mass(i) + floor < -tol) {
      msg << "density below -nu_0 on [" << lo << ", " << hi << "]: cell mass " << mu.cell_mass(i)
          << ", nu_0 mass " << floor;
      return msg.str();
    }
  }
  if (zero_mass && std::fabs(mu.total_mass()) > 1e-10) {
    msg << "total mass " << mu.total_mass() << " is not zero";
    return msg.str();
  }
  return {};
}

bool is_admissible(const SignedMeasure& mu, double R, bool zero_mass, double tol) {
  return admissibility_violation(mu, R, zero_mass, tol).empty();
}

SignedMeasure smooth_atoms(std::span<const double> points, double half_width, double mass_each) {
  if (!(half_width > 0.0)) throw DomainError("smooth_atoms: half_width must be positive");
  std::vector<BoxEvent> events;
  const double d = mass_each / (2.0 * half_width);
  for (double x : points) {
    events.push_back({x - half_width, d, 1});
    events.push_back({x + half_width, -d, -1});
  }
  std::vector<double> breaks, values;
  sweep_events(events, breaks, values);
  return SignedMeasure({}, std::move(breaks), std::move(values));
}

SignedMeasure smooth_atoms(const SignedMeasure& mu, double half_width) {
  if (!(half_width > 0.0)) throw DomainError("smooth_atoms: half_width must be positive");
  std::vector<BoxEvent> events;
  for (const Atom& a : mu.atoms()) {
    const double d = a.mass / (2.0 * half_width);
    events.push_back({a.x - half_width, d, 1});
    events.push_back({a.x + half_width, -d, -1});
  }
  std::vector<double> breaks, values;
  sweep_events(events, breaks, values);
  return SignedMeasure({}, mu.breaks(), mu.values()) + SignedMeasure({}, std::move(breaks), std::move(values));
}

}  // namespace airy
