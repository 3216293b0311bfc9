#include "airy/serialize.hpp"

#include <fstream>
#include <sstream>

#include "airy/error.hpp"

namespace airy {

Json measure_to_json(const SignedMeasure& mu) {
  Json j;
  j["support"] = {mu.support_lo(), mu.support_hi()};
  Json atoms = Json::array();
  for (const Atom& a : mu.atoms()) atoms.push_back({{"x", a.x}, {"mass", a.mass}});
  j["atoms"] = atoms;
  j["density"] = {{"breaks", mu.breaks()}, {"values", mu.values()}};
  return j;
}

SignedMeasure measure_from_json(const Json& j) {
  try {
    std::vector<Atom> atoms;
    if (j.contains("atoms"))
      for (const auto& a : j.at("atoms")) atoms.push_back({a.at("x").get<double>(), a.at("mass").get<double>()});
    std::vector<double> breaks, values;
    if (j.contains("density")) {
      breaks = j.at("density").at("breaks").get<std::vector<double>>();
      values = j.at("density").at("values").get<std::vector<double>>();
    }
    return SignedMeasure(std::move(atoms), std::move(breaks), std::move(values));
  } catch (const Json::exception& e) {
    throw DomainError(std::string("measure JSON: ") + e.what());
  }
}

Json trace_to_json(const RiccatiTrace& t) {
  return {{"lambda", t.lambda}, {"start", t.start},        {"stop", t.stop},
          {"dt", t.dt},         {"amplitude", t.amplitude}, {"stochastic", t.stochastic},
          {"blowups", t.blowups}};
}

Json sao_to_json(const SaoSample& s) {
  return {{"beta", s.beta},
          {"lambda_max", s.lambda_max},
          {"eigenvalues", s.eigenvalues},
          {"seed", s.noise_id.seed},
          {"stream", s.noise_id.stream},
          {"dt", s.dt},
          {"L", s.L}};
}

Json spectrum_to_json(const EdgeScaledSpectrum& spec, double beta, std::uint64_t seed) {
  return {{"beta", beta},          {"n", spec.n},           {"k", spec.k},   {"seed", seed},
          {"lambdas", spec.lambdas}, {"tildes", spec.tildes}, {"bs", spec.bs}};
}

Json kr_to_json(const KrResult& kr) {
  return {{"value", kr.value}, {"R", kr.R}, {"grid_step", kr.grid_step}, {"witness", kr.witness}};
}

Json rate_to_json(const RateSolution& s, const SignedMeasure& target) {
  return {{"target", measure_to_json(target)},
          {"delta", s.delta},
          {"R", s.R},
          {"S", s.S},
          {"grid", s.cells},
          {"value", s.value},
          {"energy", s.energy},
          {"confinement", s.confinement},
          {"kr_gap", s.kr_gap},
          {"iterations", s.iterations},
          {"converged", s.converged},
          {"anchor_weight", s.anchor_weight},
          {"minimizer", measure_to_json(s.minimizer)}};
}

Json tail_to_json(const TailEstimate& e) {
  return {{"beta", e.beta},
          {"t", e.t},
          {"reps", e.reps},
          {"hits", e.hits},
          {"p_hat", e.p_hat},
          {"wilson_lo", e.wilson.lo},
          {"wilson_hi", e.wilson.hi},
          {"bound", e.bound},
          {"horizon", e.horizon},
          {"upper_only", e.upper_only}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << text;
  if (!out) throw DomainError("write failed: " + path);
}

}  // namespace airy
