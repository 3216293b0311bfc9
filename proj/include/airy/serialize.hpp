#pragma once

#include <string>

#include "json.hpp"

#include "airy/airy_spectrum.hpp"
#include "airy/beta_ensemble.hpp"
#include "airy/kr_distance.hpp"
#include "airy/measure.hpp"
#include "airy/rate_function.hpp"
#include "airy/riccati.hpp"

namespace airy {

using Json = nlohmann::ordered_json;

// {support: [lo, hi], atoms: [{x, mass}...], density: {breaks: [...], values: [...]}}
Json measure_to_json(const SignedMeasure& mu);
SignedMeasure measure_from_json(const Json& j);

Json trace_to_json(const RiccatiTrace& trace);
Json sao_to_json(const SaoSample& sample);
Json spectrum_to_json(const EdgeScaledSpectrum& spec, double beta, std::uint64_t seed);
Json kr_to_json(const KrResult& kr);
Json rate_to_json(const RateSolution& sol, const SignedMeasure& target);
Json tail_to_json(const TailEstimate& est);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace airy
