// Strict JSON configuration for experiments.
//
// Schema rules: unknown keys are rejected with the full field path; optional
// keys have documented defaults that are echoed back on serialization, so
// parse -> serialize -> parse is the identity and the persisted config.json
// records every effective value.  Complex numbers are two-element arrays
// [re, im].

#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "fibermetric/experiments.hpp"
#include "fibermetric/family.hpp"

namespace fm {

using Json = nlohmann::json;

// registry of experiment names accepted by ExperimentConfig
const std::vector<std::string>& experiment_registry();

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string output_dir;  // default: runs/<experiment>
  Json parameters;         // experiment-specific subdocument (validated late)
};

Json load_json_file(const std::string& path);

ExperimentConfig parse_experiment_config(const Json& j);
Json experiment_config_to_json(const ExperimentConfig& c);

// nested parsers used by the runner (all strict)
FamilyConfig family_from_json(const Json& j, const std::string& path);
Json family_to_json(const FamilyConfig& cfg);
Schedule schedule_from_json(const Json& j, const std::string& path);
Json schedule_to_json(const Schedule& s);
MarkedDivisor divisor_from_json(const Json& j, const std::string& path);
Json divisor_to_json(const MarkedDivisor& d);

// strict-object helpers shared with the runner's parameter handling
void require_keys(const Json& j, const std::string& path,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional);
double get_number(const Json& j, const std::string& path, const std::string& key);
double get_number_or(const Json& j, const std::string& path,
                     const std::string& key, double fallback);
cplx get_complex_or(const Json& j, const std::string& path,
                    const std::string& key, cplx fallback);
Json complex_to_json(cplx v);

}  // namespace fm
