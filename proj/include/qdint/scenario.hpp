#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qdint/core.hpp"

namespace qdint {

inline constexpr const char* kArtifactVersion = "0.1.0";

using ParamValue = std::variant<double, std::string>;

// One scenario run: which physics to execute plus a flat parameter map.
// All rates are dimensionless in units of Gamma1 unless a scenario says
// otherwise.
struct ScenarioConfig {
    std::string scenario;
    std::map<std::string, ParamValue> parameters;
    std::string output;          // empty = stdout
    std::string format = "csv";  // csv | json

    bool operator==(const ScenarioConfig&) const = default;
};

struct ResultEnvelope {
    std::string scenario;
    std::string config_echo; // canonical JSON of the resolved config
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::map<std::string, ParamValue> summary;
    bool ok = true;
    std::string error;
};

const std::vector<std::string>& known_scenarios();

// JSON <-> config. parse_config(emit_config(c)) == c.
ScenarioConfig parse_config(const std::string& json_text);
std::string emit_config(const ScenarioConfig& cfg);

// Execute one scenario. ValidationError lists every missing/invalid key;
// physics and numerics failures surface as NumericsError.
ResultEnvelope run_scenario(const ScenarioConfig& cfg);

// Independent runs along one parameter axis, order preserving. Individual
// failures are recorded in the envelope, not thrown. Points may run
// concurrently, capped by QDINT_THREADS.
std::vector<ResultEnvelope> sweep(const ScenarioConfig& cfg, const std::string& axis,
                                  const std::vector<ParamValue>& values);

unsigned sweep_thread_cap();

// Deterministic renderings: 12 significant digits, '#'-prefixed metadata
// above the CSV header.
std::string render_csv(const ResultEnvelope& env);
std::string render_json(const ResultEnvelope& env);

} // namespace qdint
