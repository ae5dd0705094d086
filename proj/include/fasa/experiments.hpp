#pragma once

#include "fasa/catalog.hpp"
#include "fasa/serialize.hpp"

namespace fasa {

inline constexpr const char* kVersionStamp = "fasa 0.1.0";
inline constexpr const char* kOutDirEnv = "FASA_OUT";

struct ScenarioConfig {
    std::string scenario;
    int n = 1;
    int grid_m = 0;             // 0 = scenario default
    std::vector<int> schedule;  // empty = scenario default
    json zeta = {{"kind", "power"}, {"q", 1.0 / 3.0}};
    json zeta_cvx = {{"kind", "exp_neg"}};
    std::string omega_kind;  // "" = scenario default
    Box C{Vec{-0.5}, Vec{0.5}};
    std::string out_dir;  // "" = $FASA_OUT or ./out
    uint64_t seed = 12345;
    bool parallel = false;
    int instances = 200;

    static ScenarioConfig from_json(const json& j);
    json to_json() const;
    void validate() const;
};

struct ScenarioInfo {
    std::string name;
    std::string claim;    // what identity/semicontinuity statement it exercises
    std::string expects;  // the registry-expected outcome, e.g. "upper verdict FAIL"
    std::vector<int> dims;
};

const std::vector<ScenarioInfo>& scenario_registry();

struct ScenarioOutcome {
    std::string name;
    bool as_expected = false;
    json details;
    // (relative filename, contents) pairs persisted next to report.json
    std::vector<std::pair<std::string, std::string>> artifacts;
};

struct ExperimentReport {
    ScenarioConfig config;
    std::string version = kVersionStamp;
    std::vector<ScenarioOutcome> outcomes;
    bool all_as_expected = false;

    json to_json() const;  // timing-free: byte-identical for a fixed config+seed
};

// Executes the named scenario, persists report.json and the CSV artifacts
// under <out>/<scenario>/, and returns the report.
ExperimentReport run_scenario(const ScenarioConfig& cfg);

// Resolution order: config, $FASA_OUT, ./out.
std::string resolve_out_dir(const ScenarioConfig& cfg);

}  // namespace fasa
