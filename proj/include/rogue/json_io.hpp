#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "rogue/harness.hpp"
#include "rogue/model.hpp"
#include "rogue/power.hpp"

namespace rogue {

// JSON bindings for the external config and log formats.  Parse failures
// throw ConfigError carrying the offending field path.  Arms are serialized
// 1-based, matching the report convention; in-memory indices are 0-based.

using json = nlohmann::json;

json load_json_file(const std::string& path);

ScenarioConfig parse_scenario(const json& j, const std::string& path = "scenario");
json scenario_to_json(const ScenarioConfig& sc);

PowerSpec parse_power_spec(const json& j, const std::string& path = "power_spec");

PolicySpec parse_policy(const json& j, const std::string& path);

ExperimentConfig parse_experiment(const json& j);

InteractionLog parse_log(const json& j, const std::string& path = "log");
json log_to_json(const InteractionLog& log);

// Known-parameter file for the estimate pipeline: arm coefficient blocks
// (theta/x0 free), test level and baseline arm.
struct EstimateParams {
    std::vector<ArmSpec> arms;  // theta_true / x0_true ignored
    double alpha0 = 0.05;
    std::size_t baseline = 0;   // 0-based
};

EstimateParams parse_estimate_params(const json& j);

json fitted_params_to_json(const FittedArmParams& fit, std::size_t arm_index_1based,
                           double k_known);

}  // namespace rogue
