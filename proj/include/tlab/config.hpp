#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace tlab {

/// Raised for malformed config files and record lines (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration. Lists are comma or whitespace separated.
struct ExperimentConfig {
    std::string experiment;
    std::string family = "gaussian";  // or "all"
    std::size_t n = 8;
    std::vector<double> p_list = {2, 4, 8};
    std::vector<double> t_grid = {0, 0.25, 0.5, 1};
    std::vector<double> eps_grid = {0.5, 0.6, 0.7, 1};
    std::uint64_t trials = 100000;
    std::size_t directions = 100;
    std::size_t restarts = 4;
    std::size_t steps = 100;
    std::uint64_t root_seed = 1;
    std::string out_path;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Parameters that determine the results (everything except out_path).
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);

}  // namespace tlab
