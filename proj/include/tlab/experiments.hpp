#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/config.hpp"
#include "tlab/record.hpp"

namespace tlab {

struct ExperimentInfo {
    std::string name;
    std::string statement;  // what the experiment verifies
    std::function<std::vector<ResultRecord>(const ExperimentConfig&)> run;
};

const std::vector<ExperimentInfo>& registry();
const ExperimentInfo* find_experiment(std::string_view name);

struct RunOptions {
    std::size_t threads = 0;  // 0 = default_threads()
    bool timing = true;       // false writes wall_time_ms = 0 (byte-stable output)
};

/// Runs one configured experiment. Unknown names and invalid parameters
/// raise ConfigError.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// True when no record carries pass == false.
bool all_pass(const std::vector<ResultRecord>& records);

struct ReplayMismatch {
    std::string metric;
    double stored = 0.0;
    double recomputed = 0.0;
};

struct ReplayOutcome {
    std::size_t checked = 0;
    std::vector<ReplayMismatch> mismatches;
    [[nodiscard]] bool ok() const noexcept { return mismatches.empty(); }
};

/// Re-runs the experiment behind each record (once per distinct parameter
/// set) and compares estimates and pass flags bit-for-bit.
ReplayOutcome replay(const std::vector<ResultRecord>& records, const RunOptions& opts = {});

void print_summary(std::ostream& out, const std::vector<ResultRecord>& records);

}  // namespace tlab
