#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlab/config.hpp"

namespace tlab {

/// One metric produced by an experiment, serialized as one JSON line.
struct ResultRecord {
    std::string experiment;
    ExperimentConfig params;
    std::string metric;
    std::string x_name;  // grid coordinate name ("t", "eps", "p"), empty if none
    double x = 0.0;
    double estimate = 0.0;
    std::optional<double> std_error;
    std::optional<double> ci_low;
    std::optional<double> ci_high;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double wall_time_ms = 0.0;
    std::optional<bool> pass;  // present only when the metric asserts an inequality
};

std::string to_json_line(const ResultRecord& r);
/// Throws ConfigError on malformed JSON or missing fields.
ResultRecord from_json_line(const std::string& line);

std::vector<ResultRecord> read_records(std::istream& in);

/// Columns, in order:
///   experiment,metric,x_name,x,estimate,stderr,ci_low,ci_high,samples,seed,wall_time_ms,pass
/// Missing optionals are empty cells. Doubles use shortest round-trip form.
inline constexpr const char* kCsvHeader =
    "experiment,metric,x_name,x,estimate,stderr,ci_low,ci_high,samples,seed,wall_time_ms,pass";

void export_csv(const std::vector<ResultRecord>& records, std::ostream& out);

/// Parses a CSV written by export_csv. `params` are not part of the CSV and
/// come back default-initialized.
std::vector<ResultRecord> import_csv(std::istream& in);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace tlab
