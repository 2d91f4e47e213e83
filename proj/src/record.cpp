#include "tlab/record.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace tlab {

using ojson = nlohmann::ordered_json;

namespace {

template <class T>
void put_optional(ojson& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
    else j[key] = nullptr;
}

template <class T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
    const auto& v = j.at(key);
    if (v.is_null()) return std::nullopt;
    return v.get<T>();
}

}  // namespace

std::string to_json_line(const ResultRecord& r) {
    ojson j;
    j["experiment"] = r.experiment;
    j["params"] = config_to_json(r.params);
    j["metric"] = r.metric;
    j["x_name"] = r.x_name;
    j["x"] = r.x;
    j["estimate"] = r.estimate;
    put_optional(j, "stderr", r.std_error);
    put_optional(j, "ci_low", r.ci_low);
    put_optional(j, "ci_high", r.ci_high);
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["wall_time_ms"] = r.wall_time_ms;
    put_optional(j, "pass", r.pass);
    return j.dump();
}

ResultRecord from_json_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("record: invalid JSON: ") + e.what());
    }
    try {
        ResultRecord r;
        r.experiment = j.at("experiment").get<std::string>();
        r.params = config_from_json(j.at("params"));
        r.metric = j.at("metric").get<std::string>();
        r.x_name = j.at("x_name").get<std::string>();
        r.x = j.at("x").get<double>();
        r.estimate = j.at("estimate").get<double>();
        r.std_error = get_optional<double>(j, "stderr");
        r.ci_low = get_optional<double>(j, "ci_low");
        r.ci_high = get_optional<double>(j, "ci_high");
        r.samples = j.at("samples").get<std::uint64_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.wall_time_ms = j.at("wall_time_ms").get<double>();
        r.pass = get_optional<bool>(j, "pass");
        if (r.params.experiment != r.experiment) throw ConfigError("record: params/experiment mismatch");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("record: schema mismatch: ") + e.what());
    }
}

std::vector<ResultRecord> read_records(std::istream& in) {
    std::vector<ResultRecord> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        out.push_back(from_json_line(line));
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> cells(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cells.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cells.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.emplace_back();
        } else if (c != '\r') {
            cells.back() += c;
        }
    }
    return cells;
}

std::optional<double> opt_cell(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("csv: bad number '" + s + "'");
    return v;
}

double num_cell(const std::string& s) {
    const auto v = opt_cell(s);
    if (!v) throw ConfigError("csv: missing required number");
    return *v;
}

std::uint64_t uint_cell(const std::string& s) {
    std::uint64_t v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError("csv: bad integer '" + s + "'");
    return v;
}

std::string opt_str(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

void export_csv(const std::vector<ResultRecord>& records, std::ostream& out) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
        out << csv_escape(r.experiment) << ',' << csv_escape(r.metric) << ',' << csv_escape(r.x_name) << ','
            << format_double(r.x) << ',' << format_double(r.estimate) << ',' << opt_str(r.std_error) << ','
            << opt_str(r.ci_low) << ',' << opt_str(r.ci_high) << ',' << r.samples << ',' << r.seed << ','
            << format_double(r.wall_time_ms) << ',' << (r.pass ? (*r.pass ? "true" : "false") : "") << '\n';
    }
}

std::vector<ResultRecord> import_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("csv: missing or unexpected header");
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto c = csv_split(line);
        if (c.size() != 12) throw ConfigError("csv: expected 12 columns");
        ResultRecord r;
        r.experiment = c[0];
        r.metric = c[1];
        r.x_name = c[2];
        r.x = num_cell(c[3]);
        r.estimate = num_cell(c[4]);
        r.std_error = opt_cell(c[5]);
        r.ci_low = opt_cell(c[6]);
        r.ci_high = opt_cell(c[7]);
        r.samples = uint_cell(c[8]);
        r.seed = uint_cell(c[9]);
        r.wall_time_ms = num_cell(c[10]);
        if (c[11] == "true") r.pass = true;
        else if (c[11] == "false") r.pass = false;
        else if (!c[11].empty()) throw ConfigError("csv: bad pass flag");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace tlab
