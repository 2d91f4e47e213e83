#include "tlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace tlab {
namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
    T out{};
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError("config: bad value for " + key + ": '" + value + "'");
    return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::string v = value;
    for (char& c : v)
        if (c == ',') c = ' ';
    std::istringstream in(v);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_number<double>(key, tok));
    if (out.empty()) throw ConfigError("config: empty list for " + key);
    return out;
}

void require_positive(bool ok, const std::string& key) {
    if (!ok) throw ConfigError("config: " + key + " must be positive");
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (value.empty()) throw ConfigError("config: empty value for " + key);

        if (key == "experiment") cfg.experiment = value;
        else if (key == "family") cfg.family = value;
        else if (key == "n") cfg.n = parse_number<std::size_t>(key, value);
        else if (key == "p_list") cfg.p_list = parse_list(key, value);
        else if (key == "t_grid") cfg.t_grid = parse_list(key, value);
        else if (key == "eps_grid") cfg.eps_grid = parse_list(key, value);
        else if (key == "trials") cfg.trials = parse_number<std::uint64_t>(key, value);
        else if (key == "directions") cfg.directions = parse_number<std::size_t>(key, value);
        else if (key == "restarts") cfg.restarts = parse_number<std::size_t>(key, value);
        else if (key == "steps") cfg.steps = parse_number<std::size_t>(key, value);
        else if (key == "root_seed") cfg.root_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "out_path") cfg.out_path = value;
        else throw ConfigError("config: unknown key '" + key + "'");
    }
    if (cfg.experiment.empty()) throw ConfigError("config: missing 'experiment'");
    require_positive(cfg.n >= 1, "n");
    require_positive(cfg.trials >= 1, "trials");
    require_positive(cfg.directions >= 1, "directions");
    require_positive(cfg.restarts >= 1, "restarts");
    require_positive(cfg.steps >= 1, "steps");
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["experiment"] = cfg.experiment;
    j["family"] = cfg.family;
    j["n"] = cfg.n;
    j["p_list"] = cfg.p_list;
    j["t_grid"] = cfg.t_grid;
    j["eps_grid"] = cfg.eps_grid;
    j["trials"] = cfg.trials;
    j["directions"] = cfg.directions;
    j["restarts"] = cfg.restarts;
    j["steps"] = cfg.steps;
    j["root_seed"] = cfg.root_seed;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig cfg;
        cfg.experiment = j.at("experiment").get<std::string>();
        cfg.family = j.at("family").get<std::string>();
        cfg.n = j.at("n").get<std::size_t>();
        cfg.p_list = j.at("p_list").get<std::vector<double>>();
        cfg.t_grid = j.at("t_grid").get<std::vector<double>>();
        cfg.eps_grid = j.at("eps_grid").get<std::vector<double>>();
        cfg.trials = j.at("trials").get<std::uint64_t>();
        cfg.directions = j.at("directions").get<std::size_t>();
        cfg.restarts = j.at("restarts").get<std::size_t>();
        cfg.steps = j.at("steps").get<std::size_t>();
        cfg.root_seed = j.at("root_seed").get<std::uint64_t>();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("params: ") + e.what());
    }
}

}  // namespace tlab
