#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tlab/config.hpp"
#include "tlab/error.hpp"
#include "tlab/experiments.hpp"
#include "tlab/parallel.hpp"
#include "tlab/record.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kAssertionFailed = 1;
constexpr int kConfigError = 2;

int cmd_run(const std::string& config_path, const std::string& out_opt, std::optional<std::uint64_t> seed,
            std::size_t threads, bool no_timing) {
    tlab::ExperimentConfig cfg = tlab::load_config(config_path);
    if (seed) cfg.root_seed = *seed;
    if (!out_opt.empty()) cfg.out_path = out_opt;

    tlab::RunOptions opts;
    opts.threads = threads;
    opts.timing = !no_timing;
    const auto records = tlab::run_experiment(cfg, opts);

    if (!cfg.out_path.empty()) {
        std::ofstream out(cfg.out_path, std::ios::binary);
        if (!out) throw tlab::ConfigError("cannot open output file '" + cfg.out_path + "'");
        for (const auto& r : records) out << tlab::to_json_line(r) << '\n';
    } else {
        for (const auto& r : records) std::cout << tlab::to_json_line(r) << '\n';
    }
    tlab::print_summary(cfg.out_path.empty() ? std::cerr : std::cout, records);
    return tlab::all_pass(records) ? kOk : kAssertionFailed;
}

int cmd_replay(const std::string& path, std::size_t threads) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tlab::ConfigError("cannot open record file '" + path + "'");
    const auto records = tlab::read_records(in);
    tlab::RunOptions opts;
    opts.threads = threads;
    opts.timing = false;
    const auto outcome = tlab::replay(records, opts);
    for (const auto& m : outcome.mismatches)
        std::cout << "MISMATCH " << m.metric << " stored=" << tlab::format_double(m.stored)
                  << " recomputed=" << tlab::format_double(m.recomputed) << '\n';
    std::cout << "replayed " << outcome.checked << " records, " << outcome.mismatches.size() << " mismatches\n";
    return outcome.ok() ? kOk : kAssertionFailed;
}

int cmd_export(const std::string& records_path, const std::string& csv_path) {
    std::ifstream in(records_path, std::ios::binary);
    if (!in) throw tlab::ConfigError("cannot open record file '" + records_path + "'");
    const auto records = tlab::read_records(in);
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw tlab::ConfigError("cannot open csv file '" + csv_path + "'");
    tlab::export_csv(records, out);
    return kOk;
}

int cmd_list() {
    for (const auto& e : tlab::registry()) std::printf("%-22s %s\n", e.name.c_str(), e.statement.c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo verification lab for centroid bodies and inner thickening"};
    app.require_subcommand(1);

    std::string config_path, out_path, records_path, csv_path;
    std::optional<std::uint64_t> seed;
    std::size_t threads = 0;
    bool no_timing = false;

    auto* run = app.add_subcommand("run", "Run a configured experiment");
    run->add_option("config", config_path, "Config file")->required();
    run->add_option("--out", out_path, "JSON-lines output path (default: config out_path, else stdout)");
    run->add_option("--seed", seed, "Override root_seed");
    run->add_option("--threads", threads, "Worker threads (default: LAB_THREADS or hardware)");
    run->add_flag("--no-timing", no_timing, "Write wall_time_ms = 0 for byte-stable output");

    auto* rep = app.add_subcommand("replay", "Recompute stored records and compare bit-for-bit");
    rep->add_option("records", records_path, "JSON-lines record file")->required();
    rep->add_option("--threads", threads, "Worker threads");

    auto* exp = app.add_subcommand("export", "Flatten records to CSV");
    exp->add_option("records", records_path, "JSON-lines record file")->required();
    exp->add_option("csv", csv_path, "CSV output path")->required();

    auto* list = app.add_subcommand("list", "List registered experiments");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (threads > 0) tlab::set_default_threads(threads);
        if (*run) return cmd_run(config_path, out_path, seed, threads, no_timing);
        if (*rep) return cmd_replay(records_path, threads);
        if (*exp) return cmd_export(records_path, csv_path);
        if (*list) return cmd_list();
    } catch (const tlab::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const tlab::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAssertionFailed;
    }
    return kOk;
}
