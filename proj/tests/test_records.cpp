#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "tlab/config.hpp"
#include "tlab/record.hpp"

using namespace tlab;

namespace {

ResultRecord example_record() {
    ResultRecord r;
    r.params = parse_config("experiment = deviation-curve\nfamily = laplace\nn = 16\nt_grid = 0, 0.5\n");
    r.experiment = r.params.experiment;
    r.metric = "deviation[laplace_product]";
    r.x_name = "t";
    r.x = 0.1;
    r.estimate = 1.0 / 3.0;
    r.std_error = 2.220446049250313e-16;
    r.ci_low = 0.3;
    r.ci_high = 0.36;
    r.samples = 123456789;
    r.seed = 18446744073709551615ull;
    r.wall_time_ms = 12;
    r.pass = true;
    return r;
}

void check_same(const ResultRecord& a, const ResultRecord& b) {
    CHECK(a.experiment == b.experiment);
    CHECK(a.metric == b.metric);
    CHECK(a.x_name == b.x_name);
    CHECK(a.x == b.x);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);
    CHECK(a.samples == b.samples);
    CHECK(a.seed == b.seed);
    CHECK(a.wall_time_ms == b.wall_time_ms);
    CHECK(a.pass == b.pass);
}

}  // namespace

TEST_CASE("config parsing") {
    const auto cfg = parse_config(
        "# comment\n"
        "experiment = small-ball\n"
        "family = laplace   # trailing\n"
        "n = 16\n"
        "p_list = 2 4, 8\n"
        "eps_grid = 0.5,0.6,0.7\n"
        "trials = 1000000\n"
        "root_seed = 99\n"
        "\n");
    CHECK(cfg.experiment == "small-ball");
    CHECK(cfg.family == "laplace");
    CHECK(cfg.n == 16);
    CHECK(cfg.p_list == std::vector<double>{2, 4, 8});
    CHECK(cfg.eps_grid == std::vector<double>{0.5, 0.6, 0.7});
    CHECK(cfg.trials == 1000000);
    CHECK(cfg.root_seed == 99);

    CHECK_THROWS_AS(parse_config("family = cube\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = x\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = x\nn = -3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = x\nn = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment = x\ntrials = 1e\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment x\n"), ConfigError);
}

TEST_CASE("config json round-trip") {
    const auto cfg = example_record().params;
    const auto back = config_from_json(nlohmann::json::parse(config_to_json(cfg).dump()));
    CHECK(config_to_json(back).dump() == config_to_json(cfg).dump());
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse("{\"experiment\": 3}")), ConfigError);
}

TEST_CASE("record json lines round-trip") {
    const ResultRecord r = example_record();
    const std::string line = to_json_line(r);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.rfind("{\"experiment\":", 0) == 0);
    check_same(from_json_line(line), r);

    ResultRecord bare = r;
    bare.std_error.reset();
    bare.ci_low.reset();
    bare.ci_high.reset();
    bare.pass.reset();
    check_same(from_json_line(to_json_line(bare)), bare);

    CHECK_THROWS_AS(from_json_line("{not json"), ConfigError);
    CHECK_THROWS_AS(from_json_line("{\"experiment\": \"isotropy\"}"), ConfigError);
    std::string mismatched = line;
    mismatched.replace(mismatched.find("\"deviation-curve\""), 17, "\"isotropy\"");
    CHECK_THROWS_AS(from_json_line(mismatched), ConfigError);

    std::stringstream ss(line + "\n\n" + line + "\n");
    CHECK(read_records(ss).size() == 2);
}

TEST_CASE("shortest round-trip formatting") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 5e-324, 123456789.125, -2.5, 0.0,
                     std::numeric_limits<double>::max()}) {
        const std::string s = format_double(v);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("csv export") {
    SUBCASE("header only for an empty stream") {
        std::stringstream ss;
        export_csv({}, ss);
        CHECK(ss.str() == std::string(kCsvHeader) + "\n");
        CHECK(import_csv(ss).empty());
    }
    SUBCASE("round-trip preserves every numeric field") {
        ResultRecord a = example_record();
        ResultRecord b = example_record();
        b.metric = "quoted, \"metric\"";
        b.std_error.reset();
        b.pass = false;
        b.estimate = 0.1 + 0.2;
        std::stringstream ss;
        export_csv({a, b}, ss);
        const auto back = import_csv(ss);
        REQUIRE(back.size() == 2);
        check_same(back[0], a);
        check_same(back[1], b);
    }
    SUBCASE("bad input") {
        std::stringstream bad("not,a,header\n");
        CHECK_THROWS_AS(import_csv(bad), ConfigError);
    }
}
