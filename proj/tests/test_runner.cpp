#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "smdplab/runner.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace smdplab;
namespace fs = std::filesystem;

namespace {

const char* kMinimalConfig = R"({
  "out_dir": "OUTDIR",
  "seeds": [1],
  "runs": [
    {
      "name": "mini",
      "agent": "smdp-ucrl",
      "episodes": 10,
      "delta": 0.1,
      "env": {"preset": "chain", "length": 4, "horizon": 6, "noise": 0.1, "max_advance": 2}
    }
  ]
})";

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string write_config(const std::string& dir, const std::string& text) {
    fs::create_directories(dir);
    const std::string path = dir + "/config.json";
    std::ofstream out(path);
    out << text;
    return path;
}

std::string with_outdir(std::string text, const std::string& dir) {
    const auto pos = text.find("OUTDIR");
    text.replace(pos, 6, dir);
    return text;
}

}  // namespace

TEST_CASE("a minimal config produces the promised artifacts") {
    const std::string base = "runner_test_minimal";
    fs::remove_all(base);
    const std::string out = base + "/out";
    const std::string cfg = write_config(base, with_outdir(kMinimalConfig, out));
    RunnerOverrides overrides;
    CHECK(run_experiment(cfg, overrides) == 0);
    CHECK(fs::exists(out + "/mini_seed1.csv"));
    CHECK(fs::exists(out + "/summary.csv"));
    CHECK(fs::exists(out + "/manifest.json"));
    const CsvTable table = read_csv(out + "/mini_seed1.csv");
    CHECK(table.header.size() == 8);
    CHECK(table.header[0] == "episode");
    CHECK(table.rows.size() == 10);
    fs::remove_all(base);
}

TEST_CASE("re-running an identical config is byte-identical") {
    const std::string base = "runner_test_repeat";
    fs::remove_all(base);
    const std::string out1 = base + "/a";
    const std::string out2 = base + "/b";
    const std::string cfg1 = write_config(base + "/c1", with_outdir(kMinimalConfig, out1));
    const std::string cfg2 = write_config(base + "/c2", with_outdir(kMinimalConfig, out2));
    RunnerOverrides overrides;
    REQUIRE(run_experiment(cfg1, overrides) == 0);
    REQUIRE(run_experiment(cfg2, overrides) == 0);
    CHECK(slurp(out1 + "/mini_seed1.csv") == slurp(out2 + "/mini_seed1.csv"));
    CHECK(slurp(out1 + "/summary.csv") == slurp(out2 + "/summary.csv"));
    fs::remove_all(base);
}

TEST_CASE("unknown config keys are named in the error") {
    CHECK_THROWS_WITH_AS(
        parse_experiment_config(R"({"seeds": [1], "runs": [], "typo_key": 3})"),
        doctest::Contains("typo_key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({
            "seeds": [1],
            "runs": [{"name": "x", "agent": "smdp-ucrl", "episodes": 5,
                      "env": {"preset": "chain", "horizon": 5, "slip": 0.1}}]
        })"),
                         doctest::Contains("slip"), std::invalid_argument);
}

TEST_CASE("invalid field values name the field") {
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({"seeds": [1, 1], "runs": []})"),
                         doctest::Contains("seeds"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({
            "seeds": [1],
            "runs": [{"name": "x", "agent": "hover", "episodes": 5,
                      "env": {"preset": "chain", "horizon": 5}}]
        })"),
                         doctest::Contains("agent"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({
            "seeds": [1],
            "runs": [{"name": "x", "agent": "flat-ucrl", "episodes": 5, "delta": 1.5,
                      "env": {"preset": "chain", "horizon": 5}}]
        })"),
                         doctest::Contains("delta"), std::invalid_argument);
}

TEST_CASE("the manifest hash tracks config changes") {
    const std::string base = "runner_test_hash";
    fs::remove_all(base);
    const std::string out1 = base + "/a", out2 = base + "/b", out3 = base + "/c";
    RunnerOverrides overrides;
    REQUIRE(run_experiment(write_config(base + "/c1", with_outdir(kMinimalConfig, out1)),
                           overrides) == 0);
    // same config, different out dir only
    std::string changed = with_outdir(kMinimalConfig, out2);
    REQUIRE(run_experiment(write_config(base + "/c2", changed), overrides) == 0);
    // a real field change
    std::string eps = with_outdir(kMinimalConfig, out3);
    eps.replace(eps.find("\"episodes\": 10"), 14, "\"episodes\": 11");
    REQUIRE(run_experiment(write_config(base + "/c3", eps), overrides) == 0);

    auto hash_of = [](const std::string& dir) {
        const std::string text = slurp(dir + "/manifest.json");
        const auto pos = text.find("config_hash");
        return text.substr(pos, text.find(',', pos) - pos);
    };
    CHECK(hash_of(out1) != hash_of(out2));  // out_dir participates in the hash
    CHECK(hash_of(out1) != hash_of(out3));
    fs::remove_all(base);
}

TEST_CASE("comparison tables report ratios and crossings") {
    const std::string base = "runner_test_compare";
    fs::remove_all(base);
    const std::string out1 = base + "/a", out2 = base + "/b";
    RunnerOverrides overrides;
    REQUIRE(run_experiment(write_config(base + "/c1", with_outdir(kMinimalConfig, out1)),
                           overrides) == 0);
    REQUIRE(run_experiment(write_config(base + "/c2", with_outdir(kMinimalConfig, out2)),
                           overrides) == 0);
    const std::string table_path = base + "/compare.csv";
    CHECK(compare_runs({out1, out2}, table_path) == 0);
    const CsvTable table = read_csv(table_path);
    REQUIRE_FALSE(table.rows.empty());
    // identical runs have ratio 1 wherever regret is nonzero
    const std::size_t ratio_col = table.header.size() - 1;
    for (const auto& row : table.rows)
        if (!row[ratio_col].empty())
            CHECK(std::strtod(row[ratio_col].c_str(), nullptr) == doctest::Approx(1.0));
    fs::remove_all(base);
}

TEST_CASE("seed offsets shift every seed") {
    const std::string base = "runner_test_offset";
    fs::remove_all(base);
    const std::string out = base + "/out";
    const std::string cfg = write_config(base, with_outdir(kMinimalConfig, out));
    RunnerOverrides overrides;
    overrides.seed_offset = 100;
    REQUIRE(run_experiment(cfg, overrides) == 0);
    CHECK(fs::exists(out + "/mini_seed101.csv"));
    fs::remove_all(base);
}

TEST_CASE("two-phase runs work end to end through the runner") {
    const std::string base = "runner_test_two_phase";
    fs::remove_all(base);
    const std::string out = base + "/out";
    const std::string config = R"({
      "out_dir": ")" + out + R"(",
      "seeds": [2],
      "runs": [
        {"name": "tp", "agent": "two-phase", "episodes": 60, "delta": 0.1,
         "env": {"preset": "four-rooms", "room": 2, "horizon": 10, "noise": 0.0},
         "scaffold_horizon": 6, "budget": 5}
      ]
    })";
    const std::string cfg = write_config(base, config);
    RunnerOverrides overrides;
    REQUIRE(run_experiment(cfg, overrides) == 0);
    const CsvTable table = read_csv(out + "/tp_seed2.csv");
    REQUIRE(table.rows.size() == 60);
    // 9 options at 5 episodes each, then the second phase
    int phase1 = 0, phase2 = 0;
    for (const auto& row : table.rows) {
        if (row[1] == "1") ++phase1;
        if (row[1] == "2") ++phase2;
    }
    CHECK(phase1 == 45);
    CHECK(phase2 == 15);
    CHECK(fs::exists(out + "/tp_seed2.stats"));
    fs::remove_all(base);
}

TEST_CASE("run directories carry resumable statistics snapshots") {
    const std::string base = "runner_test_stats";
    fs::remove_all(base);
    const std::string out = base + "/out";
    const std::string cfg = write_config(base, with_outdir(kMinimalConfig, out));
    RunnerOverrides overrides;
    REQUIRE(run_experiment(cfg, overrides) == 0);
    std::ifstream in(out + "/mini_seed1.stats");
    REQUIRE(in.good());
    const auto stats = smdplab::SufficientStats::load(in);
    long total = 0;
    for (int h = 1; h < stats.horizon(); ++h)
        for (int c = 0; c < stats.num_choices(); ++c)
            for (int s = 0; s < stats.num_states(); ++s) total += stats.count(s, c, h);
    CHECK(total > 0);
    fs::remove_all(base);
}

TEST_CASE("plot emission writes a vector graphic") {
    const std::string base = "runner_test_plot";
    fs::remove_all(base);
    const std::string out = base + "/out";
    const std::string cfg = write_config(base, with_outdir(kMinimalConfig, out));
    RunnerOverrides overrides;
    overrides.plot = true;
    REQUIRE(run_experiment(cfg, overrides) == 0);
    const std::string svg = slurp(out + "/regret.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    fs::remove_all(base);
}
