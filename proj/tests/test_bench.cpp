#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oneproj/bench.hpp"

using namespace oneproj;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json sample_config_json() {
    return json::parse(R"({
      "environment": {
        "T": 60,
        "d": 3,
        "domain": {"kind": "ellipsoid", "diag": [1.0, 2.0, 4.0], "level": 9.0},
        "drift": {"kind": "piecewise", "stages": 2},
        "noise_max": 0.1
      },
      "algorithms": [
        {"name": "efficient_dynamic_smallloss"},
        {"name": "baseline_ader_smallloss"}
      ],
      "seeds": [1, 2],
      "record_every": 10
    })");
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("oneproj_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

TEST_CASE("config parsing, validation errors, and canonical hash") {
    const auto config = parse_bench_config(sample_config_json());
    CHECK(config.environment.horizon == 60);
    CHECK(config.algorithms.size() == 2);
    CHECK(config.seeds == std::vector<std::uint64_t>{1, 2});

    // Hash is stable across reparses and sensitive to semantic changes.
    const auto same = parse_bench_config(sample_config_json());
    CHECK(config_hash(config) == config_hash(same));
    auto changed_json = sample_config_json();
    changed_json["record_every"] = 20;
    CHECK(config_hash(parse_bench_config(changed_json)) != config_hash(config));

    auto bad = sample_config_json();
    bad["seeds"] = json::array();
    CHECK_THROWS_AS(parse_bench_config(bad), ConfigError);

    auto unknown = sample_config_json();
    unknown["algorithms"] = json::array({"no_such_algorithm"});
    CHECK_THROWS_AS(parse_bench_config(unknown), ConfigError);

    auto shifted = sample_config_json();
    shifted["environment"]["domain"] = {{"kind", "ball"}, {"radius", 1.0}, {"center", {0.5, 0.0, 0.0}}};
    CHECK_THROWS_AS(parse_bench_config(shifted), UsageError); // non-centered domain
}

TEST_CASE("bench run: file layout, CSV schema, aggregate consistency") {
    const auto config = parse_bench_config(sample_config_json());
    TempDir tmp;
    const auto outcome = run_bench(config, tmp.path.string(), 2);

    // 2 algorithms x 2 seeds -> 4 CSVs + aggregate + plot script.
    CHECK(outcome.runs.size() == 4);
    CHECK(fs::exists(outcome.aggregate_path));
    CHECK(fs::exists(outcome.plot_script_path));
    int csv_count = 0;
    for (const auto& entry : fs::directory_iterator(tmp.path))
        if (entry.path().extension() == ".csv") ++csv_count;
    CHECK(csv_count == 4);

    // CSV: header plus strictly increasing rounds, monotone counters.
    const auto rows = read_csv(outcome.runs.front().csv_path);
    REQUIRE(rows.size() > 2);
    CHECK(rows[0] == std::vector<std::string>{"round", "cum_loss", "cum_time_ns",
                                              "proj_X", "grad_q", "val_q"});
    std::int64_t prev_round = 0, prev_proj = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto round = std::stoll(rows[i][0]);
        const auto proj = std::stoll(rows[i][3]);
        CHECK(round > prev_round);
        CHECK(proj >= prev_proj);
        prev_round = round;
        prev_proj = proj;
    }
    CHECK(prev_round == 60); // final round always recorded

    // Aggregate mean/std recomputed from the per-seed runs match the JSON.
    std::ifstream agg_in(outcome.aggregate_path);
    json agg;
    agg_in >> agg;
    CHECK(agg.at("config_hash").get<std::uint64_t>() ==
          config_hash(parse_bench_config(agg.at("config"))));
    for (const auto& spec : config.algorithms) {
        const json& ja = agg.at("algorithms").at(spec.name);
        std::vector<const RunResult*> runs;
        for (const RunResult& r : outcome.runs)
            if (r.algorithm == spec.name) runs.push_back(&r);
        REQUIRE(runs.size() == 2);
        const auto& mean = ja.at("cum_loss_mean");
        const auto& stdv = ja.at("cum_loss_std");
        for (std::size_t i = 0; i < mean.size(); ++i) {
            const double a = runs[0]->cum_loss[i], b = runs[1]->cum_loss[i];
            const double m = 0.5 * (a + b);
            const double s = std::sqrt(0.5 * ((a - m) * (a - m) + (b - m) * (b - m)));
            CHECK(std::abs(mean[i].get<double>() - m) <= 1e-12 * (1.0 + std::abs(m)));
            CHECK(std::abs(stdv[i].get<double>() - s) <= 1e-12 * (1.0 + std::abs(s)));
        }
        // Counter totals match the algorithm contracts.
        for (const auto& [seed, jr] : ja.at("seeds").items()) {
            if (spec.name == "efficient_dynamic_smallloss") {
                CHECK(jr.at("projections_onto_X").get<std::int64_t>() == 60);
                CHECK(jr.at("value_queries").get<std::int64_t>() == 0);
            } else {
                CHECK(jr.at("projections_onto_X").get<std::int64_t>() % 60 == 0);
            }
            CHECK(jr.at("gradient_queries").get<std::int64_t>() == 60);
        }
    }
}

TEST_CASE("bench reruns are numerically identical except timing") {
    const auto config = parse_bench_config(sample_config_json());
    TempDir tmp_a, tmp_b;
    const auto a = run_bench(config, tmp_a.path.string(), 1);
    const auto b = run_bench(config, tmp_b.path.string(), 2);
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        // Runs may complete in any order under the worker pool; match by key.
        const RunResult& ra = a.runs[i];
        const RunResult* rb = nullptr;
        for (const RunResult& r : b.runs)
            if (r.algorithm == ra.algorithm && r.seed == ra.seed) rb = &r;
        REQUIRE(rb != nullptr);
        CHECK(ra.cum_loss == rb->cum_loss);     // bitwise
        CHECK(ra.cum_proj == rb->cum_proj);
        CHECK(ra.dynamic_regret == rb->dynamic_regret);
    }
}

TEST_CASE("validate prints derived configuration and warnings") {
    auto config = parse_bench_config(sample_config_json());
    const auto lines = validate_bench(config);
    REQUIRE(lines.size() >= 3);
    bool saw_pool = false;
    for (const auto& line : lines)
        if (line.find("N=") != std::string::npos) saw_pool = true;
    CHECK(saw_pool);

    // D override mismatching the domain diameter draws a warning.
    config.algorithms[0].d_override = 123.0;
    bool warned = false;
    for (const auto& line : validate_bench(config))
        if (line.find("warning") != std::string::npos) warned = true;
    CHECK(warned);
}

TEST_CASE("validate reports the pinned pool size at a long horizon") {
    auto j = sample_config_json();
    j["environment"]["T"] = 20000;
    j["algorithms"] = json::array({"efficient_dynamic_worstcase"});
    const auto lines = validate_bench(parse_bench_config(j));
    bool saw = false;
    for (const auto& line : lines)
        if (line.find("N=8") != std::string::npos) saw = true;
    CHECK(saw); // ceil(log2(1 + 2*20000/5)/2) + 1 = 8
}

TEST_CASE("regret report is consistent with the online loss accumulation") {
    const auto config = parse_bench_config(sample_config_json());
    const auto r = run_single(config, config.algorithms.front(), 1);
    CHECK(std::abs(r.final_loss - (r.dynamic_regret + r.comparator_loss)) <=
          1e-9 * (1.0 + std::abs(r.final_loss)));
    CHECK(r.cum_loss.back() == r.final_loss);
}

TEST_CASE("partial failures are isolated per run") {
    auto j = sample_config_json();
    // A tiny D override breaks the G/D feedback contract mid-run for the
    // adaptive variant; the other contender must still complete.
    j["algorithms"] = json::array(
        {json{{"name", "efficient_adaptive"}, {"D", 1e-6}, {"threshold_scale", 1e12}},
         "efficient_dynamic_worstcase"});
    j["seeds"] = {1};
    const auto config = parse_bench_config(j);
    TempDir tmp;
    const auto outcome = run_bench(config, tmp.path.string(), 1);
    CHECK(outcome.runs.size() == 1);
    CHECK(outcome.runs.front().algorithm == "efficient_dynamic_worstcase");
    std::ifstream agg_in(outcome.aggregate_path);
    json agg;
    agg_in >> agg;
    REQUIRE(agg.at("failures").size() == 1);
    const auto failure = agg.at("failures").front().get<std::string>();
    CHECK(failure.find("efficient_adaptive") != std::string::npos);
}

TEST_CASE("degenerate shapes: stride beyond the horizon, one-round runs, d=1") {
    auto j = sample_config_json();
    j["record_every"] = 1000; // larger than T: only the final round is recorded
    j["seeds"] = {1};
    j["algorithms"] = json::array({"efficient_dynamic_worstcase"});
    TempDir tmp;
    const auto outcome = run_bench(parse_bench_config(j), tmp.path.string(), 1);
    REQUIRE(outcome.runs.size() == 1);
    CHECK(outcome.runs.front().recorded_rounds == std::vector<std::int64_t>{60});

    j["environment"]["T"] = 1;
    j["record_every"] = 1;
    const auto one = run_bench(parse_bench_config(j), tmp.path.string(), 1);
    REQUIRE(one.runs.size() == 1);
    CHECK(one.runs.front().recorded_rounds == std::vector<std::int64_t>{1});
    CHECK(one.runs.front().cum_proj.back() == 1);

    auto j1 = sample_config_json();
    j1["environment"]["d"] = 1;
    j1["environment"]["domain"] = {{"kind", "ball"}, {"radius", 2.0}, {"dim", 1}};
    j1["seeds"] = {4};
    j1["algorithms"] = json::array({"efficient_adaptive"});
    const auto thin = run_bench(parse_bench_config(j1), tmp.path.string(), 1);
    REQUIRE(thin.runs.size() == 1);
    CHECK(thin.runs.front().cum_grad.back() == 60);
}

TEST_CASE("stream dumps are emitted when requested") {
    auto j = sample_config_json();
    j["dump_streams"] = true;
    j["seeds"] = {7};
    j["algorithms"] = json::array({"efficient_dynamic_worstcase"});
    const auto config = parse_bench_config(j);
    TempDir tmp;
    run_bench(config, tmp.path.string(), 1);
    const auto rows = read_csv(tmp.path / "stream_seed7.csv");
    REQUIRE(rows.size() == 61); // header + T
    CHECK(rows[0].front() == "t");
    CHECK(rows[0].size() == 1 + 3 + 1 + 3); // t, x coords, y, w* coords
}
