#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "oneproj/algorithms.hpp"
#include "oneproj/environment.hpp"
#include "oneproj/metrics.hpp"

namespace oneproj {

// One contender entry of the benchmark config.
struct ContenderSpec {
    std::string name; // algorithm variant name
    double threshold_scale = 1.0;
    double sogd_numerator_mult = 1.0;
    double delta = 1.0;
    // Constants are derived from the generated stream unless overridden.
    std::optional<double> g_override;
    std::optional<double> l_override;
    std::optional<double> d_override;
};

struct BenchConfig {
    EnvironmentConfig environment; // per-run seeds below replace its seed
    std::vector<ContenderSpec> algorithms;
    std::vector<std::uint64_t> seeds;
    std::int64_t record_every = 1;
    std::string output_dir; // may be overridden on the command line
    bool dump_streams = false;

    void validate() const;
};

BenchConfig parse_bench_config(const nlohmann::json& j);
BenchConfig load_bench_config(const std::string& path);

// Canonical JSON form (sorted keys, normalized defaults); the config hash
// is recomputable from it.
nlohmann::json bench_config_to_json(const BenchConfig& config);
std::uint64_t config_hash(const BenchConfig& config);

// Result of one (algorithm, seed) run.
struct RunResult {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::vector<std::int64_t> recorded_rounds;
    std::vector<double> cum_loss;        // at recorded rounds
    std::vector<double> cum_time_ns;     // at recorded rounds
    std::vector<std::int64_t> cum_proj;  // projections onto X
    std::vector<std::int64_t> cum_grad;  // gradient queries
    std::vector<std::int64_t> cum_val;   // value queries
    double final_loss = 0.0;
    double dynamic_regret = 0.0;
    double path_length = 0.0;
    double comparator_loss = 0.0;
    ProblemConstants constants;
    Diagnostics final_diag;
    std::string csv_path;
};

// Runs one (contender, seed) cell: full online loop with per-round timing
// of the learner's observe() call only.
RunResult run_single(const BenchConfig& config, const ContenderSpec& spec,
                     std::uint64_t seed);

struct BenchOutcome {
    std::vector<RunResult> runs;
    std::string aggregate_path;
    std::string plot_script_path;
};

// Full grid (algorithms x seeds), optionally with a worker pool. Writes one
// CSV per run, an aggregate JSON, and a plotting script into out_dir. Files
// are written atomically (tmp + rename).
BenchOutcome run_bench(const BenchConfig& config, const std::string& out_dir,
                       int jobs = 1);

// Configuration diagnostics: derived pool sizes, learning rates, thresholds
// and consistency warnings. Never throws on semantic mismatches; hard
// config errors (empty seeds, bad fields) surface as ConfigError from
// parse/validate instead.
std::vector<std::string> validate_bench(const BenchConfig& config);

} // namespace oneproj
