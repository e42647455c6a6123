#include "oneproj/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "oneproj/covers.hpp"

namespace oneproj {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCodeVersion = "oneproj 0.1.0";

FeasibleDomain parse_domain(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ball") {
        if (j.contains("center"))
            return FeasibleDomain::ball(j.at("radius").get<double>(),
                                        j.at("center").get<Vec>());
        return FeasibleDomain::ball(j.at("radius").get<double>(),
                                    j.at("dim").get<std::size_t>());
    }
    if (kind == "box")
        return FeasibleDomain::box(j.at("lower").get<Vec>(), j.at("upper").get<Vec>());
    if (kind == "ellipsoid")
        return FeasibleDomain::ellipsoid(j.at("diag").get<Vec>(),
                                         j.at("level").get<double>());
    throw ConfigError("domain.kind: expected ball, box or ellipsoid, got " + kind);
}

json domain_to_json(const FeasibleDomain& d) {
    json j;
    switch (d.kind()) {
    case DomainKind::Ball:
        j["kind"] = "ball";
        j["radius"] = d.ball_radius();
        j["dim"] = d.dim();
        break;
    case DomainKind::Box:
        j["kind"] = "box";
        j["lower"] = d.box_lower();
        j["upper"] = d.box_upper();
        break;
    case DomainKind::Ellipsoid:
        j["kind"] = "ellipsoid";
        j["diag"] = d.ellipsoid_diag();
        j["level"] = d.ellipsoid_level();
        break;
    }
    return j;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).get<T>();
}

void write_atomically(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file " + tmp);
        out << content;
    }
    fs::rename(tmp, path);
}

} // namespace

void BenchConfig::validate() const {
    environment.validate();
    if (algorithms.empty()) throw ConfigError("config.algorithms: at least one algorithm required");
    if (seeds.empty()) throw ConfigError("config.seeds: at least one seed required");
    if (record_every < 1) throw ConfigError("config.record_every: must be >= 1");
    for (const ContenderSpec& a : algorithms) {
        variant_from_name(a.name); // throws on unknown names
        if (!(a.threshold_scale > 0.0))
            throw ConfigError("config.algorithms[" + a.name + "].threshold_scale: must be > 0");
        if (!(a.delta > 0.0))
            throw ConfigError("config.algorithms[" + a.name + "].delta: must be > 0");
        if (!(a.sogd_numerator_mult > 0.0))
            throw ConfigError("config.algorithms[" + a.name + "].sogd_numerator_mult: must be > 0");
    }
}

BenchConfig parse_bench_config(const json& j) {
    BenchConfig config;
    try {
        const json& env = j.at("environment");
        config.environment.horizon = env.at("T").get<std::int64_t>();
        config.environment.dim = env.at("d").get<std::size_t>();
        config.environment.domain = parse_domain(env.at("domain"));
        const json& drift = env.at("drift");
        const std::string drift_kind = drift.at("kind").get<std::string>();
        if (drift_kind == "piecewise") {
            config.environment.drift.kind = DriftConfig::Kind::Piecewise;
            config.environment.drift.stages = drift.at("stages").get<std::int64_t>();
        } else if (drift_kind == "random_walk") {
            config.environment.drift.kind = DriftConfig::Kind::RandomWalk;
            config.environment.drift.step_scale = get_or(drift, "step_scale", 1.0);
        } else {
            throw ConfigError("environment.drift.kind: expected piecewise or random_walk");
        }
        config.environment.noise_max = get_or(env, "noise_max", 0.1);

        for (const json& a : j.at("algorithms")) {
            ContenderSpec spec;
            if (a.is_string()) {
                spec.name = a.get<std::string>();
            } else {
                spec.name = a.at("name").get<std::string>();
                spec.threshold_scale = get_or(a, "threshold_scale", 1.0);
                spec.sogd_numerator_mult = get_or(a, "sogd_numerator_mult", 1.0);
                spec.delta = get_or(a, "delta", 1.0);
                if (a.contains("G")) spec.g_override = a.at("G").get<double>();
                if (a.contains("L")) spec.l_override = a.at("L").get<double>();
                if (a.contains("D")) spec.d_override = a.at("D").get<double>();
            }
            config.algorithms.push_back(std::move(spec));
        }

        config.seeds = get_or(j, "seeds", std::vector<std::uint64_t>{1, 2, 3, 4, 5});
        config.record_every = get_or<std::int64_t>(j, "record_every", 1);
        config.output_dir = get_or<std::string>(j, "output_dir", "bench_out");
        config.dump_streams = get_or(j, "dump_streams", false);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    config.validate();
    return config;
}

BenchConfig load_bench_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config JSON error: ") + e.what());
    }
    return parse_bench_config(j);
}

json bench_config_to_json(const BenchConfig& config) {
    json env;
    env["T"] = config.environment.horizon;
    env["d"] = config.environment.dim;
    env["domain"] = domain_to_json(config.environment.domain);
    if (config.environment.drift.kind == DriftConfig::Kind::Piecewise)
        env["drift"] = {{"kind", "piecewise"}, {"stages", config.environment.drift.stages}};
    else
        env["drift"] = {{"kind", "random_walk"},
                        {"step_scale", config.environment.drift.step_scale}};
    env["noise_max"] = config.environment.noise_max;

    json algos = json::array();
    for (const ContenderSpec& a : config.algorithms) {
        json ja;
        ja["name"] = a.name;
        ja["threshold_scale"] = a.threshold_scale;
        ja["sogd_numerator_mult"] = a.sogd_numerator_mult;
        ja["delta"] = a.delta;
        if (a.g_override) ja["G"] = *a.g_override;
        if (a.l_override) ja["L"] = *a.l_override;
        if (a.d_override) ja["D"] = *a.d_override;
        algos.push_back(std::move(ja));
    }

    json j;
    j["environment"] = std::move(env);
    j["algorithms"] = std::move(algos);
    j["seeds"] = config.seeds;
    j["record_every"] = config.record_every;
    j["dump_streams"] = config.dump_streams;
    return j;
}

std::uint64_t config_hash(const BenchConfig& config) {
    // FNV-1a over the canonical dump (nlohmann objects serialize with
    // sorted keys), so the hash changes iff a semantic field changes.
    const std::string s = bench_config_to_json(config).dump();
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

namespace {

ProblemConstants constants_for(const BenchConfig& config, const ContenderSpec& spec,
                               const std::vector<Sample>& stream) {
    ProblemConstants c = derive_constants(stream, config.environment.domain,
                                          config.environment.horizon, spec.delta);
    if (spec.g_override) c.g_bound = *spec.g_override;
    if (spec.l_override) c.smoothness = *spec.l_override;
    if (spec.d_override) c.d_bound = *spec.d_override;
    c.validate();
    return c;
}

AlgorithmConfig algorithm_config_for(const ContenderSpec& spec,
                                     const ProblemConstants& constants) {
    AlgorithmConfig cfg =
        configure(variant_from_name(spec.name), constants, spec.threshold_scale);
    cfg.sogd_numerator_mult = spec.sogd_numerator_mult;
    return cfg;
}

} // namespace

RunResult run_single(const BenchConfig& config, const ContenderSpec& spec,
                     std::uint64_t seed) {
    EnvironmentConfig env = config.environment;
    env.seed = seed;
    const std::vector<Sample> stream = generate_stream(env);
    const ProblemConstants constants = constants_for(config, spec, stream);
    const AlgorithmConfig algo_cfg = algorithm_config_for(spec, constants);
    std::unique_ptr<OnlineLearner> learner = make_learner(algo_cfg, env.domain);

    RunResult result;
    result.algorithm = spec.name;
    result.seed = seed;
    result.constants = constants;

    std::vector<Vec> decisions;
    decisions.reserve(stream.size());
    double cum_loss = 0.0;
    double cum_time = 0.0;

    const auto record = [&](std::int64_t t) {
        result.recorded_rounds.push_back(t);
        result.cum_loss.push_back(cum_loss);
        result.cum_time_ns.push_back(cum_time);
        result.cum_proj.push_back(learner->counters().projections_onto_x());
        result.cum_grad.push_back(learner->counters().gradient_queries());
        result.cum_val.push_back(learner->counters().value_queries());
    };

    for (std::int64_t t = 1; t <= env.horizon; ++t) {
        const Sample& s = stream[static_cast<std::size_t>(t - 1)];
        const Vec x_t = learner->decision();
        decisions.push_back(x_t);
        // The harness tracks the loss curve itself; only the learner's own
        // queries are charged to the counters.
        cum_loss += loss_value(s, x_t);

        RoundFeedback fb = feedback_for_sample(s, x_t, t, &learner->counters());
        const auto start = std::chrono::steady_clock::now();
        learner->observe(fb);
        const auto stop = std::chrono::steady_clock::now();
        cum_time += static_cast<double>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count());

        if (t % config.record_every == 0 || t == env.horizon) record(t);
    }

    std::vector<Vec> comparators;
    comparators.reserve(stream.size());
    for (const Sample& s : stream) comparators.push_back(s.w_star);
    const RegretReport report = dynamic_regret(
        decisions, comparators, [&stream](std::int64_t t, const Vec& w) {
            return loss_value(stream[static_cast<std::size_t>(t - 1)], w);
        });
    result.final_loss = cum_loss;
    result.dynamic_regret = report.dynamic_regret;
    result.path_length = report.path_length;
    result.comparator_loss = report.comparator_loss;
    result.final_diag = learner->diagnostics();
    return result;
}

namespace {

std::string run_csv(const RunResult& r) {
    std::ostringstream out;
    out.precision(17);
    out << "round,cum_loss,cum_time_ns,proj_X,grad_q,val_q\n";
    for (std::size_t i = 0; i < r.recorded_rounds.size(); ++i)
        out << r.recorded_rounds[i] << ',' << r.cum_loss[i] << ','
            << static_cast<std::int64_t>(r.cum_time_ns[i]) << ',' << r.cum_proj[i]
            << ',' << r.cum_grad[i] << ',' << r.cum_val[i] << '\n';
    return out.str();
}

std::string stream_csv(const std::vector<Sample>& stream) {
    std::ostringstream out;
    out.precision(17);
    out << "t";
    const std::size_t d = stream.empty() ? 0 : stream.front().feature.size();
    for (std::size_t i = 0; i < d; ++i) out << ",x" << i;
    out << ",y";
    for (std::size_t i = 0; i < d; ++i) out << ",w" << i;
    out << '\n';
    for (std::size_t t = 0; t < stream.size(); ++t) {
        out << (t + 1);
        for (double v : stream[t].feature) out << ',' << v;
        out << ',' << stream[t].label;
        for (double v : stream[t].w_star) out << ',' << v;
        out << '\n';
    }
    return out.str();
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

// Plain-text plotting script consuming the CSVs; keeps the core free of
// plotting dependencies.
constexpr const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Plot cumulative loss and running time curves from the run CSVs."""
import csv
import glob
import os
import sys
from collections import defaultdict

out_dir = os.path.dirname(os.path.abspath(__file__))
series = defaultdict(list)  # algorithm -> list of (rounds, losses, times)
for path in sorted(glob.glob(os.path.join(out_dir, "*_seed*.csv"))):
    algo = os.path.basename(path).rsplit("_seed", 1)[0]
    rounds, losses, times = [], [], []
    with open(path) as f:
        for row in csv.DictReader(f):
            rounds.append(int(row["round"]))
            losses.append(float(row["cum_loss"]))
            times.append(float(row["cum_time_ns"]) / 1e9)
    series[algo].append((rounds, losses, times))

if not series:
    sys.exit("no run CSVs found next to this script")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit("matplotlib is required to render the plots")

fig, (ax_loss, ax_time) = plt.subplots(1, 2, figsize=(11, 4))
for algo, runs in sorted(series.items()):
    rounds = runs[0][0]
    n = len(rounds)
    mean_loss = [sum(r[1][i] for r in runs) / len(runs) for i in range(n)]
    mean_time = [sum(r[2][i] for r in runs) / len(runs) for i in range(n)]
    ax_loss.plot(rounds, mean_loss, label=algo)
    ax_time.plot(rounds, mean_time, label=algo)
ax_loss.set_xlabel("round"); ax_loss.set_ylabel("cumulative loss"); ax_loss.legend()
ax_time.set_xlabel("round"); ax_time.set_ylabel("running time (s)"); ax_time.legend()
fig.tight_layout()
target = os.path.join(out_dir, "curves.png")
fig.savefig(target, dpi=150)
print("wrote", target)
)PY";

} // namespace

BenchOutcome run_bench(const BenchConfig& config, const std::string& out_dir,
                       int jobs) {
    config.validate();
    if (jobs < 1) throw ConfigError("run_bench: jobs must be >= 1");
    fs::create_directories(out_dir);

    struct Cell {
        const ContenderSpec* spec;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (const ContenderSpec& a : config.algorithms)
        for (std::uint64_t s : config.seeds) cells.push_back({&a, s});

    std::vector<RunResult> results(cells.size());
    std::vector<std::string> failures;
    std::mutex failures_mutex;
    std::atomic<std::size_t> next{0};

    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            try {
                RunResult r = run_single(config, *cell.spec, cell.seed);
                const std::string path =
                    (fs::path(out_dir) /
                     (r.algorithm + "_seed" + std::to_string(cell.seed) + ".csv"))
                        .string();
                write_atomically(path, run_csv(r));
                r.csv_path = path;
                results[i] = std::move(r);
            } catch (const std::exception& e) {
                // Partial failures stay isolated per run.
                std::lock_guard<std::mutex> lock(failures_mutex);
                failures.push_back(cell.spec->name + " seed " +
                                   std::to_string(cell.seed) + ": " + e.what());
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int n_workers = std::min<int>(jobs, static_cast<int>(cells.size()));
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    if (config.dump_streams) {
        for (std::uint64_t s : config.seeds) {
            EnvironmentConfig env = config.environment;
            env.seed = s;
            const std::string path =
                (fs::path(out_dir) / ("stream_seed" + std::to_string(s) + ".csv")).string();
            write_atomically(path, stream_csv(generate_stream(env)));
        }
    }

    // Aggregate across seeds per algorithm.
    json agg;
    agg["config"] = bench_config_to_json(config);
    agg["config_hash"] = config_hash(config);
    agg["code_version"] = kCodeVersion;
    agg["failures"] = failures;
    json per_algo = json::object();
    for (const ContenderSpec& a : config.algorithms) {
        std::vector<const RunResult*> runs;
        for (const RunResult& r : results)
            if (r.algorithm == a.name && !r.recorded_rounds.empty()) runs.push_back(&r);
        if (runs.empty()) continue;

        json ja;
        ja["threshold_scale"] = a.threshold_scale;
        ja["recorded_rounds"] = runs.front()->recorded_rounds;
        const std::size_t n_points = runs.front()->recorded_rounds.size();
        std::vector<double> loss_mean, loss_std, time_mean, time_std;
        for (std::size_t i = 0; i < n_points; ++i) {
            std::vector<double> losses, times;
            for (const RunResult* r : runs) {
                losses.push_back(r->cum_loss[i]);
                times.push_back(r->cum_time_ns[i]);
            }
            loss_mean.push_back(mean_of(losses));
            loss_std.push_back(std_of(losses));
            time_mean.push_back(mean_of(times));
            time_std.push_back(std_of(times));
        }
        ja["cum_loss_mean"] = loss_mean;
        ja["cum_loss_std"] = loss_std;
        ja["cum_time_ns_mean"] = time_mean;
        ja["cum_time_ns_std"] = time_std;

        json seeds_json = json::object();
        for (const RunResult* r : runs) {
            json jr;
            jr["csv"] = fs::path(r->csv_path).filename().string();
            jr["final_loss"] = r->final_loss;
            jr["dynamic_regret"] = r->dynamic_regret;
            jr["path_length"] = r->path_length;
            jr["comparator_loss"] = r->comparator_loss;
            jr["projections_onto_X"] = r->cum_proj.back();
            jr["gradient_queries"] = r->cum_grad.back();
            jr["value_queries"] = r->cum_val.back();
            jr["constants"] = {{"G", r->constants.g_bound},
                               {"D", r->constants.d_bound},
                               {"L", r->constants.smoothness},
                               {"delta", r->constants.delta},
                               {"T", r->constants.horizon}};
            jr["marker_rounds"] = r->final_diag.marker_rounds;
            jr["active_learners"] = r->final_diag.active_learners;
            json spans = json::array();
            for (std::int64_t id : r->final_diag.active_learner_ids) {
                const MarkerSpan span = span_for_marker(id);
                spans.push_back({{"learner", id},
                                 {"start_marker", span.start},
                                 {"end_marker", span.end}});
            }
            jr["active_spans"] = std::move(spans);
            seeds_json[std::to_string(r->seed)] = std::move(jr);
        }
        ja["seeds"] = std::move(seeds_json);
        per_algo[a.name] = std::move(ja);
    }
    agg["algorithms"] = std::move(per_algo);

    BenchOutcome outcome;
    for (RunResult& r : results)
        if (!r.recorded_rounds.empty()) outcome.runs.push_back(std::move(r));
    outcome.aggregate_path = (fs::path(out_dir) / "aggregate.json").string();
    write_atomically(outcome.aggregate_path, agg.dump(2) + "\n");
    outcome.plot_script_path = (fs::path(out_dir) / "plot.py").string();
    write_atomically(outcome.plot_script_path, kPlotScript);

    if (!failures.empty() && outcome.runs.empty())
        throw ConfigError("all runs failed; first failure: " + failures.front());
    return outcome;
}

std::vector<std::string> validate_bench(const BenchConfig& config) {
    config.validate();
    std::vector<std::string> lines;
    EnvironmentConfig env = config.environment;
    env.seed = config.seeds.front();
    const std::vector<Sample> stream = generate_stream(env);

    lines.push_back("environment: T=" + std::to_string(env.horizon) +
                    " d=" + std::to_string(env.dim) +
                    " domain_diameter=" + std::to_string(env.domain.diameter()));

    for (const ContenderSpec& spec : config.algorithms) {
        const ProblemConstants c = constants_for(config, spec, stream);
        std::ostringstream line;
        line.precision(6);
        line << spec.name << ": G=" << c.g_bound << " D=" << c.d_bound
             << " L=" << c.smoothness << " delta=" << c.delta;
        if (spec.d_override &&
            std::abs(*spec.d_override - env.domain.diameter()) >
                1e-9 * env.domain.diameter())
            line << "  [warning: D override " << *spec.d_override
                 << " does not match the domain diameter "
                 << env.domain.diameter() << "]";

        const AlgorithmConfig cfg = algorithm_config_for(spec, c);
        if (!cfg.pool.empty()) {
            line << "  N=" << cfg.pool.size() << " pool=[" << cfg.pool.front()
                 << " .. " << cfg.pool.back() << "]";
            if (!cfg.self_confident_meta) line << " epsilon=" << cfg.fixed_epsilon;
            else line << " epsilon=self-confident";
        }
        const AlgorithmVariant v = cfg.variant;
        if (v == AlgorithmVariant::EfficientAdaptive ||
            v == AlgorithmVariant::BaselineAdaptiveMultiproj ||
            v == AlgorithmVariant::EfficientIntervalDynamic) {
            ThresholdParams p;
            p.g_bound = c.g_bound;
            p.d_bound = c.d_bound;
            p.smoothness = c.smoothness;
            p.delta = c.delta;
            p.horizon = c.horizon;
            p.pool_size = static_cast<std::int64_t>(cfg.pool.size());
            p.variant = v == AlgorithmVariant::EfficientIntervalDynamic
                            ? ThresholdParams::Variant::IntervalDynamic
                            : ThresholdParams::Variant::Adaptive;
            p.scale = cfg.threshold_scale;
            line << " thresholds C1.." << "C4=";
            for (std::int64_t m = 1; m <= 4; ++m) {
                line << threshold(m, p);
                if (m < 4) line << ",";
            }
        }
        lines.push_back(line.str());
    }
    if (config.environment.horizon > 2000)
        lines.push_back("note: brute-force adaptive regret is unavailable at T > 2000");
    return lines;
}

} // namespace oneproj
