#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "oneproj/bench.hpp"

// Exit codes: 0 success, 1 configuration error, 2 runtime failure.
int main(int argc, char** argv) {
    CLI::App app{"Non-stationary online convex optimization benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int jobs = 1;

    CLI::App* run = app.add_subcommand("run", "run the (algorithm x seed) grid");
    run->add_option("--config", config_path, "benchmark config JSON")->required();
    run->add_option("--out", out_dir, "output directory (default: config output_dir)");
    run->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);

    CLI::App* validate = app.add_subcommand("validate", "print derived configuration");
    validate->add_option("--config", config_path, "benchmark config JSON")->required();

    CLI11_PARSE(app, argc, argv);

    oneproj::BenchConfig config;
    try {
        config = oneproj::load_bench_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(validate)) {
            for (const std::string& line : oneproj::validate_bench(config))
                std::cout << line << "\n";
            return 0;
        }
        const std::string target = out_dir.empty() ? config.output_dir : out_dir;
        const oneproj::BenchOutcome outcome = oneproj::run_bench(config, target, jobs);
        std::cout << "wrote " << outcome.runs.size() << " run CSVs, "
                  << outcome.aggregate_path << " and " << outcome.plot_script_path
                  << "\n";
        return 0;
    } catch (const oneproj::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
}
