// Config-driven runner for the stochrd experiments.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "stochrd/experiment.hpp"
#include "stochrd/parallel.hpp"

int main(int argc, char** argv) {
    std::string command;
    std::string config_path;
    std::string out_dir;
    unsigned threads = 0;
    std::uint64_t seed = 0;

    CLI::App app{"Stochastic reaction-diffusion experiment runner"};
    app.set_version_flag("--version", std::string(stochrd::kVersion));
    app.add_option("command", command, "simulate | check-model | certify | attractor | periodicity | sweep-alpha")
        ->required();
    app.add_option("--config", config_path, "INI config file")->required();
    app.add_option("--out", out_dir, "Output directory (overrides STOCHRD_OUTPUT_DIR and [output] dir)");
    app.add_option("--threads", threads, "Worker cap; 0 uses all cores");
    auto* seed_opt = app.add_option("--seed", seed, "Override [noise] seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : stochrd::kUsageError;
    }

    const auto& commands = stochrd::experiment_commands();
    if (std::find(commands.begin(), commands.end(), command) == commands.end()) {
        std::cerr << "unknown command '" << command << "'\n" << app.help();
        return stochrd::kUsageError;
    }

    stochrd::ExperimentConfig config;
    try {
        config = stochrd::load_config(config_path);
    } catch (const stochrd::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return stochrd::kUsageError;
    }
    if (*seed_opt) config.seed = seed;
    stochrd::set_thread_count(threads);

    std::filesystem::path out = config.output_dir;
    if (const char* env = std::getenv("STOCHRD_OUTPUT_DIR"); env && *env) out = env;
    if (!out_dir.empty()) out = out_dir;

    try {
        return stochrd::execute(command, config, out, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return stochrd::kContractFailure;
    }
}
