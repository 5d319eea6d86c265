// memwave <experiment> --config <path> [--seed N] [--out DIR]

#include "memwave/memwave.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int exit_pass = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_fault = 3;

int fault(const std::string& experiment, const char* kind, const std::exception& e)
{
    std::cerr << "fault experiment=" << experiment << " kind=" << kind << " what=" << e.what() << '\n';
    return exit_fault;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Memory-wave attractor experiments"};
    std::string experiment;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    app.add_option("experiment", experiment, "experiment name")->required();
    app.add_option("--config", config_path, "INI config file");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--out", out_dir, "output directory");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }

    memwave::ExperimentConfig cfg;
    try {
        if (!memwave::is_experiment(experiment))
            throw memwave::UsageError("unknown experiment '" + experiment + "'");
        cfg = config_path.empty() ? memwave::default_config(experiment)
                                  : memwave::load_config(config_path, experiment);
        cfg.name = experiment;
        if (seed)
            cfg.seed = *seed;
        if (out_dir)
            cfg.output = *out_dir;
        cfg.validate();
    } catch (const memwave::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        const auto result = memwave::run(cfg);
        std::cout << result.summary_line() << '\n';
        return result.pass ? exit_pass : exit_check_failed;
    } catch (const memwave::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const memwave::NumericalFault& e) {
        return fault(experiment, "numerical", e);
    } catch (const memwave::TailError& e) {
        return fault(experiment, "tail", e);
    } catch (const memwave::WindowUnderrunError& e) {
        return fault(experiment, "window", e);
    } catch (const memwave::ProcessInvalidError& e) {
        return fault(experiment, "process", e);
    } catch (const std::exception& e) {
        return fault(experiment, "internal", e);
    }
}
