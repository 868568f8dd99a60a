#include <iostream>

#include <CLI11.hpp>

#include "bhmc/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Stationary distributions of upper block-Hessenberg Markov chains"};
    app.require_subcommand(1);

    bhmc::cli::Overrides overrides;
    std::string config;
    std::size_t level = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        cmd->add_option("--epsilon", overrides.epsilon, "Stopping tolerance in (0, 1)");
        cmd->add_option("--k-set", overrides.k_set, "Comma-separated levels, e.g. 0,1,2");
        cmd->add_option("--max-level", overrides.max_level, "Hard cap on the truncation level");
        cmd->add_option("--schedule", overrides.schedule, "every | stride:S | geometric:G");
    };

    auto* run = app.add_subcommand("run", "Solve, compare against baselines, write outputs");
    add_common(run);
    auto* inspect = app.add_subcommand("inspect", "Dump the recursion state at one level");
    add_common(inspect);
    inspect->add_option("--level", level, "Level to inspect")->required();
    auto* validate = app.add_subcommand("validate", "Check the configuration and the generator");
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : bhmc::cli::kExitError;
    }

    if (*run) return bhmc::cli::run_command(config, overrides, std::cout, std::cerr);
    if (*inspect) return bhmc::cli::inspect_command(config, overrides, level, std::cout, std::cerr);
    return bhmc::cli::validate_command(config, overrides, std::cout, std::cerr);
}
