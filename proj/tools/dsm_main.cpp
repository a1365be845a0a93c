#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dsm/errors.hpp"
#include "dsm/harness.hpp"
#include "dsm/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"DSM solver for ill-posed monotone operator equations"};
    app.set_version_flag("--version", std::string(dsm::kVersion));
    app.require_subcommand(1);

    dsm::harness::RunOptions options;
    std::uint64_t seed = 0;

    CLI::App* run_cmd = app.add_subcommand("run", "execute a configured experiment");
    run_cmd->add_option("--config", options.config_path, "experiment config (JSON)")
        ->required();
    run_cmd->add_option("--output", options.output_dir,
                        "output directory (default: config, then DSM_OUTPUT_DIR)");
    CLI::Option* seed_opt =
        run_cmd->add_option("--seed", seed, "override the config seed");
    run_cmd->add_flag("--strict,!--no-strict", options.strict,
                      "refuse to run when schedule conditions fail (default on)");
    run_cmd->add_flag("--quiet", options.quiet, "suppress progress output");

    bool machine_readable = false;
    CLI::App* list_cmd =
        app.add_subcommand("list-problems", "list built-in problems");
    list_cmd->add_flag("--json", machine_readable, "machine-readable listing");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            if (*seed_opt) options.seed = seed;
            return dsm::harness::run(options);
        }
        dsm::harness::list_problems(std::cout, machine_readable);
        return 0;
    } catch (const dsm::Error& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << "\n";
        return dsm::harness::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 70;
    }
}
