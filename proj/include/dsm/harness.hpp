#ifndef DSM_HARNESS_HPP
#define DSM_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "dsm/errors.hpp"

// Experiment harness behind the CLI: loads a JSON config, builds the
// problem and schedule, validates conditions, dispatches the experiment,
// and writes CSV reports plus a run manifest into the output directory.

namespace dsm::harness {

struct RunOptions {
    std::string config_path;
    /// Output directory; falls back to config "output_dir", then the
    /// DSM_OUTPUT_DIR environment variable, then ".".
    std::string output_dir;
    std::optional<std::uint64_t> seed;  // overrides config seed
    bool strict = true;  // refuse solve experiments on failed conditions
    bool quiet = false;
};

/// Execute the configured experiment. Returns 0 on success; throws
/// dsm::Error subclasses on failure.
int run(const RunOptions& options);

/// Print built-in problem names and parameter schemas.
void list_problems(std::ostream& out, bool machine_readable);

/// Map an error category to a CLI exit code.
int exit_code_for(const Error& error);

}  // namespace dsm::harness

#endif  // DSM_HARNESS_HPP
