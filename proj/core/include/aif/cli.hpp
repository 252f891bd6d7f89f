#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "aif/harness.hpp"

namespace aif::cli {

enum class Subcommand { Run, Trial, Decompose, Validate };

/// Process exit statuses.
enum ExitCode : int { kOk = 0, kUsage = 1, kModel = 2, kIo = 3 };

struct CliOptions {
  Subcommand command = Subcommand::Run;
  harness::ExperimentConfig config;
  std::size_t trial_index = 1;             ///< `trial`: which scheduled trial to run
  std::size_t epoch = 1;                   ///< `decompose`: current epoch t
  std::vector<double> beliefs;             ///< `decompose`: state weights (empty = model prior)
  std::vector<Index> history;              ///< `decompose`: executed actions before t
};

/// Parse argv (argv[0] is the program name). Throws UsageError on unknown
/// subcommands, agents, or malformed flag values.
CliOptions parse_cli(int argc, const char* const* argv);

/// Entry point used by the `aif` binary; returns the process exit status.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace aif::cli
