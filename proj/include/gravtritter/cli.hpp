#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gravtritter/serialization.hpp"

namespace gravtritter::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitSchema = 2,  // malformed config, unknown keys, bad usage
  kExitDomain = 3,  // library rejected the inputs
  kExitOutput = 4,  // output path not writable
};

enum class Format { json, csv };

struct CommandOutput {
  Json report;      // always carries "version", "command" and the resolved "config"
  std::string csv;  // same content as CSV, first line "# <json header>"
};

/// Flags shared by every subcommand that are not part of the JSON config.
struct RunOptions {
  std::optional<unsigned long long> seed;
};

// Each command validates its config (SchemaError), runs the library
// (DomainError and friends propagate) and renders both output formats.
CommandOutput cmd_chi(const Json& config, const RunOptions& options = {});
CommandOutput cmd_nogo(const Json& config, const RunOptions& options = {});
CommandOutput cmd_tritter(const Json& config, const RunOptions& options = {});
CommandOutput cmd_evolve(const Json& config, const RunOptions& options = {});
CommandOutput cmd_sweep(const Json& config, const RunOptions& options = {});
CommandOutput cmd_find_hom(const Json& config, const RunOptions& options = {});

/// Dispatches by command name ("chi", "nogo", "tritter", "evolve", "sweep",
/// "find-hom"). Throws SchemaError for an unknown name.
CommandOutput run_command(const std::string& name, const Json& config, const RunOptions& options = {});

/// Full command line: `<subcommand> --config <path> [--out <path>]
/// [--format csv|json] [--seed <int>]`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gravtritter::cli
