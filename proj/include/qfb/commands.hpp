#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qfb/config.hpp"

namespace qfb {

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_usage = 2,
  exit_error = 3,
};

const std::vector<std::string>& subcommands();

/// Resolves `cfg` for the subcommand, runs it, writes
/// <output_dir>/<tag>.csv (plus extra tables) and <tag>.manifest.json, and
/// prints a short JSON summary to `out`. Module errors propagate as qfb::Error.
int run_command(std::string_view subcommand, RunConfig cfg, std::ostream& out);

/// Machine-readable error record for stderr.
std::string error_json(const std::exception& e);

}  // namespace qfb
