#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "run_config.hpp"

namespace snls {

enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_usage = 2,
  exit_config = 3,
  exit_numerical = 4,
  exit_io = 5,
};

const std::vector<std::string>& subcommands();
bool is_subcommand(std::string_view name);
std::string usage_text();

/// Runs one subcommand and writes its CSVs into config.output_dir. Paths of the
/// written files go to `log`, diagnostics to `err`. Never throws.
int dispatch(std::string_view subcommand, const RunConfig& config, int workers,
             std::ostream& log, std::ostream& err);

}  // namespace snls
