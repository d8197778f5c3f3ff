#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace carroll::app {

/// Exit codes of the command-line front end.
enum Exit : int { ok = 0, invalid = 1, numerical = 2 };

/// Runs one subcommand. `args` excludes the program name, e.g.
/// {"gaussian", "--config", "run.json", "--out", "results"}.
/// Tables go to files under the output directory; progress and diagnostics
/// go to `log`.
int run(const std::vector<std::string>& args, std::ostream& log);

}  // namespace carroll::app
