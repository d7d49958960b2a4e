#pragma once

#include <ostream>

#include "eulerps/config.hpp"

namespace eulerps {

enum class OutputFormat { Csv, Structured };

// Each command writes to `out` and returns a process exit code. Errors are
// reported as a machine-readable object on the same stream.
int cmd_solve(const ProblemConfig& config, std::ostream& out, OutputFormat format);
int cmd_profile(const ProblemConfig& config, std::ostream& out);
int cmd_curve(const ProblemConfig& config, std::ostream& out);
int cmd_critical(const ProblemConfig& config, std::ostream& out, OutputFormat format);
int cmd_sweep(const ProblemConfig& config, std::ostream& out);

}  // namespace eulerps
