#pragma once

#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "papdyn/config.hpp"
#include "papdyn/dde.hpp"
#include "papdyn/fixedpoint.hpp"

namespace papdyn {

enum class Command { Check, Simulate, Solve, Stability, Ergodic };

std::optional<Command> command_from_name(std::string_view name);
std::string_view command_name(Command command);

enum ExitCode : int { kExitPass = 0, kExitVerdict = 1, kExitConfig = 2, kExitNumerical = 3 };

struct CommandResult {
  int exit_code = kExitPass;
  std::string text;  // human-readable report
  std::string json;  // machine-readable report
  std::vector<std::pair<std::string, std::string>> artifacts;  // file name, content
};

CommandResult run_command(const RunConfig& config, Command command);

/// ConfigError -> 2, any other failure -> 3.
int exit_code_for(const std::exception& e);

/// Header `t,x_1,...,x_n`, 17 significant digits.
std::string candidate_csv(const CandidateFunction& phi);
std::string trajectory_csv(const Trajectory& traj);

/// Seeded random smooth history: per component a + b sin(w t + p) with
/// |a| + |b| <= amplitude.
History random_history(std::size_t dim, unsigned seed, double amplitude);

}  // namespace papdyn
