#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "subnormal/cli/instance.hpp"
#include "subnormal/cli/report_json.hpp"

namespace subnormal::cli {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 1,
  kExitNumerical = 2,
  kExitNo = 3,
};

/// Severity order for batch runs: usage > numerical > NO > success.
int worst_exit(int a, int b) noexcept;

struct GlobalOptions {
  std::optional<double> tol;  // overrides options.tol of the instance
};

struct CommandResult {
  int exit_code;
  Json report;
};

// Instance commands never throw; failures become reports with exit 1 or 2.
CommandResult cmd_solve(const Instance& inst, const GlobalOptions& global = {});
CommandResult cmd_beta(const Instance& inst, const GlobalOptions& global = {});
CommandResult cmd_verify(const Instance& inst, const GlobalOptions& global = {});
CommandResult cmd_classify_flat(const Instance& inst, const GlobalOptions& global = {});
CommandResult cmd_one_gen(const Instance& inst, const GlobalOptions& global = {});

struct StampfliRequest {
  std::optional<std::array<double, 3>> triple;  // x, y, z
  std::optional<std::array<double, 3>> params;  // x, r, theta
  std::size_t n = 6;                            // tail weights to emit
};

CommandResult cmd_stampfli(const StampfliRequest& request);

bool is_instance_command(std::string_view command) noexcept;

/// Parses `text` and runs the named instance command.
CommandResult run_instance_command(std::string_view command, std::string_view text, const GlobalOptions& global = {});

}  // namespace subnormal::cli
