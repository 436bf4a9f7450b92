#pragma once

#include <filesystem>
#include <string>

#include "oadc/analysis.hpp"
#include "oadc/config.hpp"

namespace oadc {

struct CliOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs;
  std::optional<std::string> out_dir;
  std::optional<ControllerKind> controller;
  bool quiet = false;
};

struct CommandResult {
  int exit_code = 0;
  std::string message;
};

/// Exit codes shared by the CLI: 0 success, 1 non-finite state during a
/// run, 2 config error, 3 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiverged = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

/// Resolves the output directory: explicit option, then the config file,
/// then the OADC_OUT_DIR environment variable, then "./out".
std::filesystem::path resolve_output_dir(const ExperimentConfig& config, const CliOptions& options);

/// Runs every variant of the experiment and writes one trajectory CSV per
/// run plus a metrics summary. Nonzero exit and the blow-up step in the
/// message when a state goes non-finite.
CommandResult cmd_run(const ExperimentConfig& config, const CliOptions& options);

/// Monte-Carlo noise sweep over the configured levels; both controllers
/// run on identical seeds. Writes per-level stats CSV, a comparison table
/// and a structured summary.
CommandResult cmd_sweep(const ExperimentConfig& config, const CliOptions& options);

}  // namespace oadc
