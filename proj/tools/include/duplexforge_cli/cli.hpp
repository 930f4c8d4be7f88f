// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The duplexforge Authors

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "duplexforge/scenario.hpp"

namespace duplexforge::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
};

struct RunOptions {
  std::filesystem::path out_dir;
  /// Directory relative paths inside the scenario (steer.map_file) are resolved against.
  std::filesystem::path scenario_dir;
  std::size_t threads = 1;
  std::optional<std::size_t> trials;
};

/// Files a command wrote (names relative to out_dir, in write order) and its text summary.
struct CommandOutput {
  std::vector<std::string> files;
  std::string summary;
};

CommandOutput cmd_rate_region(const Scenario& s, const RunOptions& opt);
CommandOutput cmd_sic_fit(const Scenario& s, const RunOptions& opt);
CommandOutput cmd_codebook(const Scenario& s, const RunOptions& opt);
CommandOutput cmd_steer(const Scenario& s, const RunOptions& opt);

/// Floating-point cell with 9 significant digits; infinities print as inf / -inf.
std::string format_g9(double v);

/// Full command-line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace duplexforge::cli
