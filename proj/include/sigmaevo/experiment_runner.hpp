#pragma once

// Dispatch of a parsed experiment to the numerical modules. Every run yields
// a summary (results, checks, warnings), a manifest (config echo, versions,
// wall time) and zero or more CSV series. Given the same config and seed the
// summary and CSV bodies are byte-identical; only the manifest carries timing.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sigmaevo/experiment_config.hpp"

namespace sigmaevo {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_numeric = 2, exit_check_failed = 3 };

struct OutputFile {
  std::string name;
  std::string text;
};

struct RunOutcome {
  int exit_code = exit_ok;
  std::string summary;   // JSON
  std::string manifest;  // JSON
  std::vector<OutputFile> files;
};

/// Parses config_text for the given subcommand and runs it. Never throws for
/// config or numeric problems: those come back as exit codes 1 and 2 with an
/// error record in the summary.
RunOutcome run_subcommand(Subcommand subcommand, const std::string& config_text, std::uint64_t seed = 0);

/// Writes manifest.json, summary.json and the CSV files into dir.
void write_outcome(const RunOutcome& outcome, const std::filesystem::path& dir);

const char* library_version() noexcept;

}  // namespace sigmaevo
