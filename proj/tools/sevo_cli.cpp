// sevo <subcommand> --config <file> [--out <dir>] [--seed <int>]
// Prints summary.json to stdout; exit code 0 ok, 1 config, 2 numeric, 3 checks failed.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "sigmaevo/sigmaevo.h"

int main(int argc, char** argv) {
  CLI::App app{"Experiments for u_tt + (-Delta)^sigma u + u - g*u = |u|^p, g = exp(-t)"};
  app.set_version_flag("--version", std::string(sevo_version()));
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  const std::pair<const char*, const char*> subs[] = {
      {"eigen", "eigenvalue sweep of the mode matrix with invariant checks"},
      {"linear-decay", "linear evolution of Gaussian data and fitted decay rates"},
      {"pointwise", "scan for the pointwise bound C exp(-c rho t)"},
      {"diffusion", "comparison against the small and large zone reference flows"},
      {"semilinear", "ETD integration of the semilinear problem with a verdict"},
      {"blowup", "semilinear run plus test-function diagnostics"},
      {"pcrit", "critical exponent and related scalars"},
      {"admissible", "global existence and blow-up hypothesis checks"}};
  for (const auto& [name, help] : subs) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for manifest.json, summary.json and CSV output");
    sub->add_option("--seed", seed, "seed for randomized checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  std::ifstream in(config_path);
  std::stringstream text;
  text << in.rdbuf();
  if (!in) {
    std::cerr << "sevo: cannot read " << config_path << "\n";
    return 1;
  }

  sevo_result* result = nullptr;
  const sevo_status status =
      sevo_run(subcommand.c_str(), text.str().c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), seed, &result);
  if (!result) {
    std::cerr << "sevo: " << sevo_status_string(status) << ": " << sevo_last_error() << "\n";
    return status == SEVO_CONFIG || status == SEVO_INVALID_ARGUMENT ? 1 : 2;
  }
  std::cout << sevo_result_summary(result);
  const int code = sevo_result_exit_code(result);
  if (status != SEVO_OK) std::cerr << "sevo: " << sevo_last_error() << "\n";
  sevo_result_destroy(result);
  return code;
}
