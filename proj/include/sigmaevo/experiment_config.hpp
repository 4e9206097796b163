#pragma once

// Strict JSON experiment configuration. Every subcommand accepts the model
// keys (sigma, n, m, p, eps_zone, n_zone) plus its own block of keys; unknown
// keys, wrong types and out-of-domain values are all reported with their JSON
// path before anything runs.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigmaevo/model.hpp"
#include "sigmaevo/spectral_grid.hpp"

namespace sigmaevo {

enum class Subcommand { eigen, linear_decay, pointwise, diffusion, semilinear, blowup, pcrit, admissible };

const char* to_string(Subcommand s) noexcept;
std::optional<Subcommand> subcommand_from_string(const std::string& name);

struct TimeSampling {
  double t_min = 1e2;
  double t_max = 1e4;
  int count = 24;  // log-spaced, both ends included
};

struct RegularityLossBlock {
  double ell = 2.0;
  double delta = 0.1;
  double tolerance = 0.1;
  TimeSampling times{1e3, 1e5, 16};
  GridSpec grid{1, 20.0, 16384};
};

struct SweepBlock {
  double p_min = 1.1;
  double p_max = 8.0;
  int p_count = 70;
  int n_max = 4;
};

struct ExperimentConfig {
  Subcommand subcommand = Subcommand::eigen;
  ModelParams params;
  GridSpec grid;
  double tolerance = 0.05;

  // eigen, pointwise
  double xi_min = 1e-4;
  double xi_max = 1e4;
  int xi_count = 1000;
  int random_checks = 100;

  // linear-decay, diffusion, semilinear
  double data_width = 1.0;
  TimeSampling times;
  double fit_t_min = 0.0;  // 0: use times.t_min / t_max
  double fit_t_max = 0.0;
  double s = 0.0;
  double ell = 0.0;
  std::optional<RegularityLossBlock> regularity_loss;

  // pointwise
  double C_cap = 10.0;

  // semilinear, blowup
  double amplitude = 1e-3;
  double dt = 0.05;
  double t_final = 1e3;
  double dealias_fraction = 2.0 / 3.0;
  double blowup_threshold = 1e6;
  double c_stab = 4.0;
  std::vector<double> snapshot_times;
  int snapshot_count = 40;
  std::string expected_verdict;  // empty: no check
  std::vector<double> R_list{10.0, 20.0, 40.0};
  double s_sigma = 0.0;  // 0: default rule
  std::string data_kind = "positive-mass";

  // admissible
  std::optional<SweepBlock> sweep;
};

struct ConfigIssue {
  std::string path;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Parses and validates; throws ConfigError listing every problem. When the
/// text carries a "subcommand" key it must agree with the one given.
ExperimentConfig parse_config(Subcommand subcommand, const std::string& text);

/// Canonical JSON echo of a parsed config (all defaults filled in).
std::string config_to_json(const ExperimentConfig& config);

/// count log-spaced points between t_min and t_max inclusive.
std::vector<double> log_spaced(double lo, double hi, int count);

}  // namespace sigmaevo
