#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sigmaevo {

struct ConstraintViolation {
  std::string name;       // the constraint, e.g. "p > p_crit"
  std::string evaluated;  // the inequality with numbers substituted
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<ConstraintViolation> violated;
  std::map<std::string, double> derived;  // p_crit, ell_star, p_prime, n0 (when defined), ...
  std::vector<std::string> notes;
};

/// 1 + 2 m sigma / n
double p_crit(int n, double m, double sigma);
/// n (1/m - 1/2) + 2 s - sigma
double ell_star(int n, double m, double s, double sigma);
/// Positive root of n^2 + 2(2 sigma + 1) n - 4(sigma^2 + sigma) = 0.
double n0(double sigma);
/// min { C in Z : r <= C }
long long ceil_int(double r);

/// Constraint-by-constraint check of the small-data global existence hypotheses.
AdmissibilityReport gee_admissible(int n, double m, double sigma, double s, double ell, double p);

enum class DataKind { positive_mass, slow_decay };
const char* to_string(DataKind kind) noexcept;
DataKind data_kind_from_string(const std::string& name);

/// Applicability of the blow-up result. derived["scale_exponent"] holds
/// -2 sigma p' + 2 sigma + n; for m in (1,2) derived["growth_margin"] holds
/// n(1 - 1/m) - (-2 sigma p' + 2 sigma + n).
AdmissibilityReport blowup_applicable(int n, double m, double sigma, double p, DataKind kind);

}  // namespace sigmaevo
