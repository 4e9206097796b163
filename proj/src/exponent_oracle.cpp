#include "sigmaevo/exponent_oracle.hpp"

#include <cmath>

#include "sigmaevo/csv_writer.hpp"
#include "sigmaevo/errors.hpp"

namespace sigmaevo {

namespace {

void check_domain(int n, double m, double sigma) {
  if (n < 1) throw_invalid("n must be a positive integer");
  if (!(m >= 1.0 && m < 2.0)) throw_invalid("m in [1,2) required");
  if (!(sigma >= 1.0) || !std::isfinite(sigma)) throw_invalid("sigma must be >= 1");
}

std::string fmt(double v) { return format_double(v); }

class Checker {
 public:
  explicit Checker(AdmissibilityReport& rep) : rep_(rep) {}
  void require(bool ok, const std::string& name, const std::string& evaluated) {
    if (!ok) rep_.violated.push_back({name, evaluated});
  }

 private:
  AdmissibilityReport& rep_;
};

}  // namespace

double p_crit(int n, double m, double sigma) {
  check_domain(n, m, sigma);
  return 1.0 + 2.0 * m * sigma / n;
}

double ell_star(int n, double m, double s, double sigma) {
  check_domain(n, m, sigma);
  if (!(s >= 0.0)) throw_invalid("s must be >= 0");
  return n * (1.0 / m - 0.5) + 2.0 * s - sigma;
}

double n0(double sigma) {
  if (!(sigma >= 1.0)) throw_invalid("sigma must be >= 1");
  const double b = 2.0 * sigma + 1.0;
  const double c = 4.0 * (sigma * sigma + sigma);
  // -b + sqrt(b^2 + c) without cancellation
  return c / (b + std::sqrt(b * b + c));
}

long long ceil_int(double r) { return static_cast<long long>(std::ceil(r)); }

AdmissibilityReport gee_admissible(int n, double m, double sigma, double s, double ell, double p) {
  check_domain(n, m, sigma);
  if (!(s >= 0.0) || !(ell >= 0.0)) throw_invalid("s and ell must be >= 0");
  if (!(p > 1.0)) throw_invalid("p must be > 1");
  AdmissibilityReport rep;
  Checker check(rep);
  const double pc = p_crit(n, m, sigma);
  const double ls = ell_star(n, m, s, sigma);
  rep.derived["p_crit"] = pc;
  rep.derived["ell_star"] = ls;
  rep.derived["n0"] = n0(sigma);
  rep.derived["p_prime"] = p / (p - 1.0);

  check.require(s > 0.0 && s < sigma, "0 < s < sigma", "s = " + fmt(s) + ", sigma = " + fmt(sigma));
  const double s_bound = sigma - n * (1.0 / m - 0.5);
  check.require(s < s_bound, "s < sigma - n(1/m-1/2)", fmt(s) + " < " + fmt(s_bound));
  check.require(ell >= std::max(ls, 0.0), "ell >= max(ell_star, 0)",
                fmt(ell) + " >= max(" + fmt(ls) + ", 0)");
  check.require(ell < s, "ell < s", fmt(ell) + " < " + fmt(s));
  const long long ce = ceil_int(ell);
  check.require(p > 1.0 + static_cast<double>(ce), "p > 1 + ceil(ell)",
                fmt(p) + " > 1 + " + std::to_string(ce));
  const double n_bound = 2.0 * m * sigma / (2.0 - m);
  check.require(n < n_bound, "n < 2 m sigma / (2 - m)", std::to_string(n) + " < " + fmt(n_bound));
  const double n_small = 4.0 * s / (2.0 - m);
  if (n <= n_small)
    check.require(p >= 2.0 / m, "p >= 2/m when n <= 4s/(2-m)", fmt(p) + " >= " + fmt(2.0 / m));
  if (n > 2.0 * s) {
    const double upper = (n - 2.0 * ell) / (n - 2.0 * s);
    check.require(p <= upper, "p <= (n - 2 ell)/(n - 2s) when n > 2s", fmt(p) + " <= " + fmt(upper));
  }
  check.require(p > pc, "p > p_crit", fmt(p) + " > " + fmt(pc));
  if (p == pc) rep.notes.emplace_back("p = p_crit: the critical case is left open; reported as not admissible");
  rep.admissible = rep.violated.empty();
  return rep;
}

const char* to_string(DataKind kind) noexcept {
  return kind == DataKind::positive_mass ? "positive-mass" : "slow-decay";
}

DataKind data_kind_from_string(const std::string& name) {
  if (name == "positive-mass") return DataKind::positive_mass;
  if (name == "slow-decay") return DataKind::slow_decay;
  throw_invalid("unknown data kind '" + name + "' (expected positive-mass or slow-decay)");
}

AdmissibilityReport blowup_applicable(int n, double m, double sigma, double p, DataKind kind) {
  check_domain(n, m, sigma);
  if (!(p > 1.0)) throw_invalid("p must be > 1");
  AdmissibilityReport rep;
  Checker check(rep);
  const double pc = p_crit(n, m, sigma);
  const double pp = p / (p - 1.0);
  const double scale = -2.0 * sigma * pp + 2.0 * sigma + n;
  rep.derived["p_crit"] = pc;
  rep.derived["p_prime"] = pp;
  rep.derived["scale_exponent"] = scale;

  check.require(p < pc, "p < p_crit", fmt(p) + " < " + fmt(pc));
  if (m == 1.0) {
    check.require(kind == DataKind::positive_mass, "m = 1 requires positive-mass data",
                  std::string("data kind ") + to_string(kind));
    check.require(scale < 0.0, "-2 sigma p' + 2 sigma + n < 0", fmt(scale) + " < 0");
  } else {
    check.require(kind == DataKind::slow_decay, "m in (1,2) requires slow-decay data",
                  std::string("data kind ") + to_string(kind));
    const double growth = n * (1.0 - 1.0 / m);
    rep.derived["growth_exponent"] = growth;
    rep.derived["growth_margin"] = growth - scale;
    check.require(growth > scale, "n(1 - 1/m) > -2 sigma p' + 2 sigma + n", fmt(growth) + " > " + fmt(scale));
  }
  if (p == pc) rep.notes.emplace_back("p = p_crit: the critical case is left open; reported as not applicable");
  rep.admissible = rep.violated.empty();
  return rep;
}

}  // namespace sigmaevo
