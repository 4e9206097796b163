#include "sigmaevo/model.hpp"

#include <cmath>

#include "sigmaevo/errors.hpp"

namespace sigmaevo {

std::vector<std::string> ModelParams::violations() const {
  std::vector<std::string> out;
  if (!(sigma >= 1.0) || !std::isfinite(sigma)) out.emplace_back("sigma must be >= 1");
  if (n < 1) out.emplace_back("n must be a positive integer");
  if (!(m >= 1.0 && m < 2.0)) out.emplace_back("m in [1,2) required");
  if (!(p > 1.0) || !std::isfinite(p)) out.emplace_back("p must be > 1");
  if (!(eps_zone > 0.0)) out.emplace_back("eps_zone must be > 0");
  if (!(n_zone > eps_zone) || !std::isfinite(n_zone)) out.emplace_back("n_zone must exceed eps_zone");
  return out;
}

void ModelParams::validate() const {
  const auto v = violations();
  if (v.empty()) return;
  std::string msg = "invalid model parameters:";
  for (const auto& s : v) msg += " " + s + ";";
  throw_invalid(msg);
}

}  // namespace sigmaevo
