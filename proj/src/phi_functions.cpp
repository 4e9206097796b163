#include "sigmaevo/phi_functions.hpp"

#include <cmath>

#include "sigmaevo/errors.hpp"

namespace sigmaevo {

namespace {

constexpr double kInvFactorial[] = {1.0, 1.0, 0.5, 1.0 / 6.0};

std::complex<double> phi_series(int k, std::complex<double> z) {
  // sum_j z^j / (j + k)!
  std::complex<double> term = kInvFactorial[k];
  std::complex<double> sum = term;
  for (int j = 1; j < 30; ++j) {
    term *= z / static_cast<double>(j + k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace

std::complex<double> phi(int k, std::complex<double> z) {
  if (k < 0 || k > 3) throw_invalid("phi: order must be in [0,3]");
  if (k == 0) return std::exp(z);
  if (std::abs(z) < 1.0) return phi_series(k, z);
  std::complex<double> value = std::exp(z);
  for (int j = 0; j < k; ++j) value = (value - kInvFactorial[j]) / z;
  return value;
}

}  // namespace sigmaevo
