#include <doctest.h>

#include <cmath>

#include "sigmaevo/errors.hpp"
#include "sigmaevo/phi_functions.hpp"

using sigmaevo::phi;
using cplx = std::complex<double>;

TEST_CASE("phi closed forms away from zero") {
  for (cplx z : {cplx(2.0, 0.0), cplx(-3.0, 1.0), cplx(0.5, 4.0), cplx(-40.0, 0.0)}) {
    const cplx e = std::exp(z);
    CHECK(std::abs(phi(0, z) - e) < 1e-14 * std::abs(e) + 1e-300);
    CHECK(std::abs(phi(1, z) - (e - 1.0) / z) < 1e-13);
    CHECK(std::abs(phi(2, z) - (e - 1.0 - z) / (z * z)) < 1e-13);
    CHECK(std::abs(phi(3, z) - (e - 1.0 - z - z * z / 2.0) / (z * z * z)) < 1e-12);
  }
}

TEST_CASE("phi near zero by long double Taylor sums") {
  for (cplx z : {cplx(1e-9, 0.0), cplx(0.3, -0.2), cplx(-0.9, 0.1), cplx(0.0, 0.0)}) {
    for (int k = 1; k <= 3; ++k) {
      std::complex<long double> term = 1.0L, sum = 0.0L;
      long double fact = 1.0L;
      for (int j = 1; j <= k; ++j) fact *= j;
      term = 1.0L / fact;
      for (int j = 0; j < 60; ++j) {
        sum += term;
        term *= std::complex<long double>(z) / static_cast<long double>(j + k + 1);
      }
      CHECK(std::abs(phi(k, z) - cplx(sum)) < 1e-15);
    }
  }
}

TEST_CASE("phi recurrence is continuous across the switch radius") {
  for (int k = 1; k <= 3; ++k) {
    const cplx a = phi(k, cplx(0.999999999, 0.0)), b = phi(k, cplx(1.000000001, 0.0));
    CHECK(std::abs(a - b) < 1e-8);
  }
  CHECK_THROWS_AS(phi(4, cplx(1.0)), sigmaevo::Error);
}
