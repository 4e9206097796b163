#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sigmaevo/errors.hpp"
#include "sigmaevo/spectral_grid.hpp"

using namespace sigmaevo;

TEST_CASE("grid spec validation") {
  CHECK_THROWS_AS(SpectralGrid(GridSpec{1, 10.0, 7}), Error);
  CHECK_THROWS_AS(SpectralGrid(GridSpec{4, 10.0, 8}), Error);
  CHECK_THROWS_AS(SpectralGrid(GridSpec{1, -1.0, 8}), Error);
  const SpectralGrid g(GridSpec{2, 10.0, 8});
  CHECK(g.size() == 64);
  CHECK(g.dxi() == doctest::Approx(2 * std::numbers::pi / 10.0));
  CHECK(g.nyquist() == doctest::Approx(std::numbers::pi * 8 / 10.0));
}

TEST_CASE("gaussian transforms to its analytic Fourier transform") {
  const SpectralGrid g(GridSpec{1, 40.0, 256});
  std::vector<double> u(g.size());
  const double w = 1.3;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinates(i)[0];
    u[i] = std::exp(-x * x / (2 * w * w));
  }
  const auto uh = g.forward(u);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double xi = g.xi_mag()[i];
    const double exact = std::sqrt(2 * std::numbers::pi) * w * std::exp(-w * w * xi * xi / 2);
    err = std::max(err, std::abs(uh[i] - exact));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("round trip and Parseval in two dimensions") {
  const SpectralGrid g(GridSpec{2, 20.0, 32});
  std::vector<double> u(g.size());
  double phys = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto x = g.coordinates(i);
    u[i] = std::exp(-(x[0] - 1) * (x[0] - 1) - 0.5 * x[1] * x[1]) * (1 + x[0]);
    phys += u[i] * u[i] * g.cell_volume();
  }
  const auto uh = g.forward(u);
  double spec = 0.0;
  for (const auto& c : uh) spec += std::norm(c);
  spec /= 20.0 * 20.0;
  CHECK(spec == doctest::Approx(phys).epsilon(1e-12));
  const auto back = g.inverse_real(uh);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(back[i] - u[i]) < 1e-13);
}

TEST_CASE("mirror index and wave numbers") {
  const SpectralGrid g(GridSpec{3, 6.0, 8});
  for (std::size_t i = 0; i < g.size(); i += 7) {
    const auto k = g.wave_numbers(i);
    const auto km = g.wave_numbers(g.mirror_index(i));
    for (int a = 0; a < 3; ++a)
      if (std::abs(k[a]) != 4) CHECK(km[a] == -k[a]);
    CHECK(g.max_abs_wave_number(i) == std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])}));
  }
}
