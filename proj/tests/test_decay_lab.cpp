#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sigmaevo/decay_lab.hpp"
#include "sigmaevo/errors.hpp"
#include "sigmaevo/experiment_config.hpp"
#include "sigmaevo/semilinear_engine.hpp"
#include "sigmaevo/spectral_symbol.hpp"

using namespace sigmaevo;

namespace {

ModelParams with_sigma(double sigma) {
  ModelParams p;
  p.sigma = sigma;
  return p;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return sxy / sxx;
}

// Large-zone envelope: int chi_ext^2 xi^2s |u1|^2 exp(-t xi^-2sigma) dxi over [N/2, xi_max],
// using only the leading real part -xi^-2sigma / 2 of the oscillatory pair.
double envelope_exponent(const ModelParams& p, double s, double ell, double delta, double xi_max,
                         const std::vector<double>& times) {
  std::vector<double> lx, ly;
  const int nodes = 200000;
  const double a = std::log(p.n_zone), b = std::log(xi_max);
  for (double t : times) {
    double sum = 0.0;
    for (int k = 0; k <= nodes; ++k) {
      const double xi = std::exp(a + (b - a) * k / nodes);
      const double chi = zone_cutoffs(p, xi).chi_ext;
      const double u1 = std::pow(1 + xi * xi, -0.5 * (s + ell + 0.5 + delta));
      const double w = (k == 0 || k == nodes) ? 0.5 : 1.0;
      sum += w * xi * chi * chi * std::pow(xi, 2 * s) * u1 * u1 * std::exp(-t * std::pow(xi, -2 * p.sigma));
    }
    lx.push_back(std::log1p(t));
    ly.push_back(0.5 * std::log(sum));
  }
  return ls_slope(lx, ly);
}

}  // namespace

TEST_CASE("sobolev norms") {
  const SpectralGrid g(GridSpec{1, 30.0, 256});
  std::vector<cplx> zero(g.size(), 0.0);
  CHECK(sobolev_norm(g, zero, 1.0, true) == 0.0);

  std::vector<double> u(g.size());
  double phys = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinates(i)[0];
    u[i] = std::exp(-x * x) * std::cos(2 * x);
    phys += u[i] * u[i] * g.spacing();
  }
  CHECK(sobolev_norm(g, g.forward(u), 0.0, true) == doctest::Approx(std::sqrt(phys)).epsilon(1e-9));

  // single mode at |xi| = 2: the homogeneous s = 1 weight multiplies by 2
  const double L = 2 * std::numbers::pi * 8;
  const SpectralGrid g2(GridSpec{1, L, 64});
  std::vector<cplx> one(g2.size(), 0.0);
  for (std::size_t i = 0; i < g2.size(); ++i)
    if (g2.wave_numbers(i)[0] == 16) one[i] = 1.0;
  CHECK(sobolev_norm(g2, one, 1.0, true) == doctest::Approx(2 * sobolev_norm(g2, one, 0.0, true)));
}

TEST_CASE("predicted rates") {
  CHECK(predicted_rate(with_sigma(1.0), 0, 0, Quantity::u_L2).exponent == doctest::Approx(0.25));
  CHECK(predicted_rate(with_sigma(2.0), 0, 0, Quantity::ut_Hs).exponent == doctest::Approx(9.0 / 8.0));
  auto p = with_sigma(1.0);
  p.m = 1.999999999;
  CHECK(predicted_rate(p, 0, 0, Quantity::u_L2).exponent == doctest::Approx(0.0).epsilon(1e-8));
  CHECK_THROWS_AS(predicted_rate(p, 0, 0, Quantity::pointwise), Error);
  CHECK(quantity_from_string("ut_Hs") == Quantity::ut_Hs);
  CHECK_THROWS_AS(quantity_from_string("nope"), Error);
}

TEST_CASE("rate fitting") {
  std::vector<std::pair<double, double>> pw, flat;
  for (double t : log_spaced(1, 1e4, 20)) {
    pw.emplace_back(t, std::pow(1 + t, -2.0));
    flat.emplace_back(t, 3.0);
  }
  CHECK(fit_decay_rate(pw, 1, 1e4).fitted_exponent == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(std::abs(fit_decay_rate(flat, 1, 1e4).fitted_exponent) < 1e-12);
  CHECK_THROWS_AS(fit_decay_rate(pw, 1e3, 1e4), Error);
  pw[5].second = -1.0;
  CHECK_THROWS_AS(fit_decay_rate(pw, 1, 1e4), Error);
}

TEST_CASE("pointwise bound scan") {
  const auto p = with_sigma(1.0);
  const std::vector<double> t0 = {0.0};
  const auto xs = log_spaced(1e-3, 1e3, 60);
  const auto single = pointwise_bound_scan(p, t0, xs);
  CHECK(single.C_est == doctest::Approx(1.0));
  CHECK(single.c_est == doctest::Approx(10.0));

  std::vector<double> ts{0.0};
  for (double t : log_spaced(1e-2, 1e4, 40)) ts.push_back(t);
  const auto full = pointwise_bound_scan(p, ts, log_spaced(1e-3, 1e3, 121));
  CHECK(full.c_est > 0.0);
  CHECK(full.C_est < 10.0);

  // middle zone only: c rho <= c_mid must be admissible
  const auto gap = measure_middle_gap(p);
  const auto mid_xi = log_spaced(p.eps_zone, p.n_zone, 80);
  double rho_max = 0.0;
  for (double xi : mid_xi) rho_max = std::max(rho_max, pointwise_rho(p, xi));
  const auto mid = pointwise_bound_scan(p, ts, mid_xi);
  CHECK(mid.c_est >= gap.c_mid / rho_max / 1.25);
}

TEST_CASE("rate convolution classes") {
  const auto a = rate_convolution(2, 0.5);
  CHECK(a.cls == ConvolutionClass::min);
  CHECK(a.exponent == 0.5);
  CHECK_FALSE(a.log_factor);
  const auto b = rate_convolution(1, 1);
  CHECK(b.cls == ConvolutionClass::min_log);
  CHECK(b.exponent == 1.0);
  CHECK(b.log_factor);
  const auto c = rate_convolution(0.3, 0.4);
  CHECK(c.cls == ConvolutionClass::sum_minus_one);
  CHECK(c.exponent == doctest::Approx(-0.3));
}

TEST_CASE("regularity-loss probe against the envelope quadrature") {
  struct Case {
    double sigma, ell, t0, t1, L;
    int M;
  };
  for (const auto& c : {Case{1, 2, 1e3, 1e5, 20, 16384}, Case{2, 2, 1e5, 1e7, 20, 8192}, Case{1, 0, 10, 1e3, 20, 16384}}) {
    const auto p = with_sigma(c.sigma);
    const SpectralGrid g(GridSpec{1, c.L, c.M});
    RegularityLossOptions opt;
    opt.delta = 0.1;
    opt.times = log_spaced(c.t0, c.t1, 16);
    const auto fit = regularity_loss_probe(p, g, 0.0, c.ell, opt);
    const double oracle = envelope_exponent(p, 0.0, c.ell, 0.1, g.nyquist(), opt.times);
    CHECK(std::abs(fit.fitted_exponent - oracle) <= 0.05);
    CHECK(std::abs(fit.fitted_exponent - fit.predicted_exponent) <= 0.1);
  }
  const SpectralGrid coarse(GridSpec{1, 200, 64});
  RegularityLossOptions opt;
  opt.times = log_spaced(1, 10, 10);
  CHECK_THROWS_AS(regularity_loss_probe(with_sigma(1), coarse, 0, 2, opt), Error);
}

TEST_CASE("linear decay is at least as fast as predicted") {
  const SpectralGrid g(GridSpec{1, 2000, 16384});
  const auto u1 = gaussian_profile(g, 1.0);
  const auto times = log_spaced(1e2, 1e4, 24);
  for (double sigma : {1.0, 1.5, 2.0}) {
    const auto p = with_sigma(sigma);
    const auto ev = evolve_field(p, g, u1, times);
    for (auto q : {Quantity::u_L2, Quantity::Dsigma_u_Hs, Quantity::ut_Hs}) {
      const auto fit = fit_decay_rate(norm_series(g, ev.snapshots, q, 0.0), 1e2, 1e4);
      CHECK(fit.fitted_exponent <= -predicted_rate(p, 0, 0, q).exponent + 0.05);
      if (sigma == 1.0) CHECK(std::abs(fit.fitted_exponent + predicted_rate(p, 0, 0, q).exponent) <= 0.05);
    }
  }
}
