#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sigmaevo/errors.hpp"
#include "sigmaevo/experiment_config.hpp"
#include "sigmaevo/semilinear_engine.hpp"

using namespace sigmaevo;

namespace {

ModelParams params(double sigma, double p) {
  ModelParams m;
  m.sigma = sigma;
  m.p = p;
  return m;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// u* = t e^-t G(x) solves the forced problem with
// F = u*_tt + (-Delta)^sigma u* + u* - g*u* - |u*|^p,  g*u* = t^2 e^-t G / 2.
std::vector<double> manufactured_run(const ModelParams& mp, const SpectralGrid& g, double dt, double T, double& err) {
  const auto G = gaussian_profile(g, 1.0);
  const auto Gh = g.forward(G);
  EtdStepper stepper(mp, g, dt, 2.0 / 3.0);
  stepper.set_source([&](double t, std::vector<cplx>& out) {
    const double e = std::exp(-t);
    std::vector<double> ustar(G.size());
    for (std::size_t i = 0; i < G.size(); ++i) ustar[i] = t * e * G[i];
    auto nl = g.forward(nonlinearity(ustar, mp.p));
    apply_dealias(g, nl, 2.0 / 3.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double a2 = std::pow(g.xi_mag()[i], 2 * mp.sigma);
      const double lin = (t - 2.0) * e + a2 * t * e + t * e - 0.5 * t * t * e;
      out[i] += lin * Gh[i] - nl[i];
    }
  });
  auto st = initial_semilinear_state(g, G);
  const long long n = std::llround(T / dt);
  for (long long k = 0; k < n; ++k) REQUIRE(stepper.step(st));
  const auto u = stepper.physical_u(st);
  std::vector<double> exact(G.size());
  for (std::size_t i = 0; i < G.size(); ++i) exact[i] = T * std::exp(-T) * G[i];
  err = max_diff(u, exact);
  return u;
}

}  // namespace

TEST_CASE("pointwise nonlinearity") {
  const std::vector<double> u = {0.0, -2.0, 1.0};
  const auto f = nonlinearity(u, 3.0);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx(8.0));
  CHECK(f[2] == 1.0);
  CHECK(nonlinearity(std::vector<double>{1.0}, 4.5)[0] == 1.0);
  CHECK_THROWS_AS(nonlinearity(u, 1.0), Error);
}

TEST_CASE("dealiasing keeps only the low modes") {
  const SpectralGrid g(GridSpec{1, 10, 32});
  std::vector<cplx> c(g.size(), 1.0);
  apply_dealias(g, c, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK((c[i] != cplx(0.0)) == (std::abs(g.wave_numbers(i)[0]) <= 8));
}

TEST_CASE("linear steps reproduce exact propagation") {
  const auto mp = params(2.0, 3.0);
  const SpectralGrid g(GridSpec{1, 50, 64});
  const EtdStepper stepper(mp, g, 0.05, 1.0, false);
  SemilinearState st;
  st.y.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) st.y[i] = Vec4(cplx(1, 0.1 * i), cplx(0.5, -0.2), cplx(0.01 * i), cplx(0.3));
  const auto y0 = st.y;
  for (int k = 0; k < 40; ++k) REQUIRE(stepper.step(st));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ref = propagate_mode(mp, g.xi_mag()[i], ModeState::from_vector(y0[i]), 40 * 0.05).as_vector();
    worst = std::max(worst, (ref - st.y[i]).norm() / std::max(1.0, ref.norm()));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("manufactured solution converges at second order") {
  const auto mp = params(1.0, 3.0);
  const SpectralGrid g(GridSpec{1, 40, 128});
  double e1 = 0, e2 = 0, e3 = 0;
  manufactured_run(mp, g, 0.1, 2.0, e1);
  manufactured_run(mp, g, 0.05, 2.0, e2);
  manufactured_run(mp, g, 0.025, 2.0, e3);
  CHECK(std::log2(e1 / e2) >= 1.9);
  CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("self-convergence on a supercritical run") {
  const auto mp = params(2.0, 6.0);
  const SpectralGrid g(GridSpec{1, 60, 128});
  auto run = [&](double dt) {
    const EtdStepper s(mp, g, dt, 2.0 / 3.0);
    auto u1 = gaussian_profile(g, 1.0);
    for (double& v : u1) v *= 1.0;
    auto st = initial_semilinear_state(g, u1);
    for (long long k = 0; k < std::llround(2.0 / dt); ++k) REQUIRE(s.step(st));
    return s.physical_u(st);
  };
  const auto a = run(0.04), b = run(0.02), c = run(0.01);
  const double order = std::log2(max_diff(a, b) / max_diff(b, c));
  CHECK(std::abs(order - 2.0) <= 0.3);
}

TEST_CASE("run verdicts") {
  SemilinearConfig cfg;
  cfg.params = params(2.0, 6.0);
  cfg.grid = GridSpec{1, 100, 128};
  cfg.t_final = 5.0;
  cfg.snapshot_times = {0.0, 1.0, 5.0};
  cfg.amplitude = 0.0;
  const auto zero = run_experiment(cfg);
  CHECK(zero.verdict == Verdict::global_decay);
  for (const auto& r : zero.norms) CHECK(r.sup == 0.0);

  cfg.params = params(2.0, 3.0);
  cfg.amplitude = 1.0;
  cfg.dt = 0.01;
  cfg.t_final = 20.0;
  const auto bu = run_experiment(cfg);
  CHECK(bu.verdict == Verdict::blowup_detected);
  REQUIRE(bu.blowup_time.has_value());
  CHECK(*bu.blowup_time < 10.0);

  cfg.dt = 10.0;
  try {
    run_experiment(cfg);
    FAIL("stability screen did not trigger");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
  }
}

TEST_CASE("small data decays at the linear rate") {
  SemilinearConfig cfg;
  cfg.params = params(2.0, 6.0);
  cfg.grid = GridSpec{1, 200, 512};
  cfg.amplitude = 1e-3;
  cfg.t_final = 1e3;
  cfg.snapshot_times = log_spaced(1e-1, 1e3, 40);
  const auto run = run_experiment(cfg);
  CHECK(run.verdict == Verdict::global_decay);
  CHECK(run.max_imag_residue < 1e-10);
}
