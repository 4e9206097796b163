#include "sigmaevo/blowup_instruments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "sigmaevo/errors.hpp"
#include "sigmaevo/semilinear_engine.hpp"

namespace sigmaevo {

namespace {

// Truncated Taylor series f(x0 + d) = sum_k c[k] d^k, k <= 3.
struct Jet {
  std::array<double, 4> c{};

  static Jet variable(double x0) { return Jet{{x0, 1.0, 0.0, 0.0}}; }
  static Jet constant(double v) { return Jet{{v, 0.0, 0.0, 0.0}}; }

  Jet operator+(const Jet& o) const {
    Jet r;
    for (int k = 0; k < 4; ++k) r.c[k] = c[k] + o.c[k];
    return r;
  }
  Jet operator-(const Jet& o) const {
    Jet r;
    for (int k = 0; k < 4; ++k) r.c[k] = c[k] - o.c[k];
    return r;
  }
  Jet operator-() const { return constant(0.0) - *this; }
};

Jet recip(const Jet& a) {
  Jet r;
  r.c[0] = 1.0 / a.c[0];
  for (int k = 1; k < 4; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += a.c[j] * r.c[k - j];
    r.c[k] = -s / a.c[0];
  }
  return r;
}

Jet exp(const Jet& a) {
  Jet r;
  r.c[0] = std::exp(a.c[0]);
  for (int k = 1; k < 4; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * a.c[j] * r.c[k - j];
    r.c[k] = s / k;
  }
  return r;
}

Jet log(const Jet& a) {
  Jet r;
  r.c[0] = std::log(a.c[0]);
  for (int k = 1; k < 4; ++k) {
    double s = 0.0;
    for (int j = 1; j < k; ++j) s += j * r.c[j] * a.c[k - j];
    r.c[k] = (a.c[k] - s / k) / a.c[0];
  }
  return r;
}

double surface_area(int n) { return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n); }

}  // namespace

FractionalLaplacianResult fractional_laplacian(const SpectralGrid& grid, std::span<const double> profile, double gamma) {
  if (!(gamma > 0.0)) throw_invalid("fractional_laplacian: gamma must be > 0");
  if (profile.size() != grid.size()) throw_invalid("fractional_laplacian: size mismatch");
  FractionalLaplacianResult out;
  const int m = grid.spec().points;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::size_t idx = i;
    bool edge = false;
    for (int a = 0; a < grid.dim(); ++a) {
      const auto j = static_cast<int>(idx % static_cast<std::size_t>(m));
      idx /= static_cast<std::size_t>(m);
      if (j == 0 || j == m - 1) edge = true;
    }
    if (edge) out.boundary_tail = std::max(out.boundary_tail, std::abs(profile[i]));
  }
  if (out.boundary_tail > 1e-8)
    out.warnings.push_back("profile is " + std::to_string(out.boundary_tail) +
                           " on the box boundary; periodisation error expected");
  auto coeffs = grid.forward(profile);
  const auto& xi = grid.xi_mag();
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= std::pow(xi[i], 2.0 * gamma);
  out.values = grid.inverse_real(coeffs);
  return out;
}

std::vector<double> test_profile(const SpectralGrid& grid, double q) { return scaled_test_profile(grid, q, 1.0); }

std::vector<double> scaled_test_profile(const SpectralGrid& grid, double q, double R) {
  if (!(q > grid.dim())) throw_invalid("test_profile: q must exceed the dimension");
  if (!(R > 0.0)) throw_invalid("test_profile: R must be > 0");
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.radius(i) / R;
    out[i] = std::pow(1.0 + r * r, -0.5 * q);
  }
  return out;
}

double default_s_sigma(double sigma) {
  const double frac = sigma - std::floor(sigma);
  return frac == 0.0 ? 0.5 : frac;
}

EtaJet eta_jet(double t) {
  EtaJet out;
  if (t <= 0.5) {
    out.value = 1.0;
    return out;
  }
  if (t >= 1.0) {
    out.log_value = -std::numeric_limits<double>::infinity();
    return out;
  }
  // eta(t) = S(x), x = 2(1 - t), S(x) = f(x) / (f(x) + f(1 - x)), f(x) = exp(-1/x)
  const double x0 = 2.0 * (1.0 - t);
  const Jet x = Jet::variable(x0);
  const Jet a = -recip(x);
  const Jet b = -recip(Jet::constant(1.0) - x);
  const Jet shift = Jet::constant(std::max(a.c[0], b.c[0]));
  const Jet lse = shift + log(exp(a - shift) + exp(b - shift));
  const Jet g = a - lse;
  // d/dt = -2 d/dx
  const double g1 = -2.0 * g.c[1];
  const double g2 = 4.0 * 2.0 * g.c[2];
  const double g3 = -8.0 * 6.0 * g.c[3];
  out.log_value = g.c[0];
  out.value = std::exp(g.c[0]);
  out.g1 = g1;
  out.g2 = g2;
  out.g3 = g3;
  out.d1 = out.value * g1;
  out.d2 = out.value * (g2 + g1 * g1);
  out.d3 = out.value * (g3 + 3.0 * g1 * g2 + g1 * g1 * g1);
  return out;
}

double eta_profile(double t) { return eta_jet(t).value; }

double eta_condition_check_pprime(double pp, int samples) {
  if (!(pp > 1.0)) throw_invalid("eta_condition_check: p' must be > 1");
  if (samples < 3) throw_invalid("eta_condition_check: need at least 3 samples");
  // eta^(-p'/p) |eta^(k)|^p' = eta |eta^(k) / eta|^p' since p' - p'/p = 1
  double sup = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double t = 0.5 + 0.5 * i / (samples + 1.0);
    const auto j = eta_jet(t);
    const std::array<double, 3> ratios{j.g1, j.g2 + j.g1 * j.g1, j.g3 + 3.0 * j.g1 * j.g2 + j.g1 * j.g1 * j.g1};
    double total = 0.0;
    for (double r : ratios)
      if (r != 0.0) total += std::exp(j.log_value + pp * std::log(std::abs(r)));
    sup = std::max(sup, total);
  }
  if (!std::isfinite(sup)) throw_numeric("eta condition is not finite");
  return sup;
}

double eta_condition_check(double p, int samples) {
  if (!(p > 1.0)) throw_invalid("eta_condition_check: p must be > 1");
  return eta_condition_check_pprime(p / (p - 1.0), samples);
}

double data_term(const SpectralGrid& grid, std::span<const double> u1, double R, double s_sigma, int n) {
  if (u1.size() != grid.size()) throw_invalid("data_term: size mismatch");
  const auto phi = scaled_test_profile(grid, n + 2.0 * s_sigma, R);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) acc += u1[i] * phi[i];
  return acc * grid.cell_volume();
}

double rhs_bound(const ModelParams& params, double R) {
  const double pp = params.p / (params.p - 1.0);
  return std::pow(R, -2.0 * params.sigma * pp + 2.0 * params.sigma + params.n);
}

BlowupFunctionals blowup_functionals(const ModelParams& params, const SpectralGrid& grid,
                                     std::span<const FieldSnapshot> trajectory, std::span<const double> u1, double R,
                                     double s_sigma) {
  if (!(R > 0.0)) throw_invalid("blowup_functionals: R must be > 0");
  if (!(s_sigma > 0.0 && s_sigma < 1.0)) throw_invalid("blowup_functionals: s_sigma must be in (0,1)");
  const double horizon = std::pow(R, 2.0 * params.sigma);
  if (trajectory.empty() || trajectory.back().time < horizon * (1.0 - 1e-12))
    throw_invalid("blowup_functionals: trajectory too short, required horizon R^(2 sigma) = " +
                  std::to_string(horizon));

  BlowupFunctionals out;
  out.R = R;
  out.s_sigma = s_sigma;
  out.data_term = data_term(grid, u1, R, s_sigma, params.n);
  out.rhs_bound = rhs_bound(params, R);

  const auto phi = scaled_test_profile(grid, params.n + 2.0 * s_sigma, R);
  std::vector<double> ts, f_eta, f_deta;
  for (const auto& snap : trajectory) {
    if (snap.time > horizon) break;
    const auto u = grid.inverse_real(snap.u_hat);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::pow(std::abs(u[i]), params.p) * phi[i];
    acc *= grid.cell_volume();
    const auto j = eta_jet(snap.time / horizon);
    ts.push_back(snap.time);
    f_eta.push_back(j.value * acc);
    f_deta.push_back(j.d1 / horizon * acc);
  }
  for (std::size_t k = 1; k < ts.size(); ++k) {
    const double h = ts[k] - ts[k - 1];
    out.I_R += 0.5 * h * (f_eta[k] + f_eta[k - 1]);
    out.I_tilde_R += 0.5 * h * (f_deta[k] + f_deta[k - 1]);
  }
  return out;
}

double data_decay_witness(int n, double m, double R) {
  if (n < 1) throw_invalid("data_decay_witness: n must be >= 1");
  if (!(m > 1.0 && m < 2.0)) throw_invalid("data_decay_witness: m must be in (1,2)");
  if (!(R > std::numbers::e)) throw_invalid("data_decay_witness: R must exceed e");
  // r = e^v: integrand r^(n - n/m) / log(1 + r) dv over [1, log R], composite Simpson
  const double lo = 1.0, hi = std::log(R);
  const int intervals = 2 * std::max(64, static_cast<int>(std::ceil(400.0 * (hi - lo))));
  const double h = (hi - lo) / intervals;
  auto f = [&](double v) {
    const double r = std::exp(v);
    return std::pow(r, n - n / m) / std::log1p(r);
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return surface_area(n) * acc * h / 3.0;
}

WitnessGrowth fit_witness_growth(int n, double m, std::span<const double> radii) {
  if (radii.size() < 3) throw_invalid("fit_witness_growth: need at least 3 radii");
  std::vector<double> log_i, log_r;
  for (double R : radii) {
    log_i.push_back(std::log(data_decay_witness(n, m, R)));
    log_r.push_back(std::log(R));
  }
  // variance of log I - log model, minimised over alpha (the constant is free)
  auto objective = [&](double alpha) {
    double mean = 0.0;
    std::vector<double> d(log_i.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      d[i] = log_i[i] - std::log(std::expint(alpha * log_r[i]) - std::expint(alpha));
      mean += d[i];
    }
    mean /= static_cast<double>(d.size());
    double var = 0.0;
    for (double x : d) var += (x - mean) * (x - mean);
    return var;
  };
  double lo = 1e-3, hi = static_cast<double>(n) + 1.0;
  double best = lo, best_val = objective(lo);
  constexpr int kScan = 400;
  for (int i = 1; i <= kScan; ++i) {
    const double a = lo + (hi - lo) * i / kScan;
    const double v = objective(a);
    if (v < best_val) {
      best_val = v;
      best = a;
    }
  }
  const double step = (hi - lo) / kScan;
  double a = std::max(lo, best - step), b = std::min(hi, best + step);
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double c = b - golden * (b - a);
    const double d = a + golden * (b - a);
    if (objective(c) < objective(d)) b = d;
    else a = c;
  }
  return {0.5 * (a + b), n * (1.0 - 1.0 / m)};
}

}  // namespace sigmaevo
