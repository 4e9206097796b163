#include "sigmaevo/decay_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sigmaevo/errors.hpp"
#include "sigmaevo/spectral_symbol.hpp"

namespace sigmaevo {

const char* to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::u_L2: return "u_L2";
    case Quantity::u_Hs: return "u_Hs";
    case Quantity::Dsigma_u_Hs: return "Dsigma_u_Hs";
    case Quantity::ut_Hs: return "ut_Hs";
    case Quantity::pointwise: return "pointwise";
  }
  return "unknown";
}

Quantity quantity_from_string(const std::string& name) {
  for (auto q : {Quantity::u_L2, Quantity::u_Hs, Quantity::Dsigma_u_Hs, Quantity::ut_Hs, Quantity::pointwise})
    if (name == to_string(q)) return q;
  throw_invalid("unknown quantity '" + name + "'");
}

double sobolev_norm(const SpectralGrid& grid, std::span<const cplx> coeffs, double s, bool homogeneous) {
  if (!(s >= 0.0)) throw_invalid("sobolev_norm: s must be >= 0");
  if (coeffs.size() != grid.size()) throw_invalid("sobolev_norm: size mismatch");
  const auto& xi = grid.xi_mag();
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double a2 = std::norm(coeffs[i]);
    if (!std::isfinite(a2)) throw_numeric("sobolev_norm: non-finite coefficient");
    if (a2 == 0.0) continue;
    double weight = 1.0;
    if (s > 0.0) weight = homogeneous ? std::pow(xi[i], 2.0 * s) : std::pow(1.0 + xi[i] * xi[i], s);
    acc += weight * a2;
  }
  return std::sqrt(acc / std::pow(grid.spec().extent, grid.dim()));
}

double sobolev_norm(const SpectralGrid& grid, const FieldSnapshot& snap, double s, bool homogeneous,
                    SnapshotField field) {
  switch (field) {
    case SnapshotField::u: return sobolev_norm(grid, snap.u_hat, s, homogeneous);
    case SnapshotField::ut: return sobolev_norm(grid, snap.ut_hat, s, homogeneous);
    case SnapshotField::w: return sobolev_norm(grid, snap.w_hat, s, homogeneous);
    case SnapshotField::sigma_deriv: return sobolev_norm(grid, snap.sigma_deriv_hat, s, homogeneous);
  }
  throw_invalid("sobolev_norm: unknown field");
}

RatePrediction predicted_rate(const ModelParams& params, double s, double ell, Quantity quantity) {
  if (!(s >= 0.0) || !(ell >= 0.0)) throw_invalid("predicted_rate: s and ell must be >= 0");
  const double base = params.n / (2.0 * params.sigma) * (1.0 / params.m - 0.5);
  const double gain = s / (2.0 * params.sigma);
  RatePrediction out;
  out.regularity_loss_exponent = ell / (2.0 * params.sigma);
  switch (quantity) {
    case Quantity::u_L2: out.exponent = base; break;
    case Quantity::u_Hs: out.exponent = base + gain; break;
    case Quantity::Dsigma_u_Hs: out.exponent = base + 0.5 + gain; break;
    case Quantity::ut_Hs: out.exponent = base + 1.0 + gain; break;
    case Quantity::pointwise: throw_invalid("predicted_rate: no polynomial exponent for 'pointwise'");
  }
  return out;
}

RateFit fit_decay_rate(std::span<const std::pair<double, double>> series, double t_min, double t_max) {
  if (!(t_min < t_max)) throw_invalid("fit_decay_rate: window must satisfy t_min < t_max");
  std::vector<double> xs, ys;
  for (const auto& [t, v] : series) {
    if (t < t_min || t > t_max) continue;
    if (!(v > 0.0) || !std::isfinite(v))
      throw_numeric("fit_decay_rate: non-positive or non-finite value at t = " + std::to_string(t));
    xs.push_back(std::log1p(t));
    ys.push_back(std::log(v));
  }
  if (xs.size() < 8) throw_invalid("fit_decay_rate: need at least 8 samples inside the window");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw_invalid("fit_decay_rate: all samples at the same time");
  RateFit fit;
  fit.fitted_exponent = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (my + fit.fitted_exponent * (xs[i] - mx));
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.samples = static_cast<int>(xs.size());
  return fit;
}

double pointwise_rho(const ModelParams& params, double xi_mag) {
  return std::pow(xi_mag, 2.0 * params.sigma) / std::pow(1.0 + xi_mag * xi_mag, 2.0 * params.sigma);
}

PointwiseBoundEstimate pointwise_bound_scan(const ModelParams& params, std::span<const double> t_samples,
                                            std::span<const double> xi_samples, double C_cap, double c_lo,
                                            double c_hi) {
  if (t_samples.empty() || xi_samples.empty()) throw_invalid("pointwise_bound_scan: empty sample lattice");
  if (!(C_cap >= 1.0)) throw_invalid("pointwise_bound_scan: C_cap must be >= 1");
  if (!(c_lo > 0.0 && c_hi > c_lo)) throw_invalid("pointwise_bound_scan: need 0 < c_lo < c_hi");
  for (double t : t_samples)
    if (!(t >= 0.0)) throw_invalid("pointwise_bound_scan: t must be >= 0");

  // log |E(t,xi)| - log |E(0,xi)| and rho t for every sample
  struct Sample {
    double log_ratio, rho_t;
  };
  std::vector<Sample> samples;
  samples.reserve(t_samples.size() * xi_samples.size());
  const Vec3 e0(1.0, 1.0, 0.0);
  const double log_e0 = std::log(e0.norm());
  for (double xi : xi_samples) {
    if (!(xi >= 0.0)) throw_invalid("pointwise_bound_scan: xi must be >= 0");
    const ModeEigensystem sys(params, xi);
    const double rho = pointwise_rho(params, xi);
    for (double t : t_samples) {
      double log_scale = 0.0;
      const Vec3 v = sys.propagate_scaled(t, e0, log_scale);
      const double nv = v.norm();
      const double lr = nv > 0.0 ? std::log(nv) + log_scale - log_e0 : -std::numeric_limits<double>::infinity();
      samples.push_back({lr, rho * t});
    }
  }

  PointwiseBoundEstimate est;
  est.C_cap = C_cap;
  est.t_count = t_samples.size();
  est.xi_count = xi_samples.size();
  est.t_lo = *std::min_element(t_samples.begin(), t_samples.end());
  est.t_hi = *std::max_element(t_samples.begin(), t_samples.end());
  est.xi_lo = *std::min_element(xi_samples.begin(), xi_samples.end());
  est.xi_hi = *std::max_element(xi_samples.begin(), xi_samples.end());
  constexpr int kCandidates = 64;
  bool found = false;
  for (int j = 0; j < kCandidates; ++j) {
    const double c = c_lo * std::pow(c_hi / c_lo, static_cast<double>(j) / (kCandidates - 1));
    double log_c_big = 0.0;
    for (const auto& s : samples) log_c_big = std::max(log_c_big, s.log_ratio + c * s.rho_t);
    const double big = std::exp(log_c_big);
    est.c_candidates.push_back(c);
    est.C_of_c.push_back(big);
    if (big <= C_cap) {
      est.c_est = c;
      est.C_est = big;
      found = true;
    }
  }
  if (!found) throw_numeric("pointwise_bound_scan: bound unsatisfiable for every scanned c");
  return est;
}

const char* to_string(ConvolutionClass c) noexcept {
  switch (c) {
    case ConvolutionClass::min: return "min";
    case ConvolutionClass::min_log: return "min-log";
    case ConvolutionClass::sum_minus_one: return "sum-minus-one";
  }
  return "unknown";
}

RateConvolution rate_convolution(double alpha, double beta) {
  const double hi = std::max(alpha, beta);
  const double lo = std::min(alpha, beta);
  if (hi > 1.0) return {ConvolutionClass::min, lo, false};
  if (hi == 1.0) return {ConvolutionClass::min_log, lo, true};
  return {ConvolutionClass::sum_minus_one, alpha + beta - 1.0, false};
}

double rough_profile(const ModelParams& params, double s, double ell, double delta, double xi_mag) {
  return std::pow(1.0 + xi_mag * xi_mag, -0.5 * (s + ell + 0.5 * params.n + delta));
}

RateFit regularity_loss_probe(const ModelParams& params, const SpectralGrid& grid, double s, double ell,
                              const RegularityLossOptions& options) {
  params.validate();
  if (!(s >= 0.0) || !(ell >= 0.0)) throw_invalid("regularity_loss_probe: s and ell must be >= 0");
  if (options.times.empty()) throw_invalid("regularity_loss_probe: no sample times");
  if (grid.nyquist() < 2.0 * params.n_zone)
    throw_invalid("regularity_loss_probe: Nyquist frequency below 2 n_zone, tail not resolved");

  std::vector<double> acc(options.times.size(), 0.0);
  const auto& xi = grid.xi_mag();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double chi = zone_cutoffs(params, xi[i]).chi_ext;
    if (chi == 0.0) continue;
    const double u1 = rough_profile(params, s, ell, options.delta, xi[i]);
    const ModeEigensystem sys(params, xi[i]);
    const Vec3 c = sys.inverse_vectors() * Vec3(u1, u1, 0.0);
    const double weight = chi * std::pow(xi[i], s);
    for (std::size_t ti = 0; ti < options.times.size(); ++ti) {
      const double t = options.times[ti];
      cplx ut = 0.0;
      for (int j = 0; j < 3; ++j)
        ut += 0.5 * (sys.vectors()(0, j) + sys.vectors()(1, j)) * std::exp(sys.eigenvalues()[j] * t) * c(j);
      acc[ti] += std::norm(weight * ut);
    }
  }
  std::vector<std::pair<double, double>> series;
  const double vol = std::pow(grid.spec().extent, grid.dim());
  for (std::size_t ti = 0; ti < acc.size(); ++ti) series.emplace_back(options.times[ti], std::sqrt(acc[ti] / vol));
  const double t_min = options.t_min > 0.0 ? options.t_min : options.times.front();
  const double t_max = options.t_max > 0.0 ? options.t_max : options.times.back();
  RateFit fit = fit_decay_rate(series, t_min, t_max);
  fit.predicted_exponent = -ell / (2.0 * params.sigma);
  fit.quantity = Quantity::ut_Hs;
  return fit;
}

std::vector<std::pair<double, double>> norm_series(const SpectralGrid& grid, std::span<const FieldSnapshot> snaps,
                                                   Quantity quantity, double s) {
  std::vector<std::pair<double, double>> out;
  for (const auto& snap : snaps) {
    double v = 0.0;
    switch (quantity) {
      case Quantity::u_L2: v = sobolev_norm(grid, snap, 0.0, true, SnapshotField::u); break;
      case Quantity::u_Hs: v = sobolev_norm(grid, snap, s, true, SnapshotField::u); break;
      case Quantity::Dsigma_u_Hs: v = sobolev_norm(grid, snap, s, true, SnapshotField::sigma_deriv); break;
      case Quantity::ut_Hs: v = sobolev_norm(grid, snap, s, true, SnapshotField::ut); break;
      case Quantity::pointwise: throw_invalid("norm_series: 'pointwise' is not a norm");
    }
    out.emplace_back(snap.time, v);
  }
  return out;
}

}  // namespace sigmaevo
