#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sigmaevo/linear_propagator.hpp"
#include "sigmaevo/model.hpp"
#include "sigmaevo/spectral_grid.hpp"

namespace sigmaevo {

enum class Quantity { u_L2, u_Hs, Dsigma_u_Hs, ut_Hs, pointwise };

const char* to_string(Quantity q) noexcept;
/// Parses "u_L2", "u_Hs", "Dsigma_u_Hs", "ut_Hs", "pointwise"; throws otherwise.
Quantity quantity_from_string(const std::string& name);

/// Fitted and predicted exponents are slopes of log(norm) against log(1+t),
/// so a decaying norm has a negative exponent.
struct RateFit {
  double fitted_exponent = 0.0;
  double predicted_exponent = 0.0;
  double residual_rms = 0.0;
  double t_min = 0.0, t_max = 0.0;
  int samples = 0;
  Quantity quantity = Quantity::u_L2;
};

struct RatePrediction {
  double exponent = 0.0;            // positive: norm ~ (1+t)^(-exponent)
  double regularity_loss_exponent = 0.0;  // ell / (2 sigma), the large-frequency companion
};

/// Riesz (homogeneous) or Bessel potential norm from Fourier coefficients:
/// (L^-n sum w(xi) |c|^2)^(1/2) with w = |xi|^2s or (1+|xi|^2)^s.
double sobolev_norm(const SpectralGrid& grid, std::span<const cplx> coeffs, double s, bool homogeneous);

enum class SnapshotField { u, ut, w, sigma_deriv };
double sobolev_norm(const SpectralGrid& grid, const FieldSnapshot& snap, double s, bool homogeneous,
                    SnapshotField field = SnapshotField::u);

/// L^m-driven decay exponent of the linear estimates (a positive number).
RatePrediction predicted_rate(const ModelParams& params, double s, double ell, Quantity quantity);

/// Least squares slope of log(value) against log(1+t) over samples with
/// t in [t_min, t_max]. Needs at least 8 samples there, all positive.
RateFit fit_decay_rate(std::span<const std::pair<double, double>> series, double t_min, double t_max);

struct PointwiseBoundEstimate {
  double c_est = 0.0;
  double C_est = 1.0;
  double C_cap = 10.0;
  std::size_t t_count = 0, xi_count = 0;
  double t_lo = 0.0, t_hi = 0.0, xi_lo = 0.0, xi_hi = 0.0;
  std::vector<double> c_candidates;
  std::vector<double> C_of_c;  // smallest admissible C for each candidate
};

/// rho(xi) = |xi|^(2 sigma) / (1 + |xi|^2)^(2 sigma)
double pointwise_rho(const ModelParams& params, double xi_mag);

/// Largest c (from 64 log-spaced candidates in [c_lo, c_hi]) whose smallest C
/// with |E(t,xi)| <= C exp(-c rho t) |E(0,xi)| on all samples stays <= C_cap.
/// Throws numeric when no candidate qualifies.
PointwiseBoundEstimate pointwise_bound_scan(const ModelParams& params, std::span<const double> t_samples,
                                            std::span<const double> xi_samples, double C_cap = 10.0,
                                            double c_lo = 1e-4, double c_hi = 10.0);

enum class ConvolutionClass { min, min_log, sum_minus_one };
const char* to_string(ConvolutionClass c) noexcept;

struct RateConvolution {
  ConvolutionClass cls = ConvolutionClass::min;
  double exponent = 0.0;
  bool log_factor = false;
};

/// Decay of int_0^t (1+t-tau)^-alpha (1+tau)^-beta dtau.
RateConvolution rate_convolution(double alpha, double beta);

struct RegularityLossOptions {
  double delta = 0.1;
  std::vector<double> times;  // log-spaced sample times
  double t_min = 0.0, t_max = 0.0;
};

/// |u1_hat(xi)| = (1 + |xi|^2)^(-(s + ell + n/2 + delta)/2): just inside H^(s+ell).
double rough_profile(const ModelParams& params, double s, double ell, double delta, double xi_mag);

/// Evolves the rough profile, measures ||chi_ext |D|^s u_t||_L2 at the sample
/// times and fits its decay; predicted exponent is -ell/(2 sigma).
RateFit regularity_loss_probe(const ModelParams& params, const SpectralGrid& grid, double s, double ell,
                              const RegularityLossOptions& options);

/// Time series of a norm over snapshots; quantity selects field and weight.
std::vector<std::pair<double, double>> norm_series(const SpectralGrid& grid, std::span<const FieldSnapshot> snaps,
                                                   Quantity quantity, double s);

}  // namespace sigmaevo
