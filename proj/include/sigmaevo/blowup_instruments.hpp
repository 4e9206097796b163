#pragma once

// Test-function machinery for the blow-up argument: the spatial weight
// phi(x) = <x>^-q with q = n + 2 s_sigma, the time cutoff eta, the fractional
// Laplacian as a Fourier multiplier, and the functionals I_R, I~_R.

#include <span>
#include <string>
#include <vector>

#include "sigmaevo/linear_propagator.hpp"
#include "sigmaevo/model.hpp"
#include "sigmaevo/spectral_grid.hpp"

namespace sigmaevo {

struct FractionalLaplacianResult {
  std::vector<double> values;
  double boundary_tail = 0.0;  // max |profile| on the outermost grid layer
  std::vector<std::string> warnings;
};

/// F^-1(|xi|^(2 gamma) F(profile)), symmetrised so the output is real. Warns
/// when the profile exceeds 1e-8 on the box boundary.
FractionalLaplacianResult fractional_laplacian(const SpectralGrid& grid, std::span<const double> profile, double gamma);

/// <x>^-q = (1 + |x|^2)^(-q/2) sampled on the grid; q must exceed the dimension.
std::vector<double> test_profile(const SpectralGrid& grid, double q);
/// <x/R>^-q.
std::vector<double> scaled_test_profile(const SpectralGrid& grid, double q, double R);

/// 1/2 for integer sigma, sigma - floor(sigma) otherwise.
double default_s_sigma(double sigma);

/// eta(t) = 1 on [0, 1/2], 0 on [1, inf), smooth and decreasing in between.
double eta_profile(double t);

/// eta and its first three derivatives, plus log eta (finite where eta > 0).
struct EtaJet {
  double value = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
  double log_value = 0.0;
  /// derivatives of log eta: g', g'', g'''
  double g1 = 0.0, g2 = 0.0, g3 = 0.0;
};
EtaJet eta_jet(double t);

/// sup over (1/2, 1) of eta^(-p'/p) (|eta'|^p' + |eta''|^p' + |eta'''|^p'),
/// evaluated on `samples` interior points. Throws numeric if not finite.
double eta_condition_check(double p, int samples = 20001);
/// Same with p' given directly.
double eta_condition_check_pprime(double p_prime, int samples = 20001);

struct BlowupFunctionals {
  double R = 0.0;
  double s_sigma = 0.5;
  double I_R = 0.0;
  double I_tilde_R = 0.0;
  double data_term = 0.0;  // int u1 phi_R dx
  double rhs_bound = 0.0;  // R^(-2 sigma p' + 2 sigma + n)
};

/// int u1(x) <x/R>^-(n + 2 s_sigma) dx by grid quadrature.
double data_term(const SpectralGrid& grid, std::span<const double> u1, double R, double s_sigma, int n);
/// R^(-2 sigma p' + 2 sigma + n)
double rhs_bound(const ModelParams& params, double R);

/// I_R and I~_R by trapezoidal quadrature in time over the snapshots; the
/// snapshots must reach t = R^(2 sigma). u1 enters the data term.
BlowupFunctionals blowup_functionals(const ModelParams& params, const SpectralGrid& grid,
                                     std::span<const FieldSnapshot> trajectory, std::span<const double> u1, double R,
                                     double s_sigma);

/// int_{e <= |x| <= R} |x|^(-n/m) / log(1 + |x|) dx (radial quadrature). The
/// integrand is not integrable at the origin for m < 2, hence the lower limit e.
double data_decay_witness(int n, double m, double R);

struct WitnessGrowth {
  double fitted_exponent = 0.0;
  double predicted_exponent = 0.0;  // n (1 - 1/m)
};

/// Fits alpha in I(R) ~ C (Ei(alpha log R) - Ei(alpha)), the exact profile of
/// int_e^R r^(alpha-1)/log r dr, to the witness values at the given radii.
WitnessGrowth fit_witness_growth(int n, double m, std::span<const double> radii);

}  // namespace sigmaevo
