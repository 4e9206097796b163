#pragma once

// Reference profiles for the doubly diffusion phenomenon: S0 follows the
// small-frequency expansion of the eigenvalues through N1 (I + N2), S_inf the
// large-frequency one through (I + N4)(I + N5). Both are evaluated in closed
// form per mode rather than by integrating their defining equations.

#include <span>
#include <vector>

#include "sigmaevo/decay_lab.hpp"
#include "sigmaevo/model.hpp"
#include "sigmaevo/spectral_grid.hpp"

namespace sigmaevo {

enum class ReferenceKind { small_zone, large_zone };

/// Transform chain and eigenvalue profile of one reference equation at xi.
struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::small_zone;
  std::array<cplx, 3> lambda{};
  Mat3 chain;  // N1 (I + N2) or (I + N4)(I + N5)
};

ReferenceSpec reference_spec(const ModelParams& params, ReferenceKind kind, double xi_mag);

/// chi_int(xi) N1 (I+N2) diag(exp(lambda0 t)) (I+N2)^-1 N1^-1 U0
Vec3 reference_small_mode(const ModelParams& params, double xi_mag, const Vec3& U0, double t);
/// chi_ext(xi) (I+N4)(I+N5) diag(exp(lambda_inf t)) (I+N5)^-1 (I+N4)^-1 U0; xi_mag > 0.
Vec3 reference_large_mode(const ModelParams& params, double xi_mag, const Vec3& U0, double t);

struct DeficitSample {
  double t = 0.0;
  double norm_U = 0.0;
  double norm_U_minus_S0 = 0.0;
  double norm_U_minus_Sinf = 0.0;
  double norm_U_minus_both = 0.0;
};

struct DiffusionReport {
  std::vector<DeficitSample> series;
  RateFit base;         // ||U||
  RateFit minus_S0;     // ||U - S0||
  RateFit minus_Sinf;   // ||U - S_inf||
  RateFit minus_both;   // ||U - S0 - S_inf||
  double gap_S0 = 0.0;  // minus_S0 - base
  double gap_Sinf = 0.0;
  double gap_both = 0.0;
};

/// Evolves U from (u1_hat, u1_hat, 0) and measures the Riesz-potential norms
/// of order s of U and of the three deficits at the given times; fits over
/// [t_min, t_max]. Rejects s + ell - sigma < 0.
DiffusionReport refinement_deficit(const ModelParams& params, const SpectralGrid& grid, std::span<const cplx> u1_hat,
                                   double s, double ell, std::span<const double> times, double t_min, double t_max);

}  // namespace sigmaevo
