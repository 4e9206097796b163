#include "sigmaevo/diffusion_comparator.hpp"

#include <cmath>

#include "sigmaevo/errors.hpp"
#include "sigmaevo/linear_propagator.hpp"
#include "sigmaevo/spectral_symbol.hpp"

namespace sigmaevo {

namespace {

Vec3 evolve_reference(const ReferenceSpec& ref, const Vec3& U0, double t) {
  Eigen::PartialPivLU<Mat3> lu(ref.chain);
  if (std::abs(lu.determinant()) < 1e-12) throw_numeric("reference profile: transform chain is singular");
  Vec3 c = lu.solve(U0);
  for (int j = 0; j < 3; ++j) c(j) *= std::exp(ref.lambda[j] * t);
  return ref.chain * c;
}

}  // namespace

ReferenceSpec reference_spec(const ModelParams& params, ReferenceKind kind, double xi_mag) {
  const double a = std::pow(xi_mag, params.sigma);
  const Mat3 id = Mat3::Identity();
  ReferenceSpec ref;
  ref.kind = kind;
  if (kind == ReferenceKind::small_zone) {
    ref.lambda = asymptotic_eigenvalues_small(params, xi_mag).lambda;
    ref.chain = transforms::n1() * (id + transforms::n2(a));
  } else {
    if (!(xi_mag > 0.0)) throw_invalid("large-zone reference needs xi_mag > 0");
    ref.lambda = asymptotic_eigenvalues_large(params, xi_mag).lambda;
    ref.chain = (id + transforms::n4(a)) * (id + transforms::n5(a));
  }
  return ref;
}

Vec3 reference_small_mode(const ModelParams& params, double xi_mag, const Vec3& U0, double t) {
  if (!(t >= 0.0)) throw_invalid("reference_small_mode: t must be >= 0");
  const double chi = zone_cutoffs(params, xi_mag).chi_int;
  if (chi == 0.0) return Vec3::Zero();
  return chi * evolve_reference(reference_spec(params, ReferenceKind::small_zone, xi_mag), U0, t);
}

Vec3 reference_large_mode(const ModelParams& params, double xi_mag, const Vec3& U0, double t) {
  if (!(t >= 0.0)) throw_invalid("reference_large_mode: t must be >= 0");
  if (!(xi_mag > 0.0)) throw_invalid("reference_large_mode: xi_mag must be > 0");
  const double chi = zone_cutoffs(params, xi_mag).chi_ext;
  if (chi == 0.0) return Vec3::Zero();
  return chi * evolve_reference(reference_spec(params, ReferenceKind::large_zone, xi_mag), U0, t);
}

DiffusionReport refinement_deficit(const ModelParams& params, const SpectralGrid& grid, std::span<const cplx> u1_hat,
                                   double s, double ell, std::span<const double> times, double t_min, double t_max) {
  params.validate();
  if (!(s >= 0.0) || !(ell >= 0.0)) throw_invalid("refinement_deficit: s and ell must be >= 0");
  if (s + ell - params.sigma < 0.0) throw_invalid("refinement_deficit: hypothesis violated: s + ell - sigma >= 0");
  if (u1_hat.size() != grid.size()) throw_invalid("refinement_deficit: data size does not match grid");

  const std::size_t nt = times.size();
  std::vector<double> acc_u(nt, 0.0), acc_s0(nt, 0.0), acc_sinf(nt, 0.0), acc_both(nt, 0.0);
  const auto& xi = grid.xi_mag();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (u1_hat[i] == cplx{}) continue;
    const Vec3 U0(u1_hat[i], u1_hat[i], 0.0);
    const ModeEigensystem sys(params, xi[i]);
    const Vec3 c = sys.inverse_vectors() * U0;
    const double weight = s > 0.0 ? std::pow(xi[i], 2.0 * s) : 1.0;
    const auto cut = zone_cutoffs(params, xi[i]);
    for (std::size_t ti = 0; ti < nt; ++ti) {
      const double t = times[ti];
      Vec3 d;
      for (int j = 0; j < 3; ++j) d(j) = std::exp(sys.eigenvalues()[j] * t) * c(j);
      const Vec3 U = sys.vectors() * d;
      const Vec3 s0 = cut.chi_int > 0.0 ? reference_small_mode(params, xi[i], U0, t) : Vec3::Zero();
      const Vec3 sinf = cut.chi_ext > 0.0 ? reference_large_mode(params, xi[i], U0, t) : Vec3::Zero();
      acc_u[ti] += weight * U.squaredNorm();
      acc_s0[ti] += weight * (U - s0).squaredNorm();
      acc_sinf[ti] += weight * (U - sinf).squaredNorm();
      acc_both[ti] += weight * (U - s0 - sinf).squaredNorm();
    }
  }

  DiffusionReport rep;
  const double vol = std::pow(grid.spec().extent, grid.dim());
  std::vector<std::pair<double, double>> su, s0, sinf, both;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    DeficitSample d{times[ti], std::sqrt(acc_u[ti] / vol), std::sqrt(acc_s0[ti] / vol),
                    std::sqrt(acc_sinf[ti] / vol), std::sqrt(acc_both[ti] / vol)};
    rep.series.push_back(d);
    su.emplace_back(d.t, d.norm_U);
    s0.emplace_back(d.t, d.norm_U_minus_S0);
    sinf.emplace_back(d.t, d.norm_U_minus_Sinf);
    both.emplace_back(d.t, d.norm_U_minus_both);
  }
  rep.base = fit_decay_rate(su, t_min, t_max);
  rep.minus_S0 = fit_decay_rate(s0, t_min, t_max);
  rep.minus_Sinf = fit_decay_rate(sinf, t_min, t_max);
  rep.minus_both = fit_decay_rate(both, t_min, t_max);
  rep.gap_S0 = rep.minus_S0.fitted_exponent - rep.base.fitted_exponent;
  rep.gap_Sinf = rep.minus_Sinf.fitted_exponent - rep.base.fitted_exponent;
  rep.gap_both = rep.minus_both.fitted_exponent - rep.base.fitted_exponent;
  // L^m-driven parts of the bounds; the H^(s+ell) parts are sub-polynomial for smooth data.
  const double lm = predicted_rate(params, 0.0, ell, Quantity::u_L2).exponent;
  rep.base.predicted_exponent = -lm - s / (2.0 * params.sigma);
  rep.minus_S0.predicted_exponent = -lm - 0.5;
  rep.minus_Sinf.predicted_exponent = -lm;
  rep.minus_both.predicted_exponent = -lm - 0.5;
  return rep;
}

}  // namespace sigmaevo
