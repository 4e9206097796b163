#include "sigmaevo/spectral_symbol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "sigmaevo/errors.hpp"

namespace sigmaevo {

namespace {

constexpr cplx kI{0.0, 1.0};
const double kSqrt3 = std::sqrt(3.0);

double symbol_power(const ModelParams& params, double xi_mag) {
  if (!(xi_mag >= 0.0)) throw_invalid("xi_mag must be >= 0");
  return std::pow(xi_mag, params.sigma);
}

double polish_real_root(const CubicCoeffs& c, double r) {
  for (int it = 0; it < 6; ++it) {
    const double f = ((c.c3 * r + c.c2) * r + c.c1) * r + c.c0;
    const double df = (3.0 * c.c3 * r + 2.0 * c.c2) * r + c.c1;
    if (df == 0.0) break;
    const double step = f / df;
    r -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(r)) break;
  }
  return r;
}

}  // namespace

const char* to_string(BranchTag tag) noexcept {
  switch (tag) {
    case BranchTag::small_matched: return "small-matched";
    case BranchTag::large_matched: return "large-matched";
    case BranchTag::continued: return "continued";
  }
  return "unknown";
}

Mat3 system_matrix(const ModelParams& params, double xi_mag) {
  const double a = symbol_power(params, xi_mag);
  Mat3 mat;
  mat << kI * a, 0.0, 1.0,
         0.0, -kI * a, 1.0,
         -0.5, -0.5, -1.0;
  return mat;
}

CubicCoeffs characteristic_coeffs(const ModelParams& params, double xi_mag) {
  const double a = symbol_power(params, xi_mag);
  const double a2 = a * a;
  return CubicCoeffs{1.0, 1.0, 1.0 + a2, a2};
}

std::array<cplx, 3> cubic_roots(const CubicCoeffs& c) {
  if (c.c3 == 0.0) throw_invalid("cubic_roots: leading coefficient is zero");
  CubicCoeffs monic{1.0, c.c2 / c.c3, c.c1 / c.c3, c.c0 / c.c3};

  Eigen::Matrix3d companion;
  companion << -monic.c2, -monic.c1, -monic.c0,
               1.0, 0.0, 0.0,
               0.0, 1.0, 0.0;
  Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
  if (solver.info() != Eigen::Success) throw_numeric("cubic_roots: companion eigensolve did not converge");
  const auto ev = solver.eigenvalues();

  int real_idx = 0;
  for (int j = 1; j < 3; ++j)
    if (std::abs(ev[j].imag()) < std::abs(ev[real_idx].imag())) real_idx = j;
  const double r = polish_real_root(monic, ev[real_idx].real());

  // (l - r)(l^2 + beta l + gamma)
  const double beta = monic.c2 + r;
  const double gamma = monic.c1 + r * beta;
  const double disc = 4.0 * gamma - beta * beta;
  if (!(disc > 0.0)) throw_numeric("cubic_roots: expected exactly one real root");
  const double im = 0.5 * std::sqrt(disc);
  const double re = -0.5 * beta;
  return {cplx{r, 0.0}, cplx{re, -im}, cplx{re, im}};
}

EigenTriple exact_eigenvalues(const ModelParams& params, double xi_mag) {
  const auto roots = cubic_roots(characteristic_coeffs(params, xi_mag));
  EigenTriple out;
  if (xi_mag > params.n_zone) {
    out.lambda = {roots[2], roots[1], roots[0]};
    out.tag = BranchTag::large_matched;
  } else {
    out.lambda = roots;
    out.tag = xi_mag < params.eps_zone ? BranchTag::small_matched : BranchTag::continued;
  }
  return out;
}

std::vector<EigenTriple> track_branches(const ModelParams& params, std::span<const double> xi_ascending) {
  std::vector<EigenTriple> out;
  out.reserve(xi_ascending.size());
  std::array<cplx, 3> prev = {cplx{0.0, 0.0}, cplx{-0.5, -0.5 * kSqrt3}, cplx{-0.5, 0.5 * kSqrt3}};
  double prev_xi = 0.0;
  std::array<int, 3> perm{};
  for (double xi : xi_ascending) {
    if (xi < prev_xi) throw_invalid("track_branches: xi grid must be ascending");
    prev_xi = xi;
    const auto roots = cubic_roots(characteristic_coeffs(params, xi));
    std::array<int, 3> idx = {0, 1, 2};
    double best = std::numeric_limits<double>::infinity();
    do {
      double cost = 0.0;
      for (int j = 0; j < 3; ++j) cost += std::abs(roots[idx[j]] - prev[j]);
      if (cost < best) {
        best = cost;
        perm = idx;
      }
    } while (std::next_permutation(idx.begin(), idx.end()));
    EigenTriple e;
    for (int j = 0; j < 3; ++j) e.lambda[j] = roots[perm[j]];
    e.tag = xi < params.eps_zone ? BranchTag::small_matched : BranchTag::continued;
    prev = e.lambda;
    out.push_back(e);
  }
  return out;
}

EigenTriple asymptotic_eigenvalues_small(const ModelParams& params, double xi_mag) {
  const double a = symbol_power(params, xi_mag);
  const double a2 = a * a;
  EigenTriple out;
  out.lambda[0] = cplx{-a2, 0.0};
  out.lambda[1] = -cplx{0.5, 0.5 * kSqrt3} + cplx{0.5, -kSqrt3 / 6.0} * a2;
  out.lambda[2] = -cplx{0.5, -0.5 * kSqrt3} + cplx{0.5, kSqrt3 / 6.0} * a2;
  out.tag = BranchTag::small_matched;
  return out;
}

EigenTriple asymptotic_eigenvalues_large(const ModelParams& params, double xi_mag) {
  if (!(xi_mag > 0.0)) throw_invalid("asymptotic_eigenvalues_large: xi_mag must be > 0");
  const double a = symbol_power(params, xi_mag);
  const double inv = 1.0 / a;
  EigenTriple out;
  out.lambda[0] = kI * a + 0.5 * kI * inv - 0.5 * inv * inv;
  out.lambda[1] = -kI * a - 0.5 * kI * inv - 0.5 * inv * inv;
  out.lambda[2] = cplx{-1.0 + inv * inv, 0.0};
  out.tag = BranchTag::large_matched;
  return out;
}

namespace transforms {

Mat3 n1() {
  Mat3 m;
  m << -1.0, cplx(-1.0, kSqrt3) / 2.0, -cplx(1.0, kSqrt3) / 2.0,
       1.0, cplx(-1.0, kSqrt3) / 2.0, -cplx(1.0, kSqrt3) / 2.0,
       0.0, 1.0, 1.0;
  return m;
}

Mat3 n2(double a) {
  const cplx one_p = cplx(1.0, kSqrt3);   // 1 + i sqrt3
  const cplx one_m = cplx(1.0, -kSqrt3);  // 1 - i sqrt3
  Mat3 m;
  m << 0.0, -cplx(kSqrt3, 1.0) / one_p, cplx(-kSqrt3, 1.0) / cplx(-1.0, kSqrt3),
       -2.0 * kSqrt3 / (3.0 * one_p), 0.0, 0.0,
       2.0 * kSqrt3 / (3.0 * one_m), 0.0, 0.0;
  return a * m;
}

Mat3 n3(double a) {
  Mat3 m = Mat3::Zero();
  m(1, 2) = cplx(-1.0, kSqrt3) / 6.0;
  m(2, 1) = -cplx(1.0, kSqrt3) / 6.0;
  return (a * a) * m;
}

Mat3 n4(double a) {
  Mat3 m;
  m << 0.0, 0.0, kI,
       0.0, 0.0, -kI,
       0.5 * kI, -0.5 * kI, 0.0;
  return m / a;
}

Mat3 n5(double a) {
  Mat3 m;
  m << 0.0, 0.25, -1.0,
       0.25, 0.0, -1.0,
       -0.5, -0.5, 0.0;
  return m / (a * a);
}

Mat3 n6(double a) {
  Mat3 m;
  m << 0.0, 0.25 * kI, -kI,
       -0.25 * kI, 0.0, kI,
       -0.5 * kI, 0.5 * kI, 0.0;
  return m / (a * a * a);
}

}  // namespace transforms

namespace {

Diagonalizer finish_diagonalizer(const Mat3& t, Zone zone) {
  Eigen::FullPivLU<Mat3> lu(t);
  const double scale = t.cwiseAbs().maxCoeff();
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-13 * scale * scale * scale)
    throw_numeric("diagonalizer: transform is singular at this frequency");
  return Diagonalizer{t, lu.inverse(), zone};
}

}  // namespace

Diagonalizer diagonalizer_small(const ModelParams& params, double xi_mag) {
  const double a = symbol_power(params, xi_mag);
  const Mat3 id = Mat3::Identity();
  const Mat3 t = transforms::n1() * (id + transforms::n2(a)) * (id + transforms::n3(a));
  return finish_diagonalizer(t, Zone::small);
}

Diagonalizer diagonalizer_large(const ModelParams& params, double xi_mag) {
  if (!(xi_mag > 0.0)) throw_invalid("diagonalizer_large: xi_mag must be > 0");
  const double a = symbol_power(params, xi_mag);
  const Mat3 id = Mat3::Identity();
  const Mat3 t = (id + transforms::n4(a)) * (id + transforms::n5(a)) * (id + transforms::n6(a));
  return finish_diagonalizer(t, Zone::large);
}

double diagonalization_residual(const ModelParams& params, double xi_mag, const Diagonalizer& d) {
  const Mat3 conj = d.inverse * system_matrix(params, xi_mag) * d.transform;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) worst = std::max(worst, std::abs(conj(i, j)));
  return worst;
}

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double f = std::exp(-1.0 / x);
  const double g = std::exp(-1.0 / (1.0 - x));
  return f / (f + g);
}

ZoneCutoffs zone_cutoffs(const ModelParams& params, double xi_mag) {
  if (!(xi_mag >= 0.0)) throw_invalid("zone_cutoffs: xi_mag must be >= 0");
  const double half_eps = 0.5 * params.eps_zone;
  ZoneCutoffs z;
  z.chi_int = 1.0 - smooth_step((xi_mag - half_eps) / half_eps);
  z.chi_ext = smooth_step((xi_mag - params.n_zone) / params.n_zone);
  z.chi_mid = 1.0 - z.chi_int - z.chi_ext;
  return z;
}

MiddleGap measure_middle_gap(const ModelParams& params, int samples) {
  if (samples < 2) throw_invalid("measure_middle_gap: need at least two samples");
  MiddleGap gap{std::numeric_limits<double>::infinity(), params.eps_zone};
  const double lo = std::log(params.eps_zone), hi = std::log(params.n_zone);
  for (int k = 0; k < samples; ++k) {
    const double xi = std::exp(lo + (hi - lo) * k / (samples - 1));
    const auto e = exact_eigenvalues(params, xi);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& l : e.lambda) worst = std::max(worst, l.real());
    if (-worst < gap.c_mid) {
      gap.c_mid = -worst;
      gap.xi_argmax = xi;
    }
  }
  return gap;
}

}  // namespace sigmaevo
