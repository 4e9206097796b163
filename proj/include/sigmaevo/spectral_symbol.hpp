#pragma once

// Per-frequency symbol of the first-order system U_t = (A0 |xi|^sigma + A1) U
// obtained from the ansatz U = (u_t + i|D|^sigma u, u_t - i|D|^sigma u, g*u - u):
// exact eigenvalues, their small/large frequency expansions, the explicit
// diagonalizers, and the smooth zone partition.

#include <array>
#include <span>
#include <vector>

#include "sigmaevo/model.hpp"

namespace sigmaevo {

enum class BranchTag { small_matched, large_matched, continued };
enum class Zone { small, large };

const char* to_string(BranchTag tag) noexcept;

struct EigenTriple {
  std::array<cplx, 3> lambda{};
  BranchTag tag = BranchTag::continued;
};

/// Monic cubic c3 l^3 + c2 l^2 + c1 l + c0 with c3 = 1.
struct CubicCoeffs {
  double c3 = 1.0, c2 = 1.0, c1 = 1.0, c0 = 0.0;
};

struct Diagonalizer {
  Mat3 transform;
  Mat3 inverse;
  Zone zone = Zone::small;
};

struct ZoneCutoffs {
  double chi_int = 1.0, chi_mid = 0.0, chi_ext = 0.0;
};

/// A0 * xi^sigma + A1 with A0 = diag(i, -i, 0), A1 = [[0,0,1],[0,0,1],[-1/2,-1/2,-1]].
Mat3 system_matrix(const ModelParams& params, double xi_mag);

/// (1, 1, 1 + a^2, a^2) with a = xi^sigma; the characteristic polynomial of
/// system_matrix, i.e. the mode-wise symbol of the third-order equation
/// E_ttt + E_tt + (-Delta)^sigma E_t + E_t + (-Delta)^sigma E = 0.
CubicCoeffs characteristic_coeffs(const ModelParams& params, double xi_mag);

/// Roots of a monic real cubic with exactly one real root, returned as
/// {real root, root with Im < 0, root with Im > 0}. The real root comes from a
/// companion-matrix eigensolve followed by Newton polishing; the complex pair
/// from deflation, so trace and determinant identities hold to rounding.
std::array<cplx, 3> cubic_roots(const CubicCoeffs& coeffs);

/// Exact eigenvalues labelled per zone: below eps_zone and in the middle zone
/// branch 1 is the real root (the continuation of the root at 0), branch 2 has
/// Im < 0, branch 3 has Im > 0. Above n_zone branches 1/2 are the oscillatory
/// pair with Im(lambda_1) > 0 and branch 3 is the real root near -1.
EigenTriple exact_eigenvalues(const ModelParams& params, double xi_mag);

/// Nearest-neighbour continuation of the three branches along an ascending
/// xi grid, anchored at the xi = 0 roots {0, -(1+i sqrt3)/2, -(1-i sqrt3)/2}.
/// Labels are never switched, so for xi > n_zone they differ from the
/// large-zone labels of exact_eigenvalues by the permutation (1 2 3) -> (3 2 1).
std::vector<EigenTriple> track_branches(const ModelParams& params, std::span<const double> xi_ascending);

EigenTriple asymptotic_eigenvalues_small(const ModelParams& params, double xi_mag);
/// Throws for xi_mag <= 0.
EigenTriple asymptotic_eigenvalues_large(const ModelParams& params, double xi_mag);

namespace transforms {
Mat3 n1();
Mat3 n2(double a);  // a = |xi|^sigma
Mat3 n3(double a);
Mat3 n4(double a);
Mat3 n5(double a);
Mat3 n6(double a);
}  // namespace transforms

/// T_int = N1 (I + N2)(I + N3) and its inverse.
Diagonalizer diagonalizer_small(const ModelParams& params, double xi_mag);
/// T_ext = (I + N4)(I + N5)(I + N6) and its inverse; xi_mag must be > 0.
Diagonalizer diagonalizer_large(const ModelParams& params, double xi_mag);

/// Largest off-diagonal modulus of T^{-1} (A0 xi^sigma + A1) T.
double diagonalization_residual(const ModelParams& params, double xi_mag, const Diagonalizer& d);

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, glued from exp(-1/x).
double smooth_step(double x);

/// Smooth partition of unity: chi_int supported in |xi| < eps, chi_ext in
/// |xi| > N, chi_mid in [eps/2, 2N].
ZoneCutoffs zone_cutoffs(const ModelParams& params, double xi_mag);

struct MiddleGap {
  double c_mid = 0.0;     // -max_j Re lambda_j over [eps_zone, n_zone]
  double xi_argmax = 0.0;
};

MiddleGap measure_middle_gap(const ModelParams& params, int samples = 2000);

}  // namespace sigmaevo
