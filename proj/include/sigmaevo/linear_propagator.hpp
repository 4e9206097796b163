#pragma once

// Exact per-mode evolution of the linear problem
//   u_tt + (-Delta)^sigma u + u - g*u = 0,  u(0) = 0,  u_t(0) = u1,
// in the variables U = (u_t + i|D|^sigma u, u_t - i|D|^sigma u, g*u - u),
// augmented with u_hat itself through u_hat' = (U1 + U2) / 2 so that u is
// available at xi = 0.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sigmaevo/model.hpp"
#include "sigmaevo/spectral_grid.hpp"

namespace sigmaevo {

struct ModeState {
  cplx u_plus{};   // u_t + i|xi|^sigma u
  cplx u_minus{};  // u_t - i|xi|^sigma u
  cplx w{};        // (g*u)^ - u_hat
  cplx u_hat{};

  Vec4 as_vector() const { return Vec4(u_plus, u_minus, w, u_hat); }
  static ModeState from_vector(const Vec4& v) { return {v(0), v(1), v(2), v(3)}; }
  /// Euclidean norm of the 3-vector (u_plus, u_minus, w).
  double norm3() const;
};

enum class PropagationMethod { automatic, eigen, matrix_exponential };

/// Augmented 4x4 matrix [[A, 0], [r, 0]] with r = (1/2, 1/2, 0).
Mat4 augmented_matrix(const ModelParams& params, double xi_mag);

/// Eigendecomposition of the 3x3 mode matrix reused for every time and for the
/// phi-functions of the augmented matrix. Eigenvectors are null vectors of
/// A - lambda I built from row cross products, so they stay well defined at xi = 0.
class ModeEigensystem {
 public:
  ModeEigensystem(const ModelParams& params, double xi_mag);

  double xi_mag() const noexcept { return xi_; }
  const std::array<cplx, 3>& eigenvalues() const noexcept { return lambda_; }
  const Mat3& vectors() const noexcept { return v_; }
  const Mat3& inverse_vectors() const noexcept { return vinv_; }
  double min_separation() const noexcept { return min_sep_; }
  bool defective(double threshold = 1e-8) const noexcept { return min_sep_ < threshold; }
  double max_real_part() const;

  /// f(B h) y for the augmented matrix B, where f = phi_k (phi_0 = exp).
  Vec4 apply_phi(int k, double h, const Vec4& y) const;
  /// Same as apply_phi(0, t, y) restricted to the 3-vector, scaled by
  /// exp(-mu t) with mu = max Re lambda; returns mu t through log_scale.
  Vec3 propagate_scaled(double t, const Vec3& y, double& log_scale) const;

 private:
  ModelParams params_;
  double xi_;
  std::array<cplx, 3> lambda_{};
  Mat3 v_;
  Mat3 vinv_;
  double min_sep_ = 0.0;
};

/// phi_k(B h) by a block-matrix exponential (scaling and squaring); used when
/// the eigensystem is defective and as an independent check.
Mat4 phi_matrix_expm(const ModelParams& params, double xi_mag, int k, double h);

ModeState initial_state_from_u1(cplx u1_hat, double xi_mag);

ModeState propagate_mode(const ModelParams& params, double xi_mag, const ModeState& state0, double t,
                         PropagationMethod method = PropagationMethod::automatic);

struct ScalarTriple {
  cplx u_hat{};
  cplx sigma_deriv_hat{};  // |xi|^sigma u_hat
  cplx ut_hat{};
};

ScalarTriple reconstruct_scalars(const ModeState& state, double xi_mag);

/// Fundamental solution mode: propagate_mode from (1, 1, 0, 0).
ModeState fundamental_mode(const ModelParams& params, double xi_mag, double t);

struct FieldSnapshot {
  double time = 0.0;
  GridSpec grid;
  std::vector<cplx> u_hat;
  std::vector<cplx> ut_hat;
  std::vector<cplx> w_hat;
  /// |xi|^sigma u_hat, kept for the Riesz-potential norms.
  std::vector<cplx> sigma_deriv_hat;
  /// (u_plus, u_minus, w) per mode; filled when requested.
  std::vector<Vec3> mode_vector;
};

struct EvolveOptions {
  bool keep_mode_vectors = false;
  PropagationMethod method = PropagationMethod::automatic;
};

struct EvolveResult {
  std::vector<FieldSnapshot> snapshots;
  std::vector<std::string> warnings;
};

/// Checks that at least four lattice frequencies fall below eps_zone and four
/// between n_zone and the Nyquist frequency; returns the warnings.
std::vector<std::string> grid_resolution_warnings(const ModelParams& params, const SpectralGrid& grid);

EvolveResult evolve_field(const ModelParams& params, const SpectralGrid& grid, std::span<const double> u1,
                          std::span<const double> times, const EvolveOptions& options = {});

/// Same, starting from Fourier coefficients of u1.
EvolveResult evolve_field_hat(const ModelParams& params, const SpectralGrid& grid, std::span<const cplx> u1_hat,
                              std::span<const double> times, const EvolveOptions& options = {});

/// Rows t, k_0[, k_1, ...], re_u, im_u, re_ut, im_ut for every mode.
std::string snapshot_fourier_csv(const SpectralGrid& grid, std::span<const FieldSnapshot> snapshots);
/// Rows t, x_0[, x_1, ...], u, ut after inverse transform.
std::string snapshot_physical_csv(const SpectralGrid& grid, std::span<const FieldSnapshot> snapshots);

}  // namespace sigmaevo
