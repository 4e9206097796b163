#pragma once

// Pseudo-spectral integration of u_tt + (-Delta)^sigma u + u - g*u = |u|^p on
// the periodic box. The linear part, including the memory term, is propagated
// exactly per mode on the augmented 4-vector (U1, U2, U3, u_hat); |u|^p is
// added through a second-order exponential Runge-Kutta step (Cox-Matthews):
//   a      = e^{Bh} y + h phi1(Bh) f N(y)
//   y_next = a + h phi2(Bh) f (N(a) - N(y)),   f = (1, 1, 0, 0).

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigmaevo/linear_propagator.hpp"
#include "sigmaevo/model.hpp"
#include "sigmaevo/spectral_grid.hpp"

namespace sigmaevo {

/// Pointwise |u|^p. Overflow yields inf, which the stepper reports as blow-up.
std::vector<double> nonlinearity(std::span<const double> u, double p);

/// Zeroes every mode with max_a |k_a| > fraction * M / 2.
void apply_dealias(const SpectralGrid& grid, std::span<cplx> coeffs, double fraction);

/// exp(-|x|^2 / (2 width^2)) on the grid.
std::vector<double> gaussian_profile(const SpectralGrid& grid, double width);

struct SemilinearState {
  double t = 0.0;
  std::vector<Vec4> y;  // (u_plus, u_minus, w, u_hat) per mode
};

SemilinearState initial_semilinear_state(const SpectralGrid& grid, std::span<const double> u1);

/// Extra forcing added to the u_tt equation in Fourier space: source(t, out)
/// must add into out (size grid.size()).
using SourceHook = std::function<void(double t, std::vector<cplx>& out)>;

class EtdStepper {
 public:
  EtdStepper(const ModelParams& params, const SpectralGrid& grid, double dt, double dealias_fraction,
             bool nonlinear = true);

  double dt() const noexcept { return dt_; }
  void set_source(SourceHook hook) { source_ = std::move(hook); }

  /// Advances state by dt. Returns false, leaving the state untouched, when the
  /// nonlinear term or the new state is not finite.
  bool step(SemilinearState& state) const;
  /// Physical u of a state and its sup norm.
  std::vector<double> physical_u(const SemilinearState& state) const;

 private:
  struct ModeCoeffs {
    Mat4 expm;
    Vec4 q1, q2;  // h phi_k(Bh) f
  };
  bool forcing(const SemilinearState& state, double t, std::vector<cplx>& out) const;

  ModelParams params_;
  const SpectralGrid* grid_;
  double dt_;
  double dealias_;
  bool nonlinear_;
  std::vector<ModeCoeffs> coeffs_;
  SourceHook source_;
};

enum class Verdict { global_decay, blowup_detected, inconclusive };
const char* to_string(Verdict v) noexcept;

struct SemilinearConfig {
  ModelParams params;
  GridSpec grid;
  double amplitude = 1e-3;
  double data_width = 1.0;
  double dt = 0.05;
  double t_final = 1e3;
  double dealias_fraction = 2.0 / 3.0;
  double blowup_threshold = 1e6;
  double c_stab = 4.0;
  double sobolev_s = 1.0;
  std::vector<double> snapshot_times;
};

struct NormRecord {
  double t = 0.0;
  double l2 = 0.0;
  double hs = 0.0;
  double sup = 0.0;
};

struct SemilinearRun {
  SemilinearConfig config;
  std::vector<FieldSnapshot> snapshots;
  std::vector<NormRecord> norms;
  Verdict verdict = Verdict::inconclusive;
  std::optional<double> blowup_time;
  long long steps = 0;
  double max_imag_residue = 0.0;  // relative imaginary part of u after inverse transform
  std::vector<std::string> warnings;
};

/// Largest |lambda| over the grid frequencies; dt must satisfy dt <= c_stab / this.
double max_mode_rate(const ModelParams& params, const SpectralGrid& grid);

/// Integrates u1 = amplitude * gaussian(data_width) (or the given profile when
/// u1_shape is non-empty, still scaled by amplitude) to t_final or blow-up.
/// Snapshots are taken at the steps closest to snapshot_times.
SemilinearRun run_experiment(const SemilinearConfig& config, std::span<const double> u1_shape = {});

}  // namespace sigmaevo
