#include "sigmaevo/semilinear_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sigmaevo/decay_lab.hpp"
#include "sigmaevo/errors.hpp"
#include "sigmaevo/spectral_symbol.hpp"

namespace sigmaevo {

namespace {

const Vec4 kForcingDirection(1.0, 1.0, 0.0, 0.0);

bool finite(const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

double sup_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

}  // namespace

std::vector<double> nonlinearity(std::span<const double> u, double p) {
  if (!(p > 1.0)) throw_invalid("nonlinearity: p must be > 1");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::pow(std::abs(u[i]), p);
  return out;
}

void apply_dealias(const SpectralGrid& grid, std::span<cplx> coeffs, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw_invalid("dealias fraction must be in (0,1]");
  if (coeffs.size() != grid.size()) throw_invalid("apply_dealias: size mismatch");
  const double cutoff = fraction * grid.spec().points / 2.0;
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (grid.max_abs_wave_number(i) > cutoff) coeffs[i] = 0.0;
}

std::vector<double> gaussian_profile(const SpectralGrid& grid, double width) {
  if (!(width > 0.0)) throw_invalid("gaussian_profile: width must be > 0");
  std::vector<double> out(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.radius(i);
    out[i] = std::exp(-0.5 * r * r / (width * width));
  }
  return out;
}

SemilinearState initial_semilinear_state(const SpectralGrid& grid, std::span<const double> u1) {
  if (u1.size() != grid.size()) throw_invalid("initial state: data size does not match grid");
  const auto u1_hat = grid.forward(u1);
  SemilinearState st;
  st.y.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) st.y[i] = Vec4(u1_hat[i], u1_hat[i], 0.0, 0.0);
  return st;
}

EtdStepper::EtdStepper(const ModelParams& params, const SpectralGrid& grid, double dt, double dealias_fraction,
                       bool nonlinear)
    : params_(params), grid_(&grid), dt_(dt), dealias_(dealias_fraction), nonlinear_(nonlinear) {
  if (!(dt > 0.0)) throw_invalid("EtdStepper: dt must be > 0");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) throw_invalid("dealias fraction must be in (0,1]");
  coeffs_.resize(grid.size());
  const auto& xi = grid.xi_mag();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto& c = coeffs_[i];
    const ModeEigensystem sys(params, xi[i]);
    if (sys.defective()) {
      c.expm = phi_matrix_expm(params, xi[i], 0, dt);
      c.q1 = dt * (phi_matrix_expm(params, xi[i], 1, dt) * kForcingDirection);
      c.q2 = dt * (phi_matrix_expm(params, xi[i], 2, dt) * kForcingDirection);
      continue;
    }
    for (int j = 0; j < 4; ++j) c.expm.col(j) = sys.apply_phi(0, dt, Vec4::Unit(j));
    c.q1 = dt * sys.apply_phi(1, dt, kForcingDirection);
    c.q2 = dt * sys.apply_phi(2, dt, kForcingDirection);
  }
}

std::vector<double> EtdStepper::physical_u(const SemilinearState& state) const {
  std::vector<cplx> uh(state.y.size());
  for (std::size_t i = 0; i < uh.size(); ++i) uh[i] = state.y[i](3);
  return grid_->inverse_real(uh);
}

bool EtdStepper::forcing(const SemilinearState& state, double t, std::vector<cplx>& out) const {
  if (nonlinear_) {
    const auto u = physical_u(state);
    const auto f = nonlinearity(u, params_.p);
    for (double v : f)
      if (!std::isfinite(v)) return false;
    out = grid_->forward(f);
    apply_dealias(*grid_, out, dealias_);
  } else {
    out.assign(grid_->size(), 0.0);
  }
  if (source_) source_(t, out);
  for (const auto& c : out)
    if (!finite(c)) return false;
  return true;
}

bool EtdStepper::step(SemilinearState& state) const {
  const std::size_t size = coeffs_.size();
  if (state.y.size() != size) throw_invalid("EtdStepper: state size does not match grid");
  std::vector<cplx> n0, n1;
  if (!forcing(state, state.t, n0)) return false;
  SemilinearState a;
  a.t = state.t + dt_;
  a.y.resize(size);
  for (std::size_t i = 0; i < size; ++i) a.y[i] = coeffs_[i].expm * state.y[i] + coeffs_[i].q1 * n0[i];
  if (!forcing(a, a.t, n1)) return false;
  for (std::size_t i = 0; i < size; ++i) {
    a.y[i] += coeffs_[i].q2 * (n1[i] - n0[i]);
    for (int j = 0; j < 4; ++j)
      if (!finite(a.y[i](j))) return false;
  }
  state = std::move(a);
  return true;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::global_decay: return "global-decay";
    case Verdict::blowup_detected: return "blow-up-detected";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double max_mode_rate(const ModelParams& params, const SpectralGrid& grid) {
  const double xi_max = grid.nyquist() * std::sqrt(static_cast<double>(grid.dim()));
  double out = 0.0;
  for (const auto& l : cubic_roots(characteristic_coeffs(params, xi_max))) out = std::max(out, std::abs(l));
  return out;
}

SemilinearRun run_experiment(const SemilinearConfig& config, std::span<const double> u1_shape) {
  config.params.validate();
  const SpectralGrid grid(config.grid);
  if (!(config.amplitude >= 0.0)) throw_invalid("amplitude must be >= 0");
  if (!(config.dt > 0.0)) throw_invalid("dt must be > 0");
  if (!(config.t_final > 0.0)) throw_invalid("t_final must be > 0");
  if (!(config.blowup_threshold > 0.0)) throw_invalid("blowup_threshold must be > 0");
  if (!(config.c_stab > 0.0)) throw_invalid("c_stab must be > 0");
  const double rate = max_mode_rate(config.params, grid);
  if (config.dt > config.c_stab / rate)
    throw Error(ErrorKind::config, "dt = " + std::to_string(config.dt) + " fails the stability screen dt <= c_stab / max|lambda| = " +
                                       std::to_string(config.c_stab / rate));

  SemilinearRun run;
  run.config = config;
  run.warnings = grid_resolution_warnings(config.params, grid);

  std::vector<double> u1 = u1_shape.empty() ? gaussian_profile(grid, config.data_width)
                                            : std::vector<double>(u1_shape.begin(), u1_shape.end());
  if (u1.size() != grid.size()) throw_invalid("data profile size does not match grid");
  for (double& v : u1) v *= config.amplitude;

  const EtdStepper stepper(config.params, grid, config.dt, config.dealias_fraction);
  SemilinearState state = initial_semilinear_state(grid, u1);
  const long long nsteps = std::llround(config.t_final / config.dt);
  std::set<long long> snap_steps;
  for (double t : config.snapshot_times) {
    if (!(t >= 0.0)) throw_invalid("snapshot_times must be >= 0");
    snap_steps.insert(std::clamp<long long>(std::llround(t / config.dt), 0, nsteps));
  }

  auto record = [&](const std::vector<double>& u) {
    FieldSnapshot snap;
    snap.time = state.t;
    snap.grid = config.grid;
    const std::size_t size = grid.size();
    snap.u_hat.resize(size);
    snap.ut_hat.resize(size);
    snap.w_hat.resize(size);
    snap.sigma_deriv_hat.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
      const auto s = reconstruct_scalars(ModeState::from_vector(state.y[i]), grid.xi_mag()[i]);
      snap.u_hat[i] = s.u_hat;
      snap.ut_hat[i] = s.ut_hat;
      snap.sigma_deriv_hat[i] = s.sigma_deriv_hat;
      snap.w_hat[i] = state.y[i](2);
    }
    const auto full = grid.inverse(snap.u_hat);
    double im = 0.0, re = 0.0;
    for (const auto& c : full) {
      im = std::max(im, std::abs(c.imag()));
      re = std::max(re, std::abs(c.real()));
    }
    if (re > 0.0) run.max_imag_residue = std::max(run.max_imag_residue, im / re);
    run.norms.push_back({state.t, sobolev_norm(grid, snap.u_hat, 0.0, true),
                         sobolev_norm(grid, snap.u_hat, config.sobolev_s, true), sup_abs(u)});
    run.snapshots.push_back(std::move(snap));
  };

  bool blew_up = false;
  for (long long k = 0;; ++k) {
    const auto u = stepper.physical_u(state);
    const double sup = sup_abs(u);
    if (!(sup <= config.blowup_threshold)) {
      blew_up = true;
      run.blowup_time = state.t;
      break;
    }
    if (snap_steps.count(k)) record(u);
    if (k == nsteps) break;
    if (!stepper.step(state)) {
      blew_up = true;
      run.blowup_time = state.t + config.dt;
      break;
    }
    run.steps = k + 1;
  }

  if (blew_up) {
    run.verdict = Verdict::blowup_detected;
  } else {
    double peak = 0.0;
    for (const auto& r : run.norms) peak = std::max(peak, r.l2);
    const bool growing = run.norms.size() >= 2 && peak > 0.0 && run.norms.back().l2 >= peak;
    run.verdict = growing ? Verdict::inconclusive : Verdict::global_decay;
  }
  return run;
}

}  // namespace sigmaevo
