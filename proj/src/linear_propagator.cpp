#include "sigmaevo/linear_propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <unsupported/Eigen/MatrixFunctions>

#include "sigmaevo/csv_writer.hpp"
#include "sigmaevo/errors.hpp"
#include "sigmaevo/phi_functions.hpp"
#include "sigmaevo/spectral_symbol.hpp"

namespace sigmaevo {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kInvFactorial[] = {1.0, 1.0, 0.5, 1.0 / 6.0};

Vec3 cross(const Eigen::RowVector3cd& a, const Eigen::RowVector3cd& b) {
  return Vec3(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
}

Vec3 null_vector(const Mat3& m) {
  Vec3 best = cross(m.row(0), m.row(1));
  for (const auto& cand : {cross(m.row(0), m.row(2)), cross(m.row(1), m.row(2))})
    if (cand.norm() > best.norm()) best = cand;
  const double nrm = best.norm();
  if (nrm == 0.0) throw_numeric("eigenvector construction failed: rank of A - lambda I below 2");
  return best / nrm;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x)) throw_invalid(std::string(what) + ": non-finite input");
}

}  // namespace

double ModeState::norm3() const {
  return std::sqrt(std::norm(u_plus) + std::norm(u_minus) + std::norm(w));
}

Mat4 augmented_matrix(const ModelParams& params, double xi_mag) {
  Mat4 b = Mat4::Zero();
  b.topLeftCorner<3, 3>() = system_matrix(params, xi_mag);
  b(3, 0) = 0.5;
  b(3, 1) = 0.5;
  return b;
}

ModeEigensystem::ModeEigensystem(const ModelParams& params, double xi_mag) : params_(params), xi_(xi_mag) {
  lambda_ = cubic_roots(characteristic_coeffs(params, xi_mag));
  const Mat3 a = system_matrix(params, xi_mag);
  for (int j = 0; j < 3; ++j) v_.col(j) = null_vector(a - lambda_[j] * Mat3::Identity());
  vinv_ = v_.inverse();
  min_sep_ = std::min({std::abs(lambda_[0] - lambda_[1]), std::abs(lambda_[0] - lambda_[2]),
                       std::abs(lambda_[1] - lambda_[2])});
}

double ModeEigensystem::max_real_part() const {
  return std::max({lambda_[0].real(), lambda_[1].real(), lambda_[2].real()});
}

Vec4 ModeEigensystem::apply_phi(int k, double h, const Vec4& y) const {
  const Vec3 c = vinv_ * y.head<3>();
  Vec3 top_diag, off_diag;
  for (int j = 0; j < 3; ++j) {
    const cplx z = lambda_[j] * h;
    top_diag(j) = phi(k, z) * c(j);
    // (phi_k(lambda h) - phi_k(0)) / lambda
    off_diag(j) = h * phi(k + 1, z) * c(j);
  }
  const Vec3 top = v_ * top_diag;
  const Vec3 mid = v_ * off_diag;
  Vec4 out;
  out.head<3>() = top;
  out(3) = 0.5 * (mid(0) + mid(1)) + kInvFactorial[k] * y(3);
  return out;
}

Vec3 ModeEigensystem::propagate_scaled(double t, const Vec3& y, double& log_scale) const {
  const double mu = max_real_part();
  const Vec3 c = vinv_ * y;
  Vec3 d;
  for (int j = 0; j < 3; ++j) d(j) = std::exp((lambda_[j] - mu) * t) * c(j);
  log_scale = mu * t;
  return v_ * d;
}

Mat4 phi_matrix_expm(const ModelParams& params, double xi_mag, int k, double h) {
  if (k < 0 || k > 2) throw_invalid("phi_matrix_expm: order must be in [0,2]");
  const int n = 4 * (k + 1);
  Eigen::MatrixXcd big = Eigen::MatrixXcd::Zero(n, n);
  big.topLeftCorner<4, 4>() = augmented_matrix(params, xi_mag) * h;
  for (int j = 0; j < k; ++j) big.block<4, 4>(4 * j, 4 * (j + 1)) = Mat4::Identity();
  const Eigen::MatrixXcd e = big.exp();
  return e.block<4, 4>(0, 4 * k);
}

ModeState initial_state_from_u1(cplx u1_hat, double /*xi_mag*/) { return {u1_hat, u1_hat, 0.0, 0.0}; }

ModeState propagate_mode(const ModelParams& params, double xi_mag, const ModeState& state0, double t,
                         PropagationMethod method) {
  if (!(t >= 0.0)) throw_invalid("propagate_mode: t must be >= 0");
  if (t == 0.0) return state0;
  if (method != PropagationMethod::matrix_exponential) {
    const ModeEigensystem sys(params, xi_mag);
    if (method == PropagationMethod::eigen || !sys.defective())
      return ModeState::from_vector(sys.apply_phi(0, t, state0.as_vector()));
  }
  return ModeState::from_vector(phi_matrix_expm(params, xi_mag, 0, t) * state0.as_vector());
}

ScalarTriple reconstruct_scalars(const ModeState& s, double /*xi_mag*/) {
  return {s.u_hat, (s.u_plus - s.u_minus) / (2.0 * kI), 0.5 * (s.u_plus + s.u_minus)};
}

ModeState fundamental_mode(const ModelParams& params, double xi_mag, double t) {
  return propagate_mode(params, xi_mag, initial_state_from_u1(1.0, xi_mag), t);
}

std::vector<std::string> grid_resolution_warnings(const ModelParams& params, const SpectralGrid& grid) {
  std::vector<std::string> out;
  const double dk = grid.dxi();
  const int half = grid.spec().points / 2;
  int below = 0, above = 0;
  for (int k = 1; k <= half; ++k) {
    const double xi = k * dk;
    if (xi < params.eps_zone) ++below;
    if (xi > params.n_zone) ++above;
  }
  if (below < 4)
    out.push_back("grid resolves only " + std::to_string(below) + " frequencies below eps_zone (need 4); increase L");
  if (above < 4)
    out.push_back("grid resolves only " + std::to_string(above) +
                  " frequencies above n_zone below Nyquist (need 4); increase M/L");
  return out;
}

EvolveResult evolve_field(const ModelParams& params, const SpectralGrid& grid, std::span<const double> u1,
                          std::span<const double> times, const EvolveOptions& options) {
  if (u1.size() != grid.size()) throw_invalid("evolve_field: data size does not match grid");
  require_finite(u1, "evolve_field");
  const auto u1_hat = grid.forward(u1);
  return evolve_field_hat(params, grid, u1_hat, times, options);
}

EvolveResult evolve_field_hat(const ModelParams& params, const SpectralGrid& grid, std::span<const cplx> u1_hat,
                              std::span<const double> times, const EvolveOptions& options) {
  params.validate();
  if (u1_hat.size() != grid.size()) throw_invalid("evolve_field: data size does not match grid");
  for (const auto& c : u1_hat)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw_invalid("evolve_field: non-finite input");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw_invalid("evolve_field: times must be >= 0");
    if (i && times[i] < times[i - 1]) throw_invalid("evolve_field: times must be sorted ascending");
  }

  EvolveResult result;
  result.warnings = grid_resolution_warnings(params, grid);
  const std::size_t size = grid.size();
  result.snapshots.resize(times.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    auto& snap = result.snapshots[ti];
    snap.time = times[ti];
    snap.grid = grid.spec();
    snap.u_hat.assign(size, 0.0);
    snap.ut_hat.assign(size, 0.0);
    snap.w_hat.assign(size, 0.0);
    snap.sigma_deriv_hat.assign(size, 0.0);
    if (options.keep_mode_vectors) snap.mode_vector.assign(size, Vec3::Zero());
  }

  const auto& xi = grid.xi_mag();
  for (std::size_t i = 0; i < size; ++i) {
    if (u1_hat[i] == cplx{}) continue;
    const Vec4 y0 = initial_state_from_u1(u1_hat[i], xi[i]).as_vector();
    bool use_expm = options.method == PropagationMethod::matrix_exponential;
    std::optional<ModeEigensystem> sys;
    if (!use_expm) {
      sys.emplace(params, xi[i]);
      use_expm = options.method == PropagationMethod::automatic && sys->defective();
    }
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      const double t = times[ti];
      Vec4 y;
      if (t == 0.0) y = y0;
      else if (use_expm) y = phi_matrix_expm(params, xi[i], 0, t) * y0;
      else y = sys->apply_phi(0, t, y0);
      const auto s = ModeState::from_vector(y);
      const auto sc = reconstruct_scalars(s, xi[i]);
      auto& snap = result.snapshots[ti];
      snap.u_hat[i] = sc.u_hat;
      snap.ut_hat[i] = sc.ut_hat;
      snap.sigma_deriv_hat[i] = sc.sigma_deriv_hat;
      snap.w_hat[i] = s.w;
      if (options.keep_mode_vectors) snap.mode_vector[i] = y.head<3>();
    }
  }
  return result;
}

std::string snapshot_fourier_csv(const SpectralGrid& grid, std::span<const FieldSnapshot> snapshots) {
  std::vector<std::string> header{"t"};
  for (int a = 0; a < grid.dim(); ++a) header.push_back("k_" + std::to_string(a));
  for (const char* c : {"re_u", "im_u", "re_ut", "im_ut"}) header.emplace_back(c);
  CsvWriter csv(header);
  for (const auto& snap : snapshots) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<CsvCell> row{snap.time};
      const auto k = grid.wave_numbers(i);
      for (int a = 0; a < grid.dim(); ++a) row.emplace_back(static_cast<long long>(k[a]));
      row.insert(row.end(), {snap.u_hat[i].real(), snap.u_hat[i].imag(), snap.ut_hat[i].real(),
                             snap.ut_hat[i].imag()});
      csv.add_row(row);
    }
  }
  return csv.str();
}

std::string snapshot_physical_csv(const SpectralGrid& grid, std::span<const FieldSnapshot> snapshots) {
  std::vector<std::string> header{"t"};
  for (int a = 0; a < grid.dim(); ++a) header.push_back("x_" + std::to_string(a));
  header.emplace_back("u");
  header.emplace_back("ut");
  CsvWriter csv(header);
  for (const auto& snap : snapshots) {
    const auto u = grid.inverse_real(snap.u_hat);
    const auto ut = grid.inverse_real(snap.ut_hat);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      std::vector<CsvCell> row{snap.time};
      const auto x = grid.coordinates(i);
      for (int a = 0; a < grid.dim(); ++a) row.emplace_back(x[a]);
      row.emplace_back(u[i]);
      row.emplace_back(ut[i]);
      csv.add_row(row);
    }
  }
  return csv.str();
}

}  // namespace sigmaevo
