#include "sigmaevo/spectral_grid.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "sigmaevo/errors.hpp"

namespace sigmaevo {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(points);
  return s;
}

void GridSpec::validate() const {
  if (dim < 1 || dim > 3) throw_invalid("grid: dimension must be 1, 2 or 3");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw_invalid("grid: L must be positive");
  if (points < 4 || points % 2 != 0) throw_invalid("grid: M must be even and >= 4");
}

struct SpectralGrid::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

SpectralGrid::SpectralGrid(const GridSpec& spec) : spec_(spec) {
  spec_.validate();
  size_ = spec_.size();
  xi_mag_.resize(size_);
  sign_.resize(size_);
  const double dk = dxi();
  for (std::size_t i = 0; i < size_; ++i) {
    const auto k = wave_numbers(i);
    double r2 = 0.0;
    int parity = 0;
    for (int a = 0; a < spec_.dim; ++a) {
      r2 += (k[a] * dk) * (k[a] * dk);
      parity += k[a];
    }
    xi_mag_[i] = std::sqrt(r2);
    sign_[i] = (parity % 2 == 0) ? 1.0 : -1.0;
  }

  std::vector<int> dims(spec_.dim, spec_.points);
  std::vector<cplx> scratch(size_);
  plans_ = std::make_shared<Plans>();
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plans_->fwd = fftw_plan_dft(spec_.dim, dims.data(), as_fftw(scratch.data()), as_fftw(scratch.data()),
                              FFTW_FORWARD, flags);
  plans_->bwd = fftw_plan_dft(spec_.dim, dims.data(), as_fftw(scratch.data()), as_fftw(scratch.data()),
                              FFTW_BACKWARD, flags);
  if (!plans_->fwd || !plans_->bwd) throw Error(ErrorKind::internal, "grid: FFTW planning failed");
}

double SpectralGrid::cell_volume() const noexcept { return std::pow(spacing(), spec_.dim); }

double SpectralGrid::dxi() const noexcept { return 2.0 * std::numbers::pi / spec_.extent; }

double SpectralGrid::nyquist() const noexcept { return std::numbers::pi * spec_.points / spec_.extent; }

std::array<int, 3> SpectralGrid::wave_numbers(std::size_t idx) const {
  std::array<int, 3> k{0, 0, 0};
  const auto m = static_cast<std::size_t>(spec_.points);
  for (int a = spec_.dim - 1; a >= 0; --a) {
    const int j = static_cast<int>(idx % m);
    idx /= m;
    k[a] = j < spec_.points / 2 ? j : j - spec_.points;
  }
  return k;
}

std::array<double, 3> SpectralGrid::coordinates(std::size_t idx) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const auto m = static_cast<std::size_t>(spec_.points);
  const double h = spacing();
  for (int a = spec_.dim - 1; a >= 0; --a) {
    x[a] = -0.5 * spec_.extent + h * static_cast<double>(idx % m);
    idx /= m;
  }
  return x;
}

double SpectralGrid::radius(std::size_t idx) const {
  const auto x = coordinates(idx);
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

std::size_t SpectralGrid::mirror_index(std::size_t idx) const {
  const auto k = wave_numbers(idx);
  std::size_t out = 0;
  for (int a = 0; a < spec_.dim; ++a) {
    const int j = ((-k[a]) % spec_.points + spec_.points) % spec_.points;
    out = out * static_cast<std::size_t>(spec_.points) + static_cast<std::size_t>(j);
  }
  return out;
}

int SpectralGrid::max_abs_wave_number(std::size_t idx) const {
  const auto k = wave_numbers(idx);
  int out = 0;
  for (int a = 0; a < spec_.dim; ++a) out = std::max(out, std::abs(k[a]));
  return out;
}

std::vector<cplx> SpectralGrid::forward(std::span<const double> values) const {
  std::vector<cplx> tmp(values.begin(), values.end());
  return forward(std::span<const cplx>(tmp));
}

std::vector<cplx> SpectralGrid::forward(std::span<const cplx> values) const {
  if (values.size() != size_) throw_invalid("grid: forward transform size mismatch");
  std::vector<cplx> out(values.begin(), values.end());
  fftw_execute_dft(plans_->fwd, as_fftw(out.data()), as_fftw(out.data()));
  const double vol = cell_volume();
  for (std::size_t i = 0; i < size_; ++i) out[i] *= vol * sign_[i];
  return out;
}

std::vector<cplx> SpectralGrid::inverse(std::span<const cplx> coeffs) const {
  if (coeffs.size() != size_) throw_invalid("grid: inverse transform size mismatch");
  std::vector<cplx> out(size_);
  const double scale = 1.0 / std::pow(spec_.extent, spec_.dim);
  for (std::size_t i = 0; i < size_; ++i) out[i] = coeffs[i] * (scale * sign_[i]);
  fftw_execute_dft(plans_->bwd, as_fftw(out.data()), as_fftw(out.data()));
  return out;
}

std::vector<double> SpectralGrid::inverse_real(std::span<const cplx> coeffs) const {
  if (coeffs.size() != size_) throw_invalid("grid: inverse transform size mismatch");
  std::vector<cplx> sym(size_);
  for (std::size_t i = 0; i < size_; ++i) sym[i] = 0.5 * (coeffs[i] + std::conj(coeffs[mirror_index(i)]));
  const auto full = inverse(sym);
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = full[i].real();
  return out;
}

}  // namespace sigmaevo
