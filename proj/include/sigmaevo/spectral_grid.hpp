#pragma once

// Periodic box [-L/2, L/2)^n sampled with M points per axis, used as a
// stand-in for R^n. Transforms are scaled to approximate the continuous
// Fourier transform:
//   u_hat(xi_k) = h^n sum_j u(x_j) exp(-i xi_k . x_j),   h = L / M,
//   u(x_j)      = L^-n sum_k u_hat(xi_k) exp(i xi_k . x_j),
// so that sum_j |u_j|^2 h^n = L^-n sum_k |u_hat_k|^2 exactly.

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace sigmaevo {

using cplx = std::complex<double>;

struct GridSpec {
  int dim = 1;
  double extent = 200.0;  // L
  int points = 2048;      // M, even

  std::size_t size() const;
  void validate() const;
};

class SpectralGrid {
 public:
  explicit SpectralGrid(const GridSpec& spec);

  const GridSpec& spec() const noexcept { return spec_; }
  int dim() const noexcept { return spec_.dim; }
  std::size_t size() const noexcept { return size_; }
  double spacing() const noexcept { return spec_.extent / spec_.points; }
  double cell_volume() const noexcept;
  /// 2 pi / L: the spacing of the frequency lattice.
  double dxi() const noexcept;
  /// pi M / L.
  double nyquist() const noexcept;

  /// Signed wave number along each axis for flat index idx (row-major, last axis fastest).
  std::array<int, 3> wave_numbers(std::size_t idx) const;
  std::array<double, 3> coordinates(std::size_t idx) const;
  double radius(std::size_t idx) const;
  /// |xi| for every flat index, precomputed.
  const std::vector<double>& xi_mag() const noexcept { return xi_mag_; }
  /// Index of the mode at -k.
  std::size_t mirror_index(std::size_t idx) const;
  /// Largest |k_a| over the axes for flat index idx.
  int max_abs_wave_number(std::size_t idx) const;

  std::vector<cplx> forward(std::span<const double> values) const;
  std::vector<cplx> forward(std::span<const cplx> values) const;
  std::vector<cplx> inverse(std::span<const cplx> coeffs) const;
  /// Inverse transform followed by taking the real part after symmetrising the
  /// coefficients (c_k + conj(c_-k)) / 2.
  std::vector<double> inverse_real(std::span<const cplx> coeffs) const;

 private:
  struct Plans;
  GridSpec spec_;
  std::size_t size_ = 0;
  std::vector<double> xi_mag_;
  std::vector<double> sign_;  // (-1)^(sum k_a)
  std::shared_ptr<Plans> plans_;
};

}  // namespace sigmaevo
