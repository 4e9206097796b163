#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sigmaevo {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

/// Parameters of u_tt + (-Delta)^sigma u + u - g*u = |u|^p with g(t) = exp(-t),
/// together with the small/large frequency thresholds used for zone splitting.
struct ModelParams {
  double sigma = 1.0;      // order of the fractional Laplacian, >= 1
  int n = 1;               // space dimension
  double m = 1.0;          // integrability index of the data, in [1, 2)
  double p = 2.0;          // nonlinearity exponent, > 1
  double eps_zone = 0.1;   // |xi| < eps_zone is the small-frequency zone
  double n_zone = 10.0;    // |xi| > n_zone is the large-frequency zone

  /// Empty when all invariants hold; otherwise one message per violation.
  std::vector<std::string> violations() const;
  /// Throws Error(invalid_argument) listing every violation.
  void validate() const;
};

}  // namespace sigmaevo
