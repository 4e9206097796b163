#pragma once

#include <complex>

namespace sigmaevo {

/// phi_0(z) = e^z and phi_{k+1}(z) = (phi_k(z) - 1/k!) / z, evaluated without
/// cancellation near z = 0. Valid for k in [0, 3].
std::complex<double> phi(int k, std::complex<double> z);

}  // namespace sigmaevo
