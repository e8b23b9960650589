#pragma once

// Thin wrappers over FFTW. Plans are created with FFTW_ESTIMATE so results are
// reproducible run to run; planning is serialized internally.

#include <quadmath.h>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace jgas::fft {

using cplx = std::complex<double>;
using qcplx = __complex128;

// Coefficients of f(theta) = a0/2 + sum_{k=1}^{kmax} (a_k cos k theta + b_k sin k theta)
// from N equispaced samples on [0, 2pi). a[k-1] holds a_k.
struct RealSeries {
  double a0 = 0.0;
  std::vector<double> a, b;
};

RealSeries real_series(std::span<const double> samples, std::size_t kmax);

// sum_{k > kmax} k (a_k^2 + b_k^2) over the resolved band k < N/2.
double discarded_half_energy(std::span<const double> samples, std::size_t kmax);

// d/dtheta of the trigonometric interpolant.
std::vector<double> derivative(std::span<const double> samples);

// Conjugate function: multiplier -i sgn(k); the mean is dropped.
std::vector<double> conjugate(std::span<const double> samples);

// In-place 2-D transform of an N x N row-major array with kernel e^{+i(k x + l y)}.
void backward_2d(std::vector<cplx>& data, std::size_t N);
void backward_2d(std::vector<qcplx>& data, std::size_t N);

}  // namespace jgas::fft
