#include "jgas/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace jgas::fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<cplx> forward_1d(std::span<const double> samples) {
  const std::size_t N = samples.size();
  std::vector<cplx> buf(samples.begin(), samples.end());
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(N), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return buf;
}

std::vector<double> backward_1d_real(std::vector<cplx> spectrum) {
  const std::size_t N = spectrum.size();
  auto* data = reinterpret_cast<fftw_complex*>(spectrum.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(N), data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) out[i] = spectrum[i].real() / static_cast<double>(N);
  return out;
}

// Applies a Fourier multiplier m(k) for signed k in (-N/2, N/2); Nyquist is zeroed.
template <typename Multiplier>
std::vector<double> apply_multiplier(std::span<const double> samples, Multiplier mult) {
  const std::size_t N = samples.size();
  auto F = forward_1d(samples);
  for (std::size_t k = 0; k < N; ++k) {
    const long long signed_k = k < N / 2 ? static_cast<long long>(k)
                                          : static_cast<long long>(k) - static_cast<long long>(N);
    if (N % 2 == 0 && k == N / 2) {
      F[k] = 0.0;
      continue;
    }
    F[k] *= mult(signed_k);
  }
  return backward_1d_real(std::move(F));
}

}  // namespace

RealSeries real_series(std::span<const double> samples, std::size_t kmax) {
  const std::size_t N = samples.size();
  if (2 * kmax >= N) throw std::invalid_argument("real_series: kmax must be below N/2");
  const auto F = forward_1d(samples);
  RealSeries s;
  const double scale = 2.0 / static_cast<double>(N);
  s.a0 = scale * F[0].real();
  s.a.resize(kmax);
  s.b.resize(kmax);
  for (std::size_t k = 1; k <= kmax; ++k) {
    s.a[k - 1] = scale * F[k].real();
    s.b[k - 1] = -scale * F[k].imag();
  }
  return s;
}

double discarded_half_energy(std::span<const double> samples, std::size_t kmax) {
  const std::size_t N = samples.size();
  const auto F = forward_1d(samples);
  const double scale = 2.0 / static_cast<double>(N);
  double e = 0.0;
  for (std::size_t k = kmax + 1; 2 * k < N; ++k) e += static_cast<double>(k) * std::norm(scale * F[k]);
  return e;
}

std::vector<double> derivative(std::span<const double> samples) {
  return apply_multiplier(samples, [](long long k) { return cplx(0.0, static_cast<double>(k)); });
}

std::vector<double> conjugate(std::span<const double> samples) {
  return apply_multiplier(samples, [](long long k) {
    return k > 0 ? cplx(0.0, -1.0) : k < 0 ? cplx(0.0, 1.0) : cplx(0.0, 0.0);
  });
}

void backward_2d(std::vector<cplx>& data, std::size_t N) {
  if (data.size() != N * N) throw std::invalid_argument("backward_2d: size mismatch");
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(N), static_cast<int>(N), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
}

void backward_2d(std::vector<qcplx>& data, std::size_t N) {
  if (data.size() != N * N) throw std::invalid_argument("backward_2d: size mismatch");
  auto* p = reinterpret_cast<fftwq_complex*>(data.data());
  fftwq_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftwq_plan_dft_2d(static_cast<int>(N), static_cast<int>(N), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftwq_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftwq_destroy_plan(plan);
  }
}

}  // namespace jgas::fft
