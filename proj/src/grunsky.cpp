#include "jgas/grunsky.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "jgas/error.hpp"
#include "jgas/fft.hpp"

namespace jgas {

std::string to_string(GrunskyMethod method) {
  return method == GrunskyMethod::boundary_fft ? "boundary_fft" : "offcircle_fft";
}

namespace {

using quad = __float128;
using qcplx = __complex128;

constexpr double kMaxPhaseStep = kPi / 2;

qcplx make_q(quad re, quad im) {
  qcplx z;
  __real__ z = re;
  __imag__ z = im;
  return z;
}

// Scalar-generic pieces of the kernel extraction. Traits pick the arithmetic.
struct DoubleTraits {
  using real = double;
  using complex = cplx;
  static real pi() { return kPi; }
  static complex polar(real r, real t) { return std::polar(r, t); }
  static complex log(complex z) { return std::log(z); }
  static real re(complex z) { return z.real(); }
  static real im(complex z) { return z.imag(); }
  static complex make(real r, real i) { return {r, i}; }
  static real remainder(real x, real y) { return std::remainder(x, y); }
  static real round(real x) { return std::round(x); }
  static real fabs(real x) { return std::fabs(x); }
};

struct QuadTraits {
  using real = quad;
  using complex = qcplx;
  static real pi() { return M_PIq; }
  static complex polar(real r, real t) { return make_q(r * cosq(t), r * sinq(t)); }
  static complex log(complex z) { return clogq(z); }
  static real re(complex z) { return __real__ z; }
  static real im(complex z) { return __imag__ z; }
  static complex make(real r, real i) { return make_q(r, i); }
  static real remainder(real x, real y) { return remainderq(x, y); }
  static real round(real x) { return roundq(x); }
  static real fabs(real x) { return fabsq(x); }
};

template <typename T>
struct MapEval {
  std::vector<typename T::complex> c;

  explicit MapEval(const ConformalMap& map) {
    for (cplx cj : map.coeffs()) c.push_back(T::make(cj.real(), cj.imag()));
  }
  typename T::complex phi(typename T::complex z) const {
    const auto u = T::make(1, 0) / z;
    auto p = T::make(0, 0);
    for (std::size_t j = c.size(); j-- > 0;) p = p * u + c[j];
    return z + p;
  }
  typename T::complex dphi(typename T::complex z) const {
    const auto u = T::make(1, 0) / z;
    auto p = T::make(0, 0), dp = T::make(0, 0);
    for (std::size_t j = c.size(); j-- > 0;) {
      dp = dp * u + p;
      p = p * u + c[j];
    }
    return T::make(1, 0) - dp * u * u;
  }
};

// Fills data (N x N, row theta, column omega) with a continuous branch of
// log[(phi(z)-phi(w))/(z-w)] on |z| = |w| = r.
template <typename T>
void fill_log_kernel(const ConformalMap& map, std::size_t N, typename T::real r,
                     std::vector<typename T::complex>& data) {
  using real = typename T::real;
  using complex = typename T::complex;
  const MapEval<T> eval(map);
  const real two_pi = 2 * T::pi();
  std::vector<complex> z(N), f(N), diag(N);
  for (std::size_t p = 0; p < N; ++p) {
    z[p] = T::polar(r, two_pi * real(p) / real(N));
    f[p] = eval.phi(z[p]);
    diag[p] = T::log(eval.dphi(z[p]));
  }
  // log phi' along the circle: unwrap, then pick the branch with zero mean
  // phase (log phi' has no constant term at capacity one).
  real mean_im = T::im(diag[0]);
  for (std::size_t p = 1; p < N; ++p) {
    const real prev = T::im(diag[p - 1]);
    const real step = T::remainder(T::im(diag[p]) - prev, two_pi);
    if (T::fabs(step) > real(kMaxPhaseStep))
      throw Error(ErrorKind::BranchUnwrapFailure, "log phi' phase step too large for the grid");
    diag[p] = T::make(T::re(diag[p]), prev + step);
    mean_im += T::im(diag[p]);
  }
  mean_im /= real(N);
  const real shift = two_pi * T::round(mean_im / two_pi);
  for (auto& v : diag) v = T::make(T::re(v), T::im(v) - shift);

  data.assign(N * N, T::make(0, 0));
  for (std::size_t p = 0; p < N; ++p) {
    data[p * N + p] = diag[p];
    real prev = T::im(diag[p]);
    for (std::size_t s = 1; s < N; ++s) {
      const std::size_t q = (p + s) % N;
      const complex v = T::log((f[p] - f[q]) / (z[p] - z[q]));
      const real step = T::remainder(T::im(v) - prev, two_pi);
      if (T::fabs(step) > real(kMaxPhaseStep))
        throw Error(ErrorKind::BranchUnwrapFailure, "kernel phase step too large for the grid");
      prev += step;
      data[p * N + q] = T::make(T::re(v), prev);
    }
    // Closing the loop must land back on the diagonal branch.
    if (T::fabs(T::im(diag[p]) - prev) > real(kMaxPhaseStep))
      throw Error(ErrorKind::BranchUnwrapFailure, "kernel branch does not close around the torus");
  }
}

}  // namespace

double TailFit::envelope(int k, int l) const {
  return scale * std::pow(static_cast<double>(std::max(k, l)), -exponent);
}

TailFit fit_tail(const Eigen::MatrixXcd& a) {
  TailFit fit;
  const int m = static_cast<int>(a.rows());
  if (m == 0) return fit;
  const double amax = a.cwiseAbs().maxCoeff();
  // Entries are bounded by one, so roundoff sits near 1e-16 whatever amax is.
  fit.noise_floor = 1e-14 * std::max(amax, 1.0);
  if (amax == 0.0) return fit;
  std::vector<double> shell(static_cast<std::size_t>(m) + 1, 0.0);
  for (int k = 1; k <= m; ++k)
    for (int l = 1; l <= m; ++l) {
      const int K = std::max(k, l);
      shell[K] = std::max(shell[K], std::abs(a(k - 1, l - 1)));
    }
  std::vector<double> xs, ys;
  for (int K = std::max(1, (3 * m) / 4); K <= m; ++K) {
    if (shell[K] > fit.noise_floor) {
      xs.push_back(std::log(static_cast<double>(K)));
      ys.push_back(std::log(shell[K]));
    }
  }
  if (xs.size() < 3) return fit;  // truncated coefficients are below roundoff
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  const double slope = denom > 0 ? (n * sxy - sx * sy) / denom : 0.0;
  fit.resolved = true;
  fit.exponent = -slope;
  double logA = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) logA = std::max(logA, ys[i] + fit.exponent * xs[i]);
  fit.scale = std::exp(logA);
  // Shell K carries sum_{max(k,l)=K} kl = K^3.
  if (fit.exponent <= 4.0) {
    fit.tail = std::numeric_limits<double>::infinity();
    return fit;
  }
  double sum = 0.0;
  const int stop = m + 2000;
  for (int K = m + 1; K <= stop; ++K) sum += std::pow(static_cast<double>(K), 3.0 - fit.exponent);
  sum += std::pow(static_cast<double>(stop) + 0.5, 4.0 - fit.exponent) / (fit.exponent - 4.0);
  fit.tail = fit.scale * sum;
  return fit;
}

GrunskyData grunsky_from_matrix(Eigen::MatrixXcd a) {
  GrunskyData G;
  G.m = static_cast<int>(a.rows());
  G.asymmetry = (a - a.transpose()).cwiseAbs().maxCoeff();
  G.a = 0.5 * (a + a.transpose());
  G.fit = fit_tail(G.a);
  G.tail = G.fit.tail;
  return G;
}

GrunskyData compute_grunsky(const ConformalMap& map, int m, GrunskyMethod method, std::size_t N, double radius) {
  if (m < 1) throw Error(ErrorKind::OutOfRange, "truncation order must be positive");
  if (!is_power_of_two(N)) throw Error(ErrorKind::GridTooSmall, "grid size must be a power of two");
  if (N < 4 * static_cast<std::size_t>(m)) throw Error(ErrorKind::GridTooSmall, "grid must satisfy N >= 4m");
  if (N < 4 * (map.num_coeffs() + 1)) throw Error(ErrorKind::GridTooSmall, "grid too small for the Laurent series");
  if (method == GrunskyMethod::offcircle_fft && !(radius > 1.0))
    throw Error(ErrorKind::OutOfRange, "off-circle radius must exceed one");

  Eigen::MatrixXcd a(m, m);
  const double norm = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
  if (method == GrunskyMethod::boundary_fft) {
    std::vector<cplx> data;
    fill_log_kernel<DoubleTraits>(map, N, 1.0, data);
    fft::backward_2d(data, N);
    for (int k = 1; k <= m; ++k)
      for (int l = 1; l <= m; ++l) a(k - 1, l - 1) = -norm * data[static_cast<std::size_t>(k) * N + l];
  } else {
    // Extracted coefficients are scaled by r^{k+l}; quad precision keeps the
    // amplified roundoff well below double resolution.
    std::vector<qcplx> data;
    fill_log_kernel<QuadTraits>(map, N, quad(radius), data);
    fft::backward_2d(data, N);
    const quad qnorm = quad(1) / (quad(N) * quad(N));
    std::vector<quad> rpow(2 * static_cast<std::size_t>(m) + 1);
    rpow[0] = 1;
    for (std::size_t i = 1; i < rpow.size(); ++i) rpow[i] = rpow[i - 1] * quad(radius);
    for (int k = 1; k <= m; ++k)
      for (int l = 1; l <= m; ++l) {
        const qcplx v = data[static_cast<std::size_t>(k) * N + l] * (-qnorm * rpow[k + l]);
        a(k - 1, l - 1) = cplx(static_cast<double>(__real__ v), static_cast<double>(__imag__ v));
      }
  }
  GrunskyData G = grunsky_from_matrix(std::move(a));
  G.method = method;
  G.grid = N;
  G.radius = method == GrunskyMethod::offcircle_fft ? radius : 1.0;
  return G;
}

namespace {

KOperator assemble_k(const Eigen::MatrixXcd& B) {
  const auto m = B.rows();
  KOperator op;
  op.m = static_cast<int>(m);
  op.B = B;
  op.K.resize(2 * m, 2 * m);
  op.K.topLeftCorner(m, m) = B.real();
  op.K.topRightCorner(m, m) = B.imag();
  op.K.bottomLeftCorner(m, m) = B.imag();
  op.K.bottomRightCorner(m, m) = -B.real();
  op.K = 0.5 * (op.K + op.K.transpose()).eval();
  op.kappa = m > 0 ? Eigen::BDCSVD<Eigen::MatrixXcd>(B).singularValues()(0) : 0.0;
  return op;
}

Eigen::MatrixXcd scaled_b(const Eigen::MatrixXcd& a, double s) {
  const auto m = a.rows();
  Eigen::MatrixXcd B(m, m);
  for (Eigen::Index k = 1; k <= m; ++k)
    for (Eigen::Index l = 1; l <= m; ++l)
      B(k - 1, l - 1) = std::sqrt(static_cast<double>(k * l)) * std::pow(s, static_cast<double>(k + l)) * a(k - 1, l - 1);
  return B;
}

// d_k = (sqrt(k)/2) s^k sum_{j=1}^{k-1} a_{j,k-j}, split into real/imag blocks.
DVector assemble_d(const Eigen::MatrixXcd& a, double s) {
  const auto m = a.rows();
  DVector d;
  d.m = static_cast<int>(m);
  d.d = Eigen::VectorXd::Zero(2 * m);
  for (Eigen::Index k = 2; k <= m; ++k) {
    cplx sum{};
    for (Eigen::Index j = 1; j < k; ++j) sum += a(j - 1, k - j - 1);
    const double w = 0.5 * std::sqrt(static_cast<double>(k)) * std::pow(s, static_cast<double>(k));
    d.d(k - 1) = w * sum.real();
    d.d(m + k - 1) = w * sum.imag();
  }
  return d;
}

}  // namespace

Operators build_operators(const GrunskyData& G) {
  Operators ops{assemble_k(scaled_b(G.a, 1.0)), assemble_d(G.a, 1.0)};
  if (!(ops.K.kappa < 1.0))
    throw Error(ErrorKind::KappaGeOne, "Grunsky operator norm " + std::to_string(ops.K.kappa) + " is not below one");
  return ops;
}

FredholmResult fredholm_det(const KOperator& K, double tail) {
  if (!(K.kappa < 1.0)) throw Error(ErrorKind::KappaGeOne, "det(I+K) requires ||K|| < 1");
  FredholmResult r;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K.K, Eigen::EigenvaluesOnly);
  r.eigenvalues = eig.eigenvalues();
  double log_ik = 0.0;
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) log_ik += std::log1p(r.eigenvalues(i));
  r.det_I_plus_K = std::exp(log_ik);

  const auto m = K.B.rows();
  const Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(m, m) - K.B * K.B.adjoint();
  const Eigen::LLT<Eigen::MatrixXcd> llt(M);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::CrossCheckFailure, "I - BB* is not positive definite");
  double log_bb = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) log_bb += 2.0 * std::log(llt.matrixL()(i, i).real());
  r.log_det = log_bb;
  r.det_I_minus_BBstar = std::exp(log_bb);
  r.loewner_energy = -12.0 * log_bb;

  if (std::abs(r.det_I_plus_K - r.det_I_minus_BBstar) > (1e-8 + tail) * std::abs(r.det_I_minus_BBstar))
    throw Error(ErrorKind::CrossCheckFailure, "det(I+K) and det(I-BB*) disagree");

  if (m > 0) {
    const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(K.B).singularValues();
    Eigen::VectorXd paired(2 * m);
    for (Eigen::Index i = 0; i < m; ++i) {
      paired(i) = -sv(i);
      paired(2 * m - 1 - i) = sv(i);
    }
    r.pairing_error = (paired - r.eigenvalues).cwiseAbs().maxCoeff();
  }
  return r;
}

DeformedOperators deformed_operators(const GrunskyData& G, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::OutOfRange, "deformation parameter must lie in [0,1]");
  DeformedOperators out;
  out.K = assemble_k(scaled_b(G.a, s));
  if (!(out.K.kappa < 1.0)) throw Error(ErrorKind::KappaGeOne, "deformed Grunsky operator norm is not below one");
  out.d = assemble_d(G.a, s);

  const auto m = G.a.rows();
  Eigen::MatrixXcd dB(m, m);
  for (Eigen::Index k = 1; k <= m; ++k)
    for (Eigen::Index l = 1; l <= m; ++l) {
      const double e = static_cast<double>(k + l);
      dB(k - 1, l - 1) = e * std::pow(s, e - 1.0) * std::sqrt(static_cast<double>(k * l)) * G.a(k - 1, l - 1);
    }
  out.Kprime.resize(2 * m, 2 * m);
  out.Kprime.topLeftCorner(m, m) = dB.real();
  out.Kprime.topRightCorner(m, m) = dB.imag();
  out.Kprime.bottomLeftCorner(m, m) = dB.imag();
  out.Kprime.bottomRightCorner(m, m) = -dB.real();
  out.Kprime = 0.5 * (out.Kprime + out.Kprime.transpose()).eval();

  const DVector d1 = assemble_d(G.a, 1.0);
  out.dprime = Eigen::VectorXd::Zero(2 * m);
  for (Eigen::Index k = 2; k <= m; ++k) {
    const double f = static_cast<double>(k) * std::pow(s, static_cast<double>(k - 1));
    out.dprime(k - 1) = f * d1.d(k - 1);
    out.dprime(m + k - 1) = f * d1.d(m + k - 1);
  }
  return out;
}

Eigen::VectorXd basis_vector(int m, double theta) {
  Eigen::VectorXd v(2 * m);
  for (int k = 1; k <= m; ++k) {
    const double r = 1.0 / std::sqrt(static_cast<double>(k));
    v(k - 1) = r * std::cos(k * theta);
    v(m + k - 1) = r * std::sin(k * theta);
  }
  return v;
}

}  // namespace jgas
