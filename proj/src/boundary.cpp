#include "jgas/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "jgas/error.hpp"
#include "jgas/fft.hpp"

namespace jgas {

std::string to_string(GKind kind) {
  switch (kind) {
    case GKind::fourier: return "fourier";
    case GKind::re_z: return "re_z";
    case GKind::im_z: return "im_z";
    case GKind::log_abs_psi_prime: return "log_abs_psi_prime";
  }
  return "unknown";
}

double g_value(const GSpec& g, const ConformalMap& map, double theta) {
  switch (g.type) {
    case GKind::fourier: {
      double v = 0.5 * g.a0;
      for (std::size_t k = 1; k <= g.a.size(); ++k) v += g.a[k - 1] * std::cos(static_cast<double>(k) * theta);
      for (std::size_t k = 1; k <= g.b.size(); ++k) v += g.b[k - 1] * std::sin(static_cast<double>(k) * theta);
      return v;
    }
    case GKind::re_z:
    case GKind::im_z: {
      const cplx z = map.original_capacity() * map.boundary_point(theta);
      const cplx zp = std::pow(z, g.p);
      return g.type == GKind::re_z ? zp.real() : zp.imag();
    }
    case GKind::log_abs_psi_prime:
      return -std::log(map.original_capacity()) - map.log_abs_dphi(theta);
  }
  return 0.0;
}

double BoundarySeries::evaluate(double theta) const {
  double v = 0.5 * a0;
  for (int k = 1; k <= m; ++k) v += a(k - 1) * std::cos(k * theta) + b(k - 1) * std::sin(k * theta);
  return v;
}

BoundarySeries make_series(double a0, Eigen::VectorXd a, Eigen::VectorXd b) {
  BoundarySeries s;
  s.m = static_cast<int>(a.size());
  s.a0 = a0;
  s.a = std::move(a);
  s.b = std::move(b);
  s.gvec.resize(2 * s.m);
  for (int k = 1; k <= s.m; ++k) {
    const double w = 0.5 * std::sqrt(static_cast<double>(k));
    s.gvec(k - 1) = w * s.a(k - 1);
    s.gvec(s.m + k - 1) = w * s.b(k - 1);
    s.total += k * (s.a(k - 1) * s.a(k - 1) + s.b(k - 1) * s.b(k - 1));
  }
  return s;
}

BoundarySeries analyze_g(const GSpec& g, const ConformalMap& map, int m, std::size_t N) {
  if (m < 1) throw Error(ErrorKind::OutOfRange, "truncation order must be positive");
  if (!is_power_of_two(N) || N < 4 * static_cast<std::size_t>(m))
    throw Error(ErrorKind::GridTooSmall, "grid must be a power of two with N >= 4m");
  if (g.type == GKind::fourier && 2 * std::max(g.a.size(), g.b.size()) >= N)
    throw Error(ErrorKind::GridTooSmall, "fourier g has modes beyond the grid's band");
  if ((g.type == GKind::re_z || g.type == GKind::im_z) && g.p < 0)
    throw Error(ErrorKind::InvalidConfig, "power p must be nonnegative");

  std::vector<double> samples(N);
  for (std::size_t i = 0; i < N; ++i)
    samples[i] = g_value(g, map, kTwoPi * static_cast<double>(i) / static_cast<double>(N));
  const auto rs = fft::real_series(samples, static_cast<std::size_t>(m));
  BoundarySeries s = make_series(rs.a0, Eigen::Map<const Eigen::VectorXd>(rs.a.data(), m),
                                 Eigen::Map<const Eigen::VectorXd>(rs.b.data(), m));
  s.tail = fft::discarded_half_energy(samples, static_cast<std::size_t>(m));
  s.total += s.tail;
  if (s.tail > 1e-8 * s.total)
    throw Error(ErrorKind::TailTooLarge, "g has significant energy beyond mode m; increase m");
  return s;
}

BoundarySeries conjugate(const BoundarySeries& F) {
  BoundarySeries s = make_series(0.0, -F.b, F.a);
  s.tail = F.tail;
  s.total += s.tail;
  return s;
}

namespace {

void check_conditioning(const KOperator& K) {
  if (!(K.kappa < 1.0)) throw Error(ErrorKind::KappaGeOne, "resolvent requires ||K|| < 1");
  if (1.0 - K.kappa < 1e-6) throw Error(ErrorKind::IllConditioned, "1 - ||K|| is below 1e-6");
}

Eigen::MatrixXd shifted(const KOperator& K) {
  return Eigen::MatrixXd::Identity(K.K.rows(), K.K.cols()) + K.K;
}

}  // namespace

Eigen::VectorXd solve_resolvent(const KOperator& K, const Eigen::VectorXd& v) {
  check_conditioning(K);
  if (v.size() != K.K.rows()) throw Error(ErrorKind::InvalidConfig, "resolvent: dimension mismatch");
  const Eigen::MatrixXd A = shifted(K);
  const Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::IllConditioned, "I + K is not positive definite");
  Eigen::VectorXd x = llt.solve(v);
  // One step of iterative refinement brings the residual to roundoff level.
  x += llt.solve(v - A * x);
  return x;
}

Eigen::VectorXcd solve_resolvent(const KOperator& K, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd x(v.size());
  x.real() = solve_resolvent(K, Eigen::VectorXd(v.real()));
  x.imag() = solve_resolvent(K, Eigen::VectorXd(v.imag()));
  return x;
}

Eigen::VectorXd rotate_l(const Eigen::VectorXd& v) {
  const auto m = v.size() / 2;
  Eigen::VectorXd out(v.size());
  out.head(m) = -v.tail(m);
  out.tail(m) = v.head(m);
  return out;
}

double HSolution::H(double theta) const {
  double v = 0.0;
  for (int k = 1; k <= m; ++k)
    v += (hvec(k - 1) * std::cos(k * theta) + hvec(m + k - 1) * std::sin(k * theta)) / std::sqrt(static_cast<double>(k));
  return 2.0 * v;
}

double HSolution::Hprime(double theta) const {
  double v = 0.0;
  for (int k = 1; k <= m; ++k)
    v += std::sqrt(static_cast<double>(k)) * (hvec(m + k - 1) * std::cos(k * theta) - hvec(k - 1) * std::sin(k * theta));
  return 2.0 * v;
}

double HSolution::Htilde(double theta) const {
  double v = 0.0;
  for (int k = 1; k <= m; ++k)
    v += (-hvec(m + k - 1) * std::cos(k * theta) + hvec(k - 1) * std::sin(k * theta)) / std::sqrt(static_cast<double>(k));
  return 2.0 * v;
}

HSolution solve_h(const KOperator& K, const BoundarySeries& g, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::OutOfRange, "beta must be positive");
  if (g.m != K.m) throw Error(ErrorKind::InvalidConfig, "g and K truncation orders differ");
  HSolution h;
  h.m = K.m;
  h.beta = beta;
  h.hvec = (2.0 / beta) * rotate_l(solve_resolvent(K, g.gvec));
  return h;
}

double fourier_form_residual(const KOperator& K, const BoundarySeries& g, const HSolution& h) {
  const Eigen::VectorXd lhs = -g.gvec;
  const Eigen::VectorXd rhs = 0.5 * h.beta * (shifted(K) * rotate_l(h.hvec));
  const double scale = std::max(g.gvec.cwiseAbs().maxCoeff(), 1e-300);
  return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
}

double residual_inteq(const ConformalMap& map, const BoundarySeries& g, const HSolution& h, std::size_t N) {
  if (!is_power_of_two(N) || N < 4 * static_cast<std::size_t>(h.m))
    throw Error(ErrorKind::GridTooSmall, "grid must be a power of two with N >= 4m");
  std::vector<cplx> e(N), f(N);
  std::vector<double> hp(N), logd(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    e[i] = std::polar(1.0, t);
    f[i] = map.phi(e[i]);
    hp[i] = h.Hprime(t);
    logd[i] = std::log(std::abs(map.dphi(e[i])));
  }
  const double w = kTwoPi / static_cast<double>(N);
  double worst = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    double integral = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double k = i == j ? logd[i] : std::log(std::abs((f[i] - f[j]) / (e[i] - e[j])));
      integral += k * hp[i];
    }
    integral *= w;
    const double omega = kTwoPi * static_cast<double>(j) / static_cast<double>(N);
    const double rhs = -0.5 * h.beta * h.Htilde(omega) - h.beta / kTwoPi * integral;
    worst = std::max(worst, std::abs(g.evaluate(omega) - 0.5 * g.a0 - rhs));
  }
  return worst;
}

double log_selberg(int n, double beta) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "n must be positive");
  if (!(beta > 0.0)) throw Error(ErrorKind::OutOfRange, "beta must be positive");
  const double nn = static_cast<double>(n);
  return nn * std::log(kTwoPi) - std::lgamma(nn + 1.0) + std::lgamma(1.0 + beta * nn / 2.0) -
         nn * std::lgamma(1.0 + beta / 2.0);
}

Prediction predict(const KOperator& K, const DVector& d, const BoundarySeries& g, double beta,
                   const std::vector<int>& n_list, double capacity) {
  if (!(beta > 0.0)) throw Error(ErrorKind::OutOfRange, "beta must be positive");
  if (!(capacity > 0.0)) throw Error(ErrorKind::OutOfRange, "capacity must be positive");
  if (g.m != K.m || d.m != K.m) throw Error(ErrorKind::InvalidConfig, "truncation orders differ");
  Prediction p;
  p.beta = beta;
  const Eigen::VectorXd Rg = solve_resolvent(K, g.gvec);
  p.mu = 2.0 * (1.0 - 2.0 / beta) * d.d.dot(Rg);
  p.sigma2 = (4.0 / beta) * g.gvec.dot(Rg);

  const Eigen::VectorXd gb = g.gvec + (beta / 2.0 - 1.0) * d.d;
  const double quad = (2.0 / beta) * gb.dot(solve_resolvent(K, gb));
  double logdet = 0.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(K.K, Eigen::EigenvaluesOnly);
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) logdet += std::log1p(eig.eigenvalues()(i));

  for (int n : n_list) {
    LogRatioTerms t;
    t.n = n;
    const double nn = static_cast<double>(n);
    t.selberg = log_selberg(n, beta);
    t.capacity_term = (beta * nn * nn / 2.0 + (1.0 - beta / 2.0) * nn) * std::log(capacity);
    t.mean_term = nn * g.a0 / 2.0;
    t.det_term = -0.5 * logdet;
    t.quadratic_term = quad;
    t.log_D = t.selberg + t.capacity_term + t.mean_term + t.det_term + t.quadratic_term;
    p.terms.push_back(t);
  }
  return p;
}

cplx quadratic_exponent(const KOperator& K, const DVector& d, const Eigen::VectorXcd& g, double beta) {
  if (!(beta > 0.0)) throw Error(ErrorKind::OutOfRange, "beta must be positive");
  const Eigen::VectorXcd gb = g + (beta / 2.0 - 1.0) * d.d.cast<cplx>();
  return (2.0 / beta) * (gb.transpose() * solve_resolvent(K, gb))(0);
}

IdentityCheck identity_lemma_gvar(const ConformalMap& map, const BoundarySeries& g, const HSolution& h,
                                  const DVector& d, const KOperator& K, double beta, std::size_t N) {
  IdentityCheck out;
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    sum += (g.evaluate(t) + 2.0 * (1.0 - beta / 2.0) * map.log_abs_dphi(t)) * h.Hprime(t);
  }
  out.lhs = sum * (kTwoPi / static_cast<double>(N)) / (4.0 * kPi);
  const Eigen::VectorXd Rg = solve_resolvent(K, g.gvec);
  out.rhs = (2.0 / beta) * g.gvec.dot(Rg) + 2.0 * (1.0 - 2.0 / beta) * d.d.dot(Rg);
  return out;
}

}  // namespace jgas
