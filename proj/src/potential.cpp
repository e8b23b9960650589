#include "jgas/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "jgas/error.hpp"
#include "jgas/fft.hpp"

namespace jgas {

double NystromGrid::length() const { return std::accumulate(weight.begin(), weight.end(), 0.0); }

NystromGrid make_nystrom_grid(const ConformalMap& map, std::size_t N) {
  if (!is_power_of_two(N) || N < 4 * (map.num_coeffs() + 1))
    throw Error(ErrorKind::GridTooSmall, "Nystrom grid must be a power of two resolving the Laurent series");
  NystromGrid g;
  g.N = N;
  g.theta.resize(N);
  g.zeta.resize(N);
  g.dzeta.resize(N);
  g.weight.resize(N);
  g.tangent.resize(N);
  g.normal.resize(N);
  g.curvature.resize(N);
  const cplx I(0.0, 1.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    const cplx e = std::polar(1.0, t);
    const cplx d1 = map.dphi(e), d2 = map.d2phi(e);
    const cplx zt = I * e * d1;
    const cplx ztt = -e * d1 - e * e * d2;
    const double speed = std::abs(zt);
    g.theta[i] = t;
    g.zeta[i] = map.phi(e);
    g.dzeta[i] = zt;
    g.weight[i] = speed * kTwoPi / static_cast<double>(N);
    g.tangent[i] = zt / speed;
    g.normal[i] = -I * g.tangent[i];
    g.curvature[i] = (ztt / zt).imag() / speed;
    if (!std::isfinite(g.curvature[i]) || speed == 0.0)
      throw Error(ErrorKind::QuadratureDivergence, "curvature is not finite on the Nystrom grid");
  }
  return g;
}

namespace {

// Re(nu_j / (zeta_j - zeta_i)) w_j, with the limit kappa_i/2 w_i on the diagonal.
Eigen::MatrixXd normal_derivative_kernel(const NystromGrid& g) {
  const auto N = static_cast<Eigen::Index>(g.N);
  Eigen::MatrixXd A(N, N);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j < N; ++j)
      A(i, j) = i == j ? 0.5 * g.curvature[i] * g.weight[i]
                       : (g.normal[j] / (g.zeta[j] - g.zeta[i])).real() * g.weight[j];
  return A;
}

}  // namespace

Eigen::MatrixXd np_matrix(const NystromGrid& grid) { return normal_derivative_kernel(grid) / kPi; }

Eigen::MatrixXd np_fourier_matrix(const ConformalMap& map, int m, std::size_t N) {
  if (m < 1) throw Error(ErrorKind::OutOfRange, "truncation order must be positive");
  if (N < 8 * static_cast<std::size_t>(m)) throw Error(ErrorKind::GridTooSmall, "NP projection needs N >= 8m");
  const NystromGrid grid = make_nystrom_grid(map, N);
  const Eigen::MatrixXd T = np_matrix(grid);
  const auto n = static_cast<Eigen::Index>(N);
  Eigen::MatrixXd out(2 * m, 2 * m);
  Eigen::VectorXd f(n);
  for (int col = 0; col < 2 * m; ++col) {
    const int j = col % m + 1;
    const bool sine = col >= m;
    // The function whose packed vector is the unit vector e_col.
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = grid.theta[static_cast<std::size_t>(i)];
      f(i) = 2.0 / std::sqrt(static_cast<double>(j)) * (sine ? std::sin(j * t) : std::cos(j * t));
    }
    const Eigen::VectorXd Tf = T * f;
    const auto rs = fft::real_series(std::span<const double>(Tf.data(), N), static_cast<std::size_t>(m));
    for (int k = 1; k <= m; ++k) {
      const double w = 0.5 * std::sqrt(static_cast<double>(k));
      out(k - 1, col) = w * rs.a[k - 1];
      out(m + k - 1, col) = w * rs.b[k - 1];
    }
  }
  return out;
}

DirichletEnergies interior_dirichlet_energy(const ConformalMap& map, const GSpec& g, const BoundarySeries& series,
                                            std::size_t N) {
  if (N < 512) throw Error(ErrorKind::GridTooSmall, "interior Dirichlet solve needs N >= 512");
  const NystromGrid grid = make_nystrom_grid(map, N);
  const auto n = static_cast<Eigen::Index>(N);

  Eigen::VectorXd G(n);
  for (Eigen::Index i = 0; i < n; ++i) G(i) = g_value(g, map, grid.theta[static_cast<std::size_t>(i)]);

  // Double-layer ansatz: (1/2 I + D) mu = G on the boundary.
  Eigen::MatrixXd A = normal_derivative_kernel(grid) / kTwoPi;
  A.diagonal().array() += 0.5;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-12)) throw Error(ErrorKind::SolveFailure, "double-layer system is numerically singular");
  const Eigen::VectorXd mu = lu.solve(G);

  // Boundary values of the analytic F with Re F = g inside: the circle part of
  // the Cauchy principal value is a Fourier multiplier, the remainder is smooth.
  const std::vector<double> muv(mu.data(), mu.data() + n);
  const std::vector<double> mu_conj = fft::conjugate(muv);
  const double mu_mean = mu.mean();
  const cplx I(0.0, 1.0);
  std::vector<cplx> e(N), ratio(N);
  for (std::size_t i = 0; i < N; ++i) {
    e[i] = std::polar(1.0, grid.theta[i]);
    ratio[i] = map.d2phi(e[i]) / (2.0 * map.dphi(e[i]));
  }
  std::vector<double> V(N);
  double residual = 0.0;
  for (std::size_t w = 0; w < N; ++w) {
    cplx sum = 0.0;
    for (std::size_t t = 0; t < N; ++t) {
      const cplx S = t == w ? I * e[w] * ratio[w]
                            : grid.dzeta[t] / (grid.zeta[t] - grid.zeta[w]) - I * e[t] / (e[t] - e[w]);
      sum += muv[t] * S;
    }
    const cplx F = 0.5 * muv[w] + 0.5 * mu_mean + 0.5 * I * mu_conj[w] + sum / (I * static_cast<double>(N));
    V[w] = F.imag();
    residual = std::max(residual, std::abs(F.real() - G(static_cast<Eigen::Index>(w))));
  }
  const std::vector<double> dV = fft::derivative(V);
  DirichletEnergies out;
  double e_minus = 0.0;
  for (std::size_t i = 0; i < N; ++i) e_minus += G(static_cast<Eigen::Index>(i)) * dV[i];
  out.interior = e_minus * kTwoPi / static_cast<double>(N);
  out.exterior = kPi * series.total;
  out.boundary_residual = residual;
  return out;
}

double neumann_jump_energy(const ConformalMap& map, const BoundarySeries& g, const HSolution& h, std::size_t N) {
  double sum = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    const double speed = std::abs(map.dphi(std::polar(1.0, t)));
    const double dh_ds = h.Hprime(t) / speed;
    sum += g.evaluate(t) * dh_ds * speed * kTwoPi / static_cast<double>(N);
  }
  return h.beta / (8.0 * kPi) * sum;
}

PlemeljCheck plemelj_check(const ConformalMap& map, const std::function<double(double)>& density,
                           std::size_t targets, std::size_t fine_grid) {
  if (targets == 0 || fine_grid % targets != 0)
    throw Error(ErrorKind::InvalidConfig, "targets must divide the fine grid");
  const NystromGrid g = make_nystrom_grid(map, fine_grid);
  std::vector<double> fw(fine_grid);
  for (std::size_t j = 0; j < fine_grid; ++j) fw[j] = density(g.theta[j]) * g.weight[j];

  auto normal_derivative_at = [&](cplx x, cplx n) {
    double s = 0.0;
    for (std::size_t j = 0; j < fine_grid; ++j) s += fw[j] * (n / (x - g.zeta[j])).real();
    return -s / kTwoPi;
  };

  PlemeljCheck out;
  const std::size_t stride = fine_grid / targets;
  for (std::size_t t = 0; t < targets; ++t) {
    const std::size_t i = t * stride;
    const cplx z = g.zeta[i], nu = g.normal[i];
    // A few local node spacings: far enough for the trapezoid rule on the
    // near-singular kernel, close enough for the extrapolation in delta.
    const double delta = 8.0 * g.weight[i];
    // Re(nu/(z - zeta)) tends to kappa/2 as zeta -> z along the curve.
    double direct = 0.5 * g.curvature[i] * fw[i];
    for (std::size_t j = 0; j < fine_grid; ++j)
      if (j != i) direct += fw[j] * (nu / (z - g.zeta[j])).real();
    direct = -direct / kTwoPi;
    auto one_side = [&](double sign) {
      const double v1 = normal_derivative_at(z + sign * delta * nu, nu);
      const double v2 = normal_derivative_at(z + sign * 2.0 * delta * nu, nu);
      const double v4 = normal_derivative_at(z + sign * 4.0 * delta * nu, nu);
      return (8.0 * v1 - 6.0 * v2 + v4) / 3.0;
    };
    const double plus = one_side(1.0), minus = one_side(-1.0);
    const double f = density(g.theta[i]);
    out.max_error = std::max(out.max_error, std::abs(plus - minus + f));
    out.max_side_error = std::max({out.max_side_error, std::abs(plus - (direct - 0.5 * f)),
                                   std::abs(minus - (direct + 0.5 * f))});
  }
  return out;
}

}  // namespace jgas
