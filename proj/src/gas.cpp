#include "jgas/gas.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "jgas/error.hpp"

namespace jgas {

void validate(const GasConfig& cfg) {
  if (cfg.n < 1) throw Error(ErrorKind::OutOfRange, "n must be at least 1");
  if (!(cfg.beta > 0.0) || !std::isfinite(cfg.beta)) throw Error(ErrorKind::OutOfRange, "beta must be positive");
  if (cfg.m < 1) throw Error(ErrorKind::OutOfRange, "m must be positive");
  if (cfg.sweeps < 1 || cfg.burn_in < 0 || cfg.burn_in >= cfg.sweeps)
    throw Error(ErrorKind::InvalidConfig, "need 0 <= burn_in < sweeps");
  if (cfg.thin < 1) throw Error(ErrorKind::InvalidConfig, "thin must be at least 1");
  if (!(cfg.step_delta > 0.0 && cfg.step_delta < kPi)) throw Error(ErrorKind::OutOfRange, "step_delta must lie in (0, pi)");
  if (cfg.chains < 1) throw Error(ErrorKind::InvalidConfig, "chains must be at least 1");
}

namespace {

constexpr double kCollision = 1e-12;

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

void check_collisions(std::span<const double> theta) {
  std::vector<double> t(theta.begin(), theta.end());
  for (auto& v : t) v = wrap_angle(v);
  std::sort(t.begin(), t.end());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double next = i + 1 < t.size() ? t[i + 1] : t[0] + kTwoPi;
    if (t.size() > 1 && next - t[i] < kCollision) throw Error(ErrorKind::Collision, "two particles coincide");
  }
}

}  // namespace

double energy_direct(std::span<const double> theta, const ConformalMap& map_s, double beta) {
  check_collisions(theta);
  const std::size_t n = theta.size();
  std::vector<cplx> z(n);
  double e = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const cplx w = std::polar(1.0, theta[i]);
    z[i] = map_s.phi(w);
    e += std::log(std::abs(map_s.dphi(w)));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e += beta * std::log(std::abs(z[i] - z[j]));
  if (!std::isfinite(e)) throw Error(ErrorKind::NonFiniteEnergy, "direct energy is not finite");
  return e;
}

Eigen::VectorXd power_sum_vector(std::span<const double> theta, int m) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * m);
  for (double t : theta)
    for (int k = 1; k <= m; ++k) {
      v(k - 1) += std::cos(k * t);
      v(m + k - 1) += std::sin(k * t);
    }
  for (int k = 1; k <= m; ++k) {
    const double r = 1.0 / std::sqrt(static_cast<double>(k));
    v(k - 1) *= r;
    v(m + k - 1) *= r;
  }
  return v;
}

double energy_grunsky(std::span<const double> theta, const ConformalMap& map_s, const GrunskyData& G, double s,
                      double beta) {
  check_collisions(theta);
  const std::size_t n = theta.size();
  double circle = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) circle += 2.0 * std::log(std::fabs(2.0 * std::sin(0.5 * (theta[i] - theta[j]))));
  const DeformedOperators ops = deformed_operators(G, s);
  const Eigen::VectorXd xy = power_sum_vector(theta, G.m);
  double logd = 0.0;
  for (double t : theta) logd += map_s.log_abs_dphi(t);
  const double e = 0.5 * beta * (circle - xy.dot(ops.K.K * xy)) + (1.0 - 0.5 * beta) * logd;
  if (!std::isfinite(e)) throw Error(ErrorKind::NonFiniteEnergy, "Grunsky energy is not finite");
  return e;
}

double energy(std::span<const double> theta, const ConformalMap& map, double beta, EnergyMode mode, double s,
              const GrunskyData* G) {
  const ConformalMap map_s = deform(map, s);
  if (mode == EnergyMode::direct) return energy_direct(theta, map_s, beta);
  if (G == nullptr) throw Error(ErrorKind::InvalidConfig, "Grunsky energy needs Grunsky data");
  return energy_grunsky(theta, map_s, *G, s, beta);
}

Chain::Chain(const ConformalMap& map_s, const GasConfig& cfg, std::uint64_t seed)
    : map_(map_s), cfg_(cfg), rng_(seed), delta_(cfg.step_delta) {
  validate(cfg);
  const int n = cfg.n;
  theta_.resize(n);
  for (int mu = 0; mu < n; ++mu) theta_[mu] = kTwoPi * mu / n;
  z_.resize(n);
  logd_.resize(n);
  S_.assign(cfg.m, cplx{});
  xy_ = Eigen::VectorXd::Zero(2 * cfg.m);
  refresh();
  max_energy_drift_ = 0.0;
  max_power_drift_ = 0.0;
}

double Chain::uniform() {
  // 53 random bits onto [0, 1); fixed here so streams do not depend on the
  // standard library's distribution implementation.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

void Chain::sync_xy() {
  const int m = cfg_.m;
  for (int k = 1; k <= m; ++k) {
    const double r = 1.0 / std::sqrt(static_cast<double>(k));
    xy_(k - 1) = r * S_[k - 1].real();
    xy_(m + k - 1) = -r * S_[k - 1].imag();
  }
}

double Chain::refresh() {
  const int n = cfg_.n, m = cfg_.m;
  for (int mu = 0; mu < n; ++mu) {
    const cplx w = std::polar(1.0, theta_[mu]);
    z_[mu] = map_.phi(w);
    logd_[mu] = std::log(std::abs(map_.dphi(w)));
  }
  std::vector<cplx> S(m, cplx{});
  for (int mu = 0; mu < n; ++mu) {
    for (int k = 1; k <= m; ++k) S[k - 1] += std::polar(1.0, -k * theta_[mu]);
  }
  double sdrift = 0.0;
  for (int k = 0; k < m; ++k) sdrift = std::max(sdrift, std::abs(S[k] - S_[k]));
  S_ = std::move(S);
  sync_xy();
  const double e = energy_direct(theta_, map_, cfg_.beta);
  const double edrift = std::abs(e - energy_);
  energy_ = e;
  max_energy_drift_ = std::max(max_energy_drift_, edrift);
  max_power_drift_ = std::max(max_power_drift_, sdrift);
  return std::max(edrift, sdrift);
}

std::optional<double> Chain::delta_energy(int mu, double t) const {
  const cplx w = std::polar(1.0, t);
  const cplx znew = map_.phi(w);
  const cplx zold = z_[mu];
  const int n = cfg_.n;
  double sum_log = 0.0;
  // Squared distances are multiplied in chunks of eight so that only two
  // logarithms are taken per chunk; a chunk that could leave the normal
  // range is summed term by term instead.
  for (int start = 0; start < n; start += 8) {
    const int stop = std::min(n, start + 8);
    double pn = 1.0, pd = 1.0, mn = 1e300, mx = 0.0;
    for (int nu = start; nu < stop; ++nu) {
      if (nu == mu) continue;
      const double num = std::norm(znew - z_[nu]);
      const double den = std::norm(zold - z_[nu]);
      pn *= num;
      pd *= den;
      mn = std::min({mn, num, den});
      mx = std::max({mx, num, den});
    }
    if (mn < kCollision * kCollision) {
      // Either the proposal hits another particle or two old positions
      // coincide; the latter cannot happen in a valid chain.
      for (int nu = start; nu < stop; ++nu)
        if (nu != mu && std::norm(znew - z_[nu]) < kCollision * kCollision) return std::nullopt;
    }
    if (mn > 1e-35 && mx < 1e35) {
      sum_log += std::log(pn) - std::log(pd);
    } else {
      for (int nu = start; nu < stop; ++nu)
        if (nu != mu) sum_log += std::log(std::norm(znew - z_[nu])) - std::log(std::norm(zold - z_[nu]));
    }
  }
  const double dE = 0.5 * cfg_.beta * sum_log + std::log(std::abs(map_.dphi(w))) - logd_[mu];
  if (!std::isfinite(dE)) throw Error(ErrorKind::NonFiniteEnergy, "energy change is not finite");
  return dE;
}

void Chain::move(int mu, double t, double dE) {
  const double old = theta_[mu];
  const cplx w = std::polar(1.0, t);
  theta_[mu] = t;
  z_[mu] = map_.phi(w);
  logd_[mu] = std::log(std::abs(map_.dphi(w)));
  energy_ += dE;
  const cplx step_new = std::polar(1.0, -t), step_old = std::polar(1.0, -old);
  cplx pn = step_new, po = step_old;
  for (int k = 0; k < cfg_.m; ++k) {
    S_[k] += pn - po;
    pn *= step_new;
    po *= step_old;
  }
}

int Chain::sweep() {
  int accepted = 0;
  const int n = cfg_.n;
  for (int i = 0; i < n; ++i) {
    const int mu = std::min(n - 1, static_cast<int>(uniform() * n));
    const double t = wrap_angle(theta_[mu] + delta_ * (2.0 * uniform() - 1.0));
    const double u = 1.0 - uniform();  // (0, 1]
    const auto dE = delta_energy(mu, t);
    if (!dE) continue;
    if (std::log(u) < *dE) {
      move(mu, t, *dE);
      ++accepted;
    }
  }
  sync_xy();
  return accepted;
}

std::vector<double> fekete_deviations(std::span<const double> theta) {
  const std::size_t n = theta.size();
  std::vector<double> t(theta.begin(), theta.end());
  for (auto& v : t) v = wrap_angle(v);
  std::sort(t.begin(), t.end());
  for (std::size_t mu = 0; mu < n; ++mu) t[mu] -= kTwoPi * static_cast<double>(mu) / static_cast<double>(n);
  const double sigma = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(n);
  for (auto& v : t) v -= sigma;
  return t;
}

double fekete_rms(std::span<const double> theta) {
  const auto t = fekete_deviations(theta);
  double s = 0.0;
  for (double v : t) s += v * v;
  return std::sqrt(s / static_cast<double>(t.size()));
}

ChainResult run_chain(const ConformalMap& map_s, const GasConfig& cfg, std::uint64_t seed, const GSpec* g,
                      double a0, const std::vector<Observable>& observables) {
  Chain chain(map_s, cfg, seed);
  ChainResult res;
  res.observables.resize(observables.size());
  const double target = 0.45;
  for (long sweep = 0; sweep < cfg.sweeps; ++sweep) {
    const int acc = chain.sweep();
    const double rate = static_cast<double>(acc) / cfg.n;
    if (sweep < cfg.burn_in) {
      // Robbins-Monro on log(step); frozen once burn-in ends.
      const double gain = 1.0 / std::pow(static_cast<double>(sweep) + 10.0, 0.6);
      const double next = std::exp(std::log(chain.step()) + gain * (rate - target));
      chain.set_step(std::clamp(next, 1e-6, kPi - 1e-12));
    } else {
      res.accepted += acc;
      res.proposed += cfg.n;
    }
    if ((sweep + 1) % 100 == 0) chain.refresh();
    if (sweep >= cfg.burn_in && (sweep - cfg.burn_in) % cfg.thin == 0) {
      SampleRow row;
      row.sweep = sweep;
      row.energy = chain.energy();
      row.acceptance = rate;
      if (g != nullptr) {
        double s = 0.0;
        for (double t : chain.theta()) s += g_value(*g, map_s, t);
        row.linstat = s - cfg.n * a0 / 2.0;
      }
      res.rows.push_back(row);
      const ChainView view{chain.theta(), chain.power_sums(), chain.energy()};
      for (std::size_t i = 0; i < observables.size(); ++i) res.observables[i].push_back(observables[i](view));
      res.w2.push_back(fekete_rms(chain.theta()));
    }
  }
  res.final_step = chain.step();
  res.max_energy_drift = chain.max_energy_drift();
  res.max_power_sum_drift = chain.max_power_sum_drift();
  return res;
}

Estimate batch_means(const std::vector<std::vector<double>>& series, int batches) {
  Estimate e;
  std::vector<double> means, sq_means;
  std::size_t total = 0;
  double sum = 0.0;
  for (const auto& s : series) {
    total += s.size();
    sum += std::accumulate(s.begin(), s.end(), 0.0);
  }
  e.samples = total;
  if (total == 0) return e;
  e.mean = sum / static_cast<double>(total);
  double ss = 0.0;
  for (const auto& s : series)
    for (double v : s) ss += (v - e.mean) * (v - e.mean);
  e.variance = total > 1 ? ss / static_cast<double>(total - 1) : 0.0;

  for (const auto& s : series) {
    const std::size_t b = std::min<std::size_t>(static_cast<std::size_t>(batches), s.size());
    if (b == 0) continue;
    const std::size_t len = s.size() / b;
    for (std::size_t i = 0; i < b; ++i) {
      double m1 = 0.0, m2 = 0.0;
      for (std::size_t j = i * len; j < (i + 1) * len; ++j) {
        m1 += s[j];
        m2 += (s[j] - e.mean) * (s[j] - e.mean);
      }
      means.push_back(m1 / static_cast<double>(len));
      sq_means.push_back(m2 / static_cast<double>(len));
    }
  }
  auto stderr_of = [](const std::vector<double>& v) {
    const double nb = static_cast<double>(v.size());
    if (v.size() < 2) return 0.0;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / nb;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / (nb - 1.0) / nb);
  };
  e.stderr_mean = stderr_of(means);
  e.stderr_variance = stderr_of(sq_means);
  e.ess = e.stderr_mean > 0.0 ? e.variance / (e.stderr_mean * e.stderr_mean) : static_cast<double>(total);
  return e;
}

namespace {

// Runs task(i) for i in [0, count) on up to `threads` workers; the first
// exception (lowest index) is rethrown after all workers finish.
template <typename Task>
void parallel_for(int count, int threads, Task task) {
  std::vector<std::exception_ptr> errors(count);
  auto guarded = [&](int i) {
    try {
      task(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) guarded(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (int i = next++; i < count; i = next++) guarded(i);
      });
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

}  // namespace

McmcRun mcmc_run(const GasConfig& cfg, const ConformalMap& map, double s, const GSpec* g,
                 const std::vector<Observable>& observables, int threads) {
  validate(cfg);
  const ConformalMap map_s = deform(map, s);
  double a0 = 0.0;
  if (g != nullptr) {
    const int m = std::max(cfg.m, 1);
    std::size_t N = 256;
    while (N < 4 * static_cast<std::size_t>(m) || N < 4 * (map_s.num_coeffs() + 1)) N *= 2;
    // Only the mean a0/2 is needed here; a loose tail check keeps rougher g usable.
    std::vector<double> samples(N);
    for (std::size_t i = 0; i < N; ++i) samples[i] = g_value(*g, map_s, kTwoPi * static_cast<double>(i) / N);
    a0 = 2.0 * std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(N);
  }
  McmcRun run;
  run.chains.resize(cfg.chains);
  parallel_for(cfg.chains, threads, [&](int i) {
    run.chains[i] = run_chain(map_s, cfg, cfg.seed ^ static_cast<std::uint64_t>(i), g, a0, observables);
  });

  EstimatorReport& rep = run.report;
  std::vector<std::vector<double>> lin;
  std::vector<double> w2;
  long acc = 0, prop = 0;
  for (const auto& c : run.chains) {
    std::vector<double> v;
    v.reserve(c.rows.size());
    for (const auto& r : c.rows) v.push_back(r.linstat);
    lin.push_back(std::move(v));
    w2.insert(w2.end(), c.w2.begin(), c.w2.end());
    acc += c.accepted;
    prop += c.proposed;
    rep.max_energy_drift = std::max(rep.max_energy_drift, c.max_energy_drift);
    rep.max_power_sum_drift = std::max(rep.max_power_sum_drift, c.max_power_sum_drift);
    rep.final_step.push_back(c.final_step);
  }
  rep.linstat = batch_means(lin);
  for (std::size_t o = 0; o < observables.size(); ++o) {
    std::vector<std::vector<double>> series;
    for (const auto& c : run.chains) series.push_back(c.observables[o]);
    rep.observables.push_back(batch_means(series));
  }
  rep.acceptance = prop > 0 ? static_cast<double>(acc) / static_cast<double>(prop) : 0.0;
  rep.w2_median = median(std::move(w2));
  return run;
}

namespace {

// Sums sum_{tuples} prod |z_i - z_j|^beta prod w_i (and f-weighted) on the grid
// with stride `stride`.
struct TensorSums {
  double D = 0.0;
  double F = 0.0;
};

TensorSums tensor_sums(const std::vector<cplx>& z, const std::vector<double>& w, const std::vector<double>& theta,
                       std::size_t stride, int n, double beta,
                       const std::function<double(std::span<const double>)>& f) {
  const std::size_t N = z.size();
  const double scale = static_cast<double>(stride);
  TensorSums out;
  std::vector<double> th(static_cast<std::size_t>(n));
  if (n == 1) {
    for (std::size_t i = 0; i < N; i += stride) {
      const double v = w[i] * scale;
      out.D += v;
      if (f) {
        th[0] = theta[i];
        out.F += v * f(th);
      }
    }
  } else if (n == 2) {
    for (std::size_t i = 0; i < N; i += stride)
      for (std::size_t j = 0; j < N; j += stride) {
        if (i == j) continue;
        const double v = std::pow(std::abs(z[i] - z[j]), beta) * w[i] * w[j] * scale * scale;
        out.D += v;
        if (f) {
          th[0] = theta[i];
          th[1] = theta[j];
          out.F += v * f(th);
        }
      }
  } else {
    for (std::size_t i = 0; i < N; i += stride)
      for (std::size_t j = 0; j < N; j += stride) {
        if (i == j) continue;
        const double pij = std::pow(std::abs(z[i] - z[j]), beta) * w[i] * w[j];
        for (std::size_t k = 0; k < N; k += stride) {
          if (k == i || k == j) continue;
          const double v = pij * std::pow(std::abs(z[i] - z[k]) * std::abs(z[j] - z[k]), beta) * w[k] *
                           scale * scale * scale;
          out.D += v;
          if (f) {
            th[0] = theta[i];
            th[1] = theta[j];
            th[2] = theta[k];
            out.F += v * f(th);
          }
        }
      }
  }
  const double fact = std::tgamma(static_cast<double>(n) + 1.0);
  out.D /= fact;
  out.F /= fact;
  return out;
}

}  // namespace

BruteForceResult brute_force(const ConformalMap& map, const GSpec* g, double beta, int n, std::size_t N,
                             const std::function<double(std::span<const double>)>& f) {
  if (!(beta > 0.0)) throw Error(ErrorKind::OutOfRange, "beta must be positive");
  if (n < 1 || n > 3) throw Error(ErrorKind::GridExplosion, "brute force supports n <= 3 only");
  if ((n == 2 && N > 512) || (n == 3 && N > 128) || (n == 1 && N > (1u << 20)))
    throw Error(ErrorKind::GridExplosion, "tensor grid exceeds the brute-force budget");
  if (!is_power_of_two(N) || N < 8) throw Error(ErrorKind::GridTooSmall, "grid must be a power of two >= 8");

  const double cap = map.original_capacity();
  std::vector<cplx> z(N);
  std::vector<double> w(N), theta(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    const cplx e = std::polar(1.0, t);
    theta[i] = t;
    z[i] = cap * map.phi(e);
    const double gv = g != nullptr ? g_value(*g, map, t) : 0.0;
    w[i] = std::exp(gv) * cap * std::abs(map.dphi(e)) * kTwoPi / static_cast<double>(N);
  }
  BruteForceResult r;
  r.grid = N;
  const TensorSums fine = tensor_sums(z, w, theta, 1, n, beta, f);
  const bool even_integer = std::fabs(beta / 2.0 - std::round(beta / 2.0)) < 1e-14;
  if (n == 1 || even_integer) {
    r.D = fine.D;
    r.expectation = f ? fine.F / fine.D : 0.0;
    return r;
  }
  // |z_i - z_j|^beta has a kink of order beta on the diagonal; the trapezoid
  // error then starts at h^{beta+1}.
  const TensorSums coarse = tensor_sums(z, w, theta, 2, n, beta, f);
  const double q = std::pow(2.0, beta + 1.0);
  r.D = (q * fine.D - coarse.D) / (q - 1.0);
  const double F = (q * fine.F - coarse.F) / (q - 1.0);
  r.expectation = f ? F / r.D : 0.0;
  r.extrapolated = true;
  return r;
}

double gram_d2(const ConformalMap& map, const GSpec* g, std::size_t N) {
  const double cap = map.original_capacity();
  double M0 = 0.0, M2 = 0.0;
  cplx M1 = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    const cplx e = std::polar(1.0, t);
    const cplx z = cap * map.phi(e);
    const double gv = g != nullptr ? g_value(*g, map, t) : 0.0;
    const double w = std::exp(gv) * cap * std::abs(map.dphi(e)) * kTwoPi / static_cast<double>(N);
    M0 += w;
    M1 += z * w;
    M2 += std::norm(z) * w;
  }
  return M0 * M2 - std::norm(M1);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "need at least one quadrature node");
  // Golub-Welsch: eigenvalues of the Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    nodes[i] = 0.5 * (eig.eigenvalues()(i) + 1.0);
    weights[i] = v0 * v0;  // 2 v0^2 on [-1, 1], halved for [0, 1]
  }
}

double closed_form_log_ratio(const Operators& ops, double beta) {
  const FredholmResult fr = fredholm_det(ops.K);
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < fr.eigenvalues.size(); ++i) logdet += std::log1p(fr.eigenvalues(i));
  const double c = 1.0 - 2.0 / beta;
  double dterm = 0.0;
  if (c != 0.0) dterm = 0.5 * beta * c * c * ops.d.d.dot(solve_resolvent(ops.K, ops.d.d));
  return -0.5 * logdet + dterm;
}

ThermoResult thermo_integrate(const GasConfig& cfg_in, const ConformalMap& map, const GrunskyData& G, int nodes,
                              int threads) {
  if (nodes < 1) throw Error(ErrorKind::OutOfRange, "need at least one node");
  GasConfig cfg = cfg_in;
  cfg.m = G.m;
  validate(cfg);
  ThermoResult out;
  out.log_ratio_closed = closed_form_log_ratio(build_operators(G), cfg.beta);

  std::vector<double> s, w;
  gauss_legendre(nodes, s, w);
  out.nodes.resize(nodes);
  parallel_for(nodes, threads, [&](int i) {
    try {
      const DeformedOperators ops = deformed_operators(G, s[i]);
      const double beta = cfg.beta;
      const Observable integrand = [&](const ChainView& v) {
        return -0.5 * beta * v.xy.dot(ops.Kprime * v.xy) - 2.0 * (1.0 - 0.5 * beta) * ops.dprime.dot(v.xy);
      };
      const ConformalMap map_s = deform(map, s[i]);
      std::vector<std::vector<double>> series;
      long acc = 0, prop = 0;
      for (int c = 0; c < cfg.chains; ++c) {
        const std::uint64_t seed = cfg.seed ^ (static_cast<std::uint64_t>(i) << 32) ^ static_cast<std::uint64_t>(c);
        ChainResult r = run_chain(map_s, cfg, seed, nullptr, 0.0, {integrand});
        series.push_back(std::move(r.observables[0]));
        acc += r.accepted;
        prop += r.proposed;
      }
      const Estimate e = batch_means(series);
      out.nodes[i] = {s[i], w[i], e.mean, e.stderr_mean, prop > 0 ? static_cast<double>(acc) / prop : 0.0};
    } catch (const std::exception& ex) {
      throw Error(ErrorKind::NodeFailure, "thermodynamic node " + std::to_string(i) + ": " + ex.what());
    }
  });
  double var = 0.0;
  for (const auto& node : out.nodes) {
    out.log_ratio_mc += node.weight * node.mean;
    var += node.weight * node.weight * node.stderr_mean * node.stderr_mean;
  }
  out.stderr = std::sqrt(var);
  return out;
}

}  // namespace jgas
