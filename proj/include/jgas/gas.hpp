#pragma once

// Metropolis sampling of the Coulomb gas on a curve in the angle
// parametrization theta -> phi(e^{i theta}), the brute-force quadrature
// oracle for tiny n, and thermodynamic integration along phi_s.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "jgas/boundary.hpp"
#include "jgas/curve.hpp"
#include "jgas/grunsky.hpp"

namespace jgas {

struct GasConfig {
  int n = 16;
  double beta = 2.0;
  int m = 32;  // power sums kept for k <= m
  long sweeps = 10000;
  long burn_in = 1000;
  long thin = 1;
  double step_delta = 0.5;
  std::uint64_t seed = 1;
  int chains = 1;
};

// Throws InvalidConfig / OutOfRange.
void validate(const GasConfig& cfg);

enum class EnergyMode { direct, grunsky };

// log-density of the angles. direct mode uses map_s = deform(map, s) and its
// closed-form evaluation; grunsky mode uses the coefficients of G scaled to s.
// Throws Collision when two angles coincide to 1e-12.
double energy_direct(std::span<const double> theta, const ConformalMap& map_s, double beta);
double energy_grunsky(std::span<const double> theta, const ConformalMap& map_s, const GrunskyData& G, double s,
                      double beta);
double energy(std::span<const double> theta, const ConformalMap& map, double beta, EnergyMode mode, double s,
              const GrunskyData* G = nullptr);

// (X, Y) with X_k = sum_mu cos(k theta_mu)/sqrt(k), Y_k likewise with sin.
Eigen::VectorXd power_sum_vector(std::span<const double> theta, int m);

// Read-only view of the chain handed to observables at each retained sample.
struct ChainView {
  std::span<const double> theta;
  const Eigen::VectorXd& xy;  // current (X, Y), length 2m
  double energy;
};

using Observable = std::function<double(const ChainView&)>;

struct SampleRow {
  long sweep = 0;
  double energy = 0.0;
  double acceptance = 0.0;  // fraction accepted in this sweep
  double linstat = 0.0;
};

// Metropolis chain with single-site uniform-window proposals on the gas for
// map_s. Adaptation of the window runs only during burn-in.
class Chain {
 public:
  Chain(const ConformalMap& map_s, const GasConfig& cfg, std::uint64_t seed);

  // One sweep = n proposals. Returns the number accepted.
  int sweep();

  std::span<const double> theta() const { return theta_; }
  const Eigen::VectorXd& power_sums() const { return xy_; }
  double energy() const { return energy_; }
  double step() const { return delta_; }
  void set_step(double delta) { delta_ = delta; }
  // Recomputes caches from scratch, returning the largest drift seen.
  double refresh();
  double max_energy_drift() const { return max_energy_drift_; }
  double max_power_sum_drift() const { return max_power_drift_; }

  // Change in energy from moving particle mu to angle t. Returns nullopt on collision.
  std::optional<double> delta_energy(int mu, double t) const;
  void move(int mu, double t, double dE);

  double uniform();

 private:
  const ConformalMap& map_;
  GasConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<double> theta_;
  std::vector<cplx> z_;
  std::vector<double> logd_;
  std::vector<cplx> S_;  // sum_mu e^{-ik theta_mu}
  Eigen::VectorXd xy_;
  double energy_ = 0.0;
  double delta_ = 0.5;
  double max_energy_drift_ = 0.0;
  double max_power_drift_ = 0.0;

  void sync_xy();
};

struct ChainResult {
  std::vector<SampleRow> rows;
  std::vector<std::vector<double>> observables;  // [observable][sample]
  long accepted = 0;
  long proposed = 0;
  double final_step = 0.0;
  double max_energy_drift = 0.0;
  double max_power_sum_drift = 0.0;
  std::vector<double> w2;  // rms of t_mu at each retained sample
};

ChainResult run_chain(const ConformalMap& map_s, const GasConfig& cfg, std::uint64_t seed, const GSpec* g,
                      double a0, const std::vector<Observable>& observables = {});

struct Estimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
  double variance = 0.0;
  double stderr_variance = 0.0;
  double ess = 0.0;
  std::size_t samples = 0;
};

// Batch means with 32 batches per series; series are concatenated batchwise.
Estimate batch_means(const std::vector<std::vector<double>>& series, int batches = 32);

struct EstimatorReport {
  Estimate linstat;
  std::vector<Estimate> observables;
  double acceptance = 0.0;
  double w2_median = 0.0;
  double max_energy_drift = 0.0;
  double max_power_sum_drift = 0.0;
  std::vector<double> final_step;
};

struct McmcRun {
  std::vector<ChainResult> chains;
  EstimatorReport report;
};

// Runs cfg.chains chains (chain i seeded with seed xor i) on deform(map, s)
// using up to `threads` worker threads. Chain results are ordered by index.
McmcRun mcmc_run(const GasConfig& cfg, const ConformalMap& map, double s, const GSpec* g,
                 const std::vector<Observable>& observables = {}, int threads = 1);

// t_mu = theta_(mu) - 2 pi mu / n - sigma_n on the sorted sample, with sigma_n
// making sum t_mu = 0. A cyclic relabeling shifts every t_mu by the same
// constant, so the centered values do not depend on where the labels start.
std::vector<double> fekete_deviations(std::span<const double> theta);
double fekete_rms(std::span<const double> theta);

struct BruteForceResult {
  double D = 0.0;            // D_n^beta[e^g]
  double expectation = 0.0;  // E[f] under the e^g-tilted density
  std::size_t grid = 0;
  bool extrapolated = false;
};

// Tensor trapezoid rule in theta, with Richardson extrapolation over N and
// N/2 when beta is not an even integer. Throws GridExplosion beyond N = 512
// (n = 2) or N = 128 (n = 3).
BruteForceResult brute_force(const ConformalMap& map, const GSpec* g, double beta, int n, std::size_t N,
                             const std::function<double(std::span<const double>)>& f = {});

// Independent closed form at beta = 2, n = 2: D_2 = M0 M2 - |M1|^2 with
// moments M_j of phi against e^g |phi'| d theta.
double gram_d2(const ConformalMap& map, const GSpec* g, std::size_t N);

struct ThermoNode {
  double s = 0.0;
  double weight = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  double acceptance = 0.0;
};

struct ThermoResult {
  double log_ratio_mc = 0.0;
  double stderr = 0.0;
  double log_ratio_closed = 0.0;
  std::vector<ThermoNode> nodes;
};

// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

double closed_form_log_ratio(const Operators& ops, double beta);

// Throws NodeFailure when a node's chain fails.
ThermoResult thermo_integrate(const GasConfig& cfg, const ConformalMap& map, const GrunskyData& G, int nodes,
                              int threads = 1);

}  // namespace jgas
