#pragma once

// Test functions transported to the unit circle, the resolvent of I + K, the
// solution h of the integral equation, and the closed-form asymptotics built
// from them.

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "jgas/curve.hpp"
#include "jgas/grunsky.hpp"

namespace jgas {

enum class GKind { fourier, re_z, im_z, log_abs_psi_prime };

std::string to_string(GKind kind);

// g-spec JSON object. For re_z / im_z, g(z) = Re z^p or Im z^p in the
// coordinates of the curve as specified (original capacity). fourier gives
// G(theta) directly.
struct GSpec {
  GKind type = GKind::fourier;
  double a0 = 0.0;
  std::vector<double> a, b;  // a[k-1] multiplies cos k theta
  int p = 1;
};

// g at the boundary point phi(e^{i theta}).
double g_value(const GSpec& g, const ConformalMap& map, double theta);

struct BoundarySeries {
  int m = 0;
  double a0 = 0.0;
  Eigen::VectorXd a, b;  // a(k-1) = a_k
  Eigen::VectorXd gvec;  // (sqrt(k)/2 a_k ; sqrt(k)/2 b_k)
  double tail = 0.0;     // sum_{k>m} k (a_k^2 + b_k^2) on the sampling grid
  double total = 0.0;    // same sum over every resolved mode

  // a0/2 + sum a_k cos k theta + b_k sin k theta
  double evaluate(double theta) const;
};

BoundarySeries make_series(double a0, Eigen::VectorXd a, Eigen::VectorXd b);

// Throws TailTooLarge when the discarded energy exceeds 1e-8 of the total.
BoundarySeries analyze_g(const GSpec& g, const ConformalMap& map, int m, std::size_t N);

// alpha cos + beta sin -> -beta cos + alpha sin; the mean is dropped.
BoundarySeries conjugate(const BoundarySeries& F);

// (I + K) x = v by Cholesky; throws IllConditioned when 1 - kappa < 1e-6.
Eigen::VectorXd solve_resolvent(const KOperator& K, const Eigen::VectorXd& v);
Eigen::VectorXcd solve_resolvent(const KOperator& K, const Eigen::VectorXcd& v);

// (x, y) -> (-y, x)
Eigen::VectorXd rotate_l(const Eigen::VectorXd& v);

struct HSolution {
  int m = 0;
  double beta = 2.0;
  Eigen::VectorXd hvec;

  double H(double theta) const;
  double Hprime(double theta) const;
  double Htilde(double theta) const;  // conjugate function of H
};

HSolution solve_h(const KOperator& K, const BoundarySeries& g, double beta);

// max | -g - (beta/2)(I+K) L h | over entries, relative to max |g|.
double fourier_form_residual(const KOperator& K, const BoundarySeries& g, const HSolution& h);

// Sup over the grid of the integral-equation residual, with the principal
// value split into the conjugate-function multiplier plus a smooth kernel.
double residual_inteq(const ConformalMap& map, const BoundarySeries& g, const HSolution& h, std::size_t N);

double log_selberg(int n, double beta);

struct LogRatioTerms {
  int n = 0;
  double selberg = 0.0;
  double capacity_term = 0.0;
  double mean_term = 0.0;         // n a0 / 2
  double det_term = 0.0;          // -1/2 log det(I+K)
  double quadratic_term = 0.0;    // (2/beta) g_beta^T (I+K)^{-1} g_beta
  double log_D = 0.0;             // sum of all of the above
};

struct Prediction {
  double beta = 2.0;
  double mu = 0.0;
  double sigma2 = 0.0;
  std::vector<LogRatioTerms> terms;
};

Prediction predict(const KOperator& K, const DVector& d, const BoundarySeries& g, double beta,
                   const std::vector<int>& n_list, double capacity = 1.0);

// (2/beta) g_beta^T (I+K)^{-1} g_beta for complex g, using the bilinear
// (non-conjugating) transpose.
cplx quadratic_exponent(const KOperator& K, const DVector& d, const Eigen::VectorXcd& g, double beta);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

IdentityCheck identity_lemma_gvar(const ConformalMap& map, const BoundarySeries& g, const HSolution& h,
                                  const DVector& d, const KOperator& K, double beta, std::size_t N);

}  // namespace jgas
