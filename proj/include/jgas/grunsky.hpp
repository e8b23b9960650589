#pragma once

// Grunsky coefficients a_kl of an exterior map, defined by
//
//   log[(phi(z) - phi(w)) / (z - w)] = log cap - sum_{k,l>=1} a_kl z^{-k} w^{-l},
//
// and the operators assembled from them: B = (sqrt(kl) a_kl), the real
// symmetric K = [[Re B, Im B], [Im B, -Re B]] and the vector d that encodes
// log|phi'| on the circle.

#include <Eigen/Dense>
#include <cstddef>
#include <string>

#include "jgas/curve.hpp"

namespace jgas {

enum class GrunskyMethod { boundary_fft, offcircle_fft };

std::string to_string(GrunskyMethod method);

// Power-law envelope |a_kl| <= scale * max(k,l)^{-exponent}, fitted on the
// top quartile of shells max(k,l) = K.
struct TailFit {
  double scale = 0.0;
  double exponent = 0.0;
  double noise_floor = 0.0;
  bool resolved = false;  // false when the top quartile sits at the noise floor
  double tail = 0.0;      // estimate of sum_{max(k,l) > m} kl |a_kl|

  double envelope(int k, int l) const;
};

TailFit fit_tail(const Eigen::MatrixXcd& a);

struct GrunskyData {
  int m = 0;
  Eigen::MatrixXcd a;  // a(k-1, l-1) = a_kl
  GrunskyMethod method = GrunskyMethod::boundary_fft;
  double tail = 0.0;
  TailFit fit;
  double asymmetry = 0.0;  // max |a_kl - a_lk| before symmetrization
  std::size_t grid = 0;
  double radius = 1.0;
};

GrunskyData compute_grunsky(const ConformalMap& map, int m, GrunskyMethod method = GrunskyMethod::boundary_fft,
                            std::size_t N = 1024, double radius = 1.25);

// Closed forms used as oracles in tests and verification.
GrunskyData grunsky_from_matrix(Eigen::MatrixXcd a);

struct KOperator {
  int m = 0;
  Eigen::MatrixXcd B;
  Eigen::MatrixXd K;  // 2m x 2m
  double kappa = 0.0;
};

struct DVector {
  int m = 0;
  Eigen::VectorXd d;  // 2m, x-block then y-block
};

struct Operators {
  KOperator K;
  DVector d;
};

// Throws KappaGeOne when ||B|| >= 1.
Operators build_operators(const GrunskyData& G);

struct FredholmResult {
  double det_I_plus_K = 1.0;
  double det_I_minus_BBstar = 1.0;
  double log_det = 0.0;  // log det(I - BB*)
  double loewner_energy = 0.0;
  double pairing_error = 0.0;  // eigenvalues of K vs +- singular values of B
  Eigen::VectorXd eigenvalues;
};

// det(I+K) from the symmetric eigendecomposition, cross-checked against a
// Cholesky factorization of I - BB*. Throws CrossCheckFailure.
FredholmResult fredholm_det(const KOperator& K, double tail = 0.0);

struct DeformedOperators {
  KOperator K;
  DVector d;
  Eigen::MatrixXd Kprime;
  Eigen::VectorXd dprime;
};

// Operators of phi_s(z) = s phi(z/s), where a_kl(s) = s^{k+l} a_kl.
DeformedOperators deformed_operators(const GrunskyData& G, double s);

// (x_theta, y_theta) with entries cos(k theta)/sqrt(k), sin(k theta)/sqrt(k).
Eigen::VectorXd basis_vector(int m, double theta);

}  // namespace jgas
