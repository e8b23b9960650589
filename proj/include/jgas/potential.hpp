#pragma once

// Boundary-integral oracles on the curve itself: a Nystrom discretization of
// the Neumann-Poincare operator, an interior Dirichlet solve through a
// double-layer potential, and the Plemelj jump of the single layer.

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <vector>

#include "jgas/boundary.hpp"
#include "jgas/curve.hpp"

namespace jgas {

struct NystromGrid {
  std::size_t N = 0;
  std::vector<double> theta;
  std::vector<cplx> zeta;       // phi(e^{i theta})
  std::vector<cplx> dzeta;      // d zeta / d theta
  std::vector<double> weight;   // |phi'| 2pi/N
  std::vector<cplx> tangent;    // unit tangent
  std::vector<cplx> normal;     // outward unit normal
  std::vector<double> curvature;

  double length() const;
};

// Throws QuadratureDivergence when curvature cannot be evaluated.
NystromGrid make_nystrom_grid(const ConformalMap& map, std::size_t N);

// (1/pi) d/dnu_zeta log|z - zeta| with the curvature limit on the diagonal.
Eigen::MatrixXd np_matrix(const NystromGrid& grid);

// The Nystrom NP operator in the basis cos(k theta)/sqrt(k), sin(k theta)/sqrt(k).
Eigen::MatrixXd np_fourier_matrix(const ConformalMap& map, int m, std::size_t N);

struct DirichletEnergies {
  double interior = 0.0;        // E_-
  double exterior = 0.0;        // E_+, from the Fourier series by conformal invariance
  double boundary_residual = 0.0;  // max |Re F_- - G| on the grid
};

// Throws SolveFailure when the second-kind system is singular.
DirichletEnergies interior_dirichlet_energy(const ConformalMap& map, const GSpec& g, const BoundarySeries& series,
                                            std::size_t N);

// (beta/(8 pi)) \int g dh/ds ds.
double neumann_jump_energy(const ConformalMap& map, const BoundarySeries& g, const HSolution& h, std::size_t N);

struct PlemeljCheck {
  double max_error = 0.0;  // max |(dS_+/dnu - dS_-/dnu) + f| over targets
  double max_side_error = 0.0;  // each one-sided limit against direct value -/+ f/2
};

// Single-layer potential of the density f(theta) (per unit arclength),
// normal derivatives from both sides approached along the normal.
PlemeljCheck plemelj_check(const ConformalMap& map, const std::function<double(double)>& density,
                           std::size_t targets = 32, std::size_t fine_grid = 65536);

}  // namespace jgas
