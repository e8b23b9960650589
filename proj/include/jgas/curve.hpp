#pragma once

// Jordan curves given by the exterior conformal map
//
//   phi(z) = cap * z + sum_{j >= 0} c_j z^{-j},   |z| >= 1,
//
// stored as a finite Laurent series normalized to capacity one.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jgas {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class CurveFamily { circle, ellipse, cubic, laurent };

std::string to_string(CurveFamily family);

struct LaurentTerm {
  int j = 0;  // power of z^{-1}
  cplx c;
};

// Input description of a curve, mirrors the curve-spec JSON object.
struct CurveSpec {
  CurveFamily type = CurveFamily::circle;
  double c = 0.0;                  // ellipse / cubic parameter
  double cap = 1.0;                // laurent only
  std::vector<LaurentTerm> terms;  // laurent only
};

class ConformalMap {
 public:
  ConformalMap() = default;
  ConformalMap(double original_capacity, std::vector<cplx> coeffs, CurveFamily family,
               double family_param = 0.0);

  // Capacity of the stored (normalized) map; always one.
  double capacity() const { return 1.0; }
  // Capacity of the curve as it was specified, before normalization.
  double original_capacity() const { return original_capacity_; }
  CurveFamily family() const { return family_; }
  double family_param() const { return family_param_; }

  // c_j for j = 0..size()-1 of the normalized map.
  std::span<const cplx> coeffs() const { return coeffs_; }
  std::size_t num_coeffs() const { return coeffs_.size(); }
  bool has_real_coeffs() const;

  cplx phi(cplx z) const;
  cplx dphi(cplx z) const;
  cplx d2phi(cplx z) const;

  // (phi(z) - phi(w)) / (z - w), with phi'(z) on the diagonal.
  cplx divided_difference(cplx z, cplx w) const;

  // Boundary helpers at z = e^{i theta}.
  cplx boundary_point(double theta) const { return phi(std::polar(1.0, theta)); }
  double log_abs_dphi(double theta) const { return std::log(std::abs(dphi(std::polar(1.0, theta)))); }

 private:
  double original_capacity_ = 1.0;
  std::vector<cplx> coeffs_;
  CurveFamily family_ = CurveFamily::circle;
  double family_param_ = 0.0;
};

struct UnivalenceReport {
  std::size_t grid = 0;
  double min_abs_dphi = 0.0;
  double max_abs_phi = 0.0;
  double signed_area = 0.0;
  int dphi_winding = 0;
  bool self_intersection = false;

  bool ok() const {
    return !self_intersection && min_abs_dphi > 1e-8 && signed_area > 0.0 && dphi_winding == 0;
  }
};

// Grid-scale univalence certificate: no self-intersection of the sampled
// boundary polygon, positive orientation, phi' bounded away from zero and
// without winding around the origin.
UnivalenceReport check_univalence(const ConformalMap& map, std::size_t grid = 4096);

// Normalizes to capacity one and verifies univalence; throws NonUnivalent.
ConformalMap make_curve(const CurveSpec& spec);

// phi_s(z) = s * phi(z / s): c_j -> s^{j+1} c_j.
ConformalMap deform(const ConformalMap& map, double s);

struct CurveSamples {
  std::size_t N = 0;
  std::vector<double> theta;
  std::vector<cplx> z;
  std::vector<cplx> dphi;
  std::vector<double> log_abs_dphi;
};

CurveSamples sample_curve(const ConformalMap& map, std::size_t N);

bool is_power_of_two(std::size_t n);

// Length of phi(T), by trapezoid on `grid` points.
double curve_length(const ConformalMap& map, std::size_t grid);

}  // namespace jgas
