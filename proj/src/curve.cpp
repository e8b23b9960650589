#include "jgas/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "jgas/error.hpp"

namespace jgas {

std::string to_string(CurveFamily family) {
  switch (family) {
    case CurveFamily::circle: return "circle";
    case CurveFamily::ellipse: return "ellipse";
    case CurveFamily::cubic: return "cubic";
    case CurveFamily::laurent: return "laurent";
  }
  return "unknown";
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

ConformalMap::ConformalMap(double original_capacity, std::vector<cplx> coeffs,
                           CurveFamily family, double family_param)
    : original_capacity_(original_capacity),
      coeffs_(std::move(coeffs)),
      family_(family),
      family_param_(family_param) {
  // Trailing zeros carry no information and would only inflate grid requirements.
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

bool ConformalMap::has_real_coeffs() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c.imag() == 0.0; });
}

namespace {

// P(u) = sum_j c_j u^j and its first two derivatives, by Horner.
struct PolyValue {
  cplx p, dp, d2p;
};

PolyValue eval_poly(std::span<const cplx> c, cplx u) {
  PolyValue v{};
  for (std::size_t j = c.size(); j-- > 0;) {
    v.d2p = v.d2p * u + 2.0 * v.dp;
    v.dp = v.dp * u + v.p;
    v.p = v.p * u + c[j];
  }
  return v;
}

}  // namespace

cplx ConformalMap::phi(cplx z) const {
  const cplx u = 1.0 / z;
  return z + eval_poly(coeffs_, u).p;
}

cplx ConformalMap::dphi(cplx z) const {
  const cplx u = 1.0 / z;
  return 1.0 - eval_poly(coeffs_, u).dp * u * u;
}

cplx ConformalMap::d2phi(cplx z) const {
  const cplx u = 1.0 / z;
  const auto v = eval_poly(coeffs_, u);
  const cplx u3 = u * u * u;
  return v.d2p * u3 * u + 2.0 * v.dp * u3;
}

cplx ConformalMap::divided_difference(cplx z, cplx w) const {
  if (z == w) return dphi(z);
  return (phi(z) - phi(w)) / (z - w);
}

namespace {

struct Segment {
  cplx a, b;
  double xmin, xmax;
  std::size_t index;
};

double orient(cplx p, cplx q, cplx r) {
  return (q.real() - p.real()) * (r.imag() - p.imag()) - (q.imag() - p.imag()) * (r.real() - p.real());
}

bool segments_cross(const Segment& s, const Segment& t) {
  const double d1 = orient(s.a, s.b, t.a);
  const double d2 = orient(s.a, s.b, t.b);
  const double d3 = orient(t.a, t.b, s.a);
  const double d4 = orient(t.a, t.b, s.b);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Sweep over x: segments enter in order of their left end and leave once the
// sweep line passes their right end.
bool polygon_self_intersects(const std::vector<cplx>& pts) {
  const std::size_t n = pts.size();
  std::vector<Segment> segs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = pts[i], b = pts[(i + 1) % n];
    segs[i] = {a, b, std::min(a.real(), b.real()), std::max(a.real(), b.real()), i};
  }
  std::vector<Segment> order = segs;
  std::sort(order.begin(), order.end(), [](const Segment& l, const Segment& r) { return l.xmin < r.xmin; });
  std::vector<Segment> active;
  for (const auto& s : order) {
    std::erase_if(active, [&](const Segment& t) { return t.xmax < s.xmin; });
    for (const auto& t : active) {
      const std::size_t d = s.index > t.index ? s.index - t.index : t.index - s.index;
      if (d <= 1 || d == n - 1) continue;  // neighbours share an endpoint
      const double ymin_s = std::min(s.a.imag(), s.b.imag()), ymax_s = std::max(s.a.imag(), s.b.imag());
      const double ymin_t = std::min(t.a.imag(), t.b.imag()), ymax_t = std::max(t.a.imag(), t.b.imag());
      if (ymax_s < ymin_t || ymax_t < ymin_s) continue;
      if (segments_cross(s, t)) return true;
    }
    active.push_back(s);
  }
  return false;
}

}  // namespace

UnivalenceReport check_univalence(const ConformalMap& map, std::size_t grid) {
  UnivalenceReport rep;
  rep.grid = grid;
  std::vector<cplx> pts(grid), dp(grid);
  rep.min_abs_dphi = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid; ++i) {
    const cplx z = std::polar(1.0, kTwoPi * static_cast<double>(i) / static_cast<double>(grid));
    pts[i] = map.phi(z);
    dp[i] = map.dphi(z);
    rep.min_abs_dphi = std::min(rep.min_abs_dphi, std::abs(dp[i]));
    rep.max_abs_phi = std::max(rep.max_abs_phi, std::abs(pts[i]));
  }
  double area = 0.0, turn = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const std::size_t k = (i + 1) % grid;
    area += 0.5 * (std::conj(pts[i]) * pts[k]).imag();
    if (std::abs(dp[i]) > 0 && std::abs(dp[k]) > 0) turn += std::arg(dp[k] / dp[i]);
  }
  rep.signed_area = area;
  rep.dphi_winding = static_cast<int>(std::lround(turn / kTwoPi));
  rep.self_intersection = polygon_self_intersects(pts);
  return rep;
}

ConformalMap make_curve(const CurveSpec& spec) {
  std::vector<cplx> coeffs;
  double cap = 1.0;
  double param = 0.0;
  switch (spec.type) {
    case CurveFamily::circle:
      break;
    case CurveFamily::ellipse:
      param = spec.c;
      coeffs = {0.0, spec.c};
      break;
    case CurveFamily::cubic:
      param = spec.c;
      coeffs = {0.0, 0.0, spec.c};
      break;
    case CurveFamily::laurent: {
      cap = spec.cap;
      if (!(cap > 0.0) || !std::isfinite(cap))
        throw Error(ErrorKind::OutOfRange, "laurent capacity must be positive and finite");
      int jmax = -1;
      for (const auto& t : spec.terms) {
        if (t.j < 0) throw Error(ErrorKind::InvalidConfig, "laurent term index must be >= 0");
        if (!std::isfinite(t.c.real()) || !std::isfinite(t.c.imag()))
          throw Error(ErrorKind::InvalidConfig, "laurent coefficient is not finite");
        jmax = std::max(jmax, t.j);
      }
      coeffs.assign(static_cast<std::size_t>(jmax + 1), cplx{});
      for (const auto& t : spec.terms) coeffs[static_cast<std::size_t>(t.j)] += t.c / cap;
      break;
    }
  }
  if (!std::isfinite(param)) throw Error(ErrorKind::InvalidConfig, "curve parameter is not finite");
  ConformalMap map(cap, std::move(coeffs), spec.type, param);
  const auto cert = check_univalence(map, 4096);
  if (!cert.ok()) {
    std::string why = cert.self_intersection ? "boundary self-intersects"
                      : cert.min_abs_dphi <= 1e-8 ? "phi' vanishes on the circle"
                                                   : "boundary is not positively oriented or phi' winds";
    throw Error(ErrorKind::NonUnivalent, why);
  }
  return map;
}

ConformalMap deform(const ConformalMap& map, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorKind::OutOfRange, "deformation parameter must lie in [0,1]");
  std::vector<cplx> c(map.coeffs().begin(), map.coeffs().end());
  double sp = s;  // s^{j+1}
  for (auto& cj : c) {
    cj *= sp;
    sp *= s;
  }
  double param = map.family_param();
  if (map.family() == CurveFamily::ellipse) param *= s * s;
  if (map.family() == CurveFamily::cubic) param *= s * s * s;
  return ConformalMap(map.original_capacity(), std::move(c), map.family(), param);
}

CurveSamples sample_curve(const ConformalMap& map, std::size_t N) {
  if (!is_power_of_two(N)) throw Error(ErrorKind::GridTooSmall, "grid size must be a power of two");
  if (N < 4 * (map.num_coeffs() + 1)) throw Error(ErrorKind::GridTooSmall, "grid too small for the Laurent series");
  CurveSamples out;
  out.N = N;
  out.theta.resize(N);
  out.z.resize(N);
  out.dphi.resize(N);
  out.log_abs_dphi.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double t = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    const cplx e = std::polar(1.0, t);
    out.theta[i] = t;
    out.z[i] = map.phi(e);
    out.dphi[i] = map.dphi(e);
    out.log_abs_dphi[i] = std::log(std::abs(out.dphi[i]));
  }
  return out;
}

double curve_length(const ConformalMap& map, std::size_t grid) {
  double sum = 0.0;
  for (std::size_t i = 0; i < grid; ++i)
    sum += std::abs(map.dphi(std::polar(1.0, kTwoPi * static_cast<double>(i) / static_cast<double>(grid))));
  return sum * kTwoPi / static_cast<double>(grid);
}

}  // namespace jgas
