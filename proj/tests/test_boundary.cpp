#include <doctest.h>

#include <cmath>
#include <random>

#include "jgas/boundary.hpp"
#include "jgas/curve.hpp"
#include "jgas/error.hpp"
#include "jgas/grunsky.hpp"

using namespace jgas;

namespace {

ConformalMap family(CurveFamily f, double c) {
  CurveSpec s;
  s.type = f;
  s.c = c;
  return make_curve(s);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a jgas::Error");
  return ErrorKind::EmptySpec;
}

GSpec re_z(int p = 1) {
  GSpec g;
  g.type = GKind::re_z;
  g.p = p;
  return g;
}

GSpec cos_mode(int k, double amp = 1.0) {
  GSpec g;
  g.a.assign(static_cast<std::size_t>(k), 0.0);
  g.a.back() = amp;
  return g;
}

Operators ops_for(const ConformalMap& map, int m) {
  return build_operators(compute_grunsky(map, m, GrunskyMethod::boundary_fft, 8 * static_cast<std::size_t>(m)));
}

}  // namespace

TEST_CASE("analyze_g on the analytic families") {
  const double c = 0.3;
  const BoundarySeries e = analyze_g(re_z(), family(CurveFamily::ellipse, c), 16, 128);
  CHECK(std::abs(e.a0) < 1e-15);
  CHECK(e.a(0) == doctest::Approx(1.0 + c).epsilon(1e-14));
  CHECK(e.a.tail(15).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(e.b.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(e.gvec(0) == doctest::Approx((1.0 + c) / 2).epsilon(1e-14));

  GSpec one;
  one.a0 = 2.0;
  const BoundarySeries u = analyze_g(one, family(CurveFamily::ellipse, c), 8, 64);
  CHECK(u.a0 == doctest::Approx(2.0));
  CHECK(u.a.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(u.gvec.cwiseAbs().maxCoeff() < 1e-15);

  const double cc = 0.1;
  const BoundarySeries k = analyze_g(re_z(3), family(CurveFamily::cubic, cc), 16, 128);
  CHECK(k.a0 / 2 == doctest::Approx(3 * cc).epsilon(1e-13));
  CHECK(k.a(2) == doctest::Approx(1 + 3 * cc * cc).epsilon(1e-13));
  CHECK(k.a(5) == doctest::Approx(cc * cc * cc).epsilon(1e-12));
  CHECK(std::abs(k.a(0)) < 1e-14);
  CHECK(k.tail < 1e-28);
}

TEST_CASE("re_z uses the curve as specified") {
  CurveSpec s;
  s.type = CurveFamily::laurent;
  s.cap = 2.0;
  s.terms = {{1, cplx(0.4)}};
  const ConformalMap map = make_curve(s);  // 2z + 0.4/z
  const BoundarySeries F = analyze_g(re_z(), map, 8, 64);
  CHECK(F.a(0) == doctest::Approx(2.4).epsilon(1e-14));
  GSpec g;
  g.type = GKind::log_abs_psi_prime;
  const BoundarySeries L = analyze_g(g, map, 16, 128);
  CHECK(L.a0 / 2 == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("series evaluation and validation") {
  const ConformalMap map = family(CurveFamily::ellipse, 0.2);
  GSpec g;
  g.a0 = 0.4;
  g.a = {0.3, 0.0, -0.1};
  g.b = {0.0, 0.25};
  const BoundarySeries F = analyze_g(g, map, 8, 64);
  for (double t : {0.0, 0.7, 2.5, 5.9}) CHECK(F.evaluate(t) == doctest::Approx(g_value(g, map, t)).epsilon(1e-14));

  CHECK(kind_of([&] { analyze_g(g, map, 8, 16); }) == ErrorKind::GridTooSmall);
  CHECK(kind_of([&] { analyze_g(g, map, 0, 64); }) == ErrorKind::OutOfRange);
  // A mode beyond m carries far more than 1e-8 of the energy.
  CHECK(kind_of([&] { analyze_g(cos_mode(12), map, 8, 64); }) == ErrorKind::TailTooLarge);
  GSpec neg = re_z(-1);
  CHECK(kind_of([&] { analyze_g(neg, map, 8, 64); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("conjugate function") {
  const ConformalMap circle = make_curve(CurveSpec{});
  const BoundarySeries F = analyze_g(cos_mode(3), circle, 8, 64);
  const BoundarySeries C = conjugate(F);
  CHECK(C.b(2) == doctest::Approx(1.0));
  CHECK(C.a.cwiseAbs().maxCoeff() < 1e-15);

  GSpec k;
  k.a0 = 5.0;
  CHECK(conjugate(analyze_g(k, circle, 8, 64)).gvec.cwiseAbs().maxCoeff() == 0.0);

  GSpec g;
  g.a0 = 1.0;
  g.a = {0.2, -0.3};
  g.b = {0.5, 0.0, 0.1};
  const BoundarySeries G = analyze_g(g, circle, 8, 64);
  const BoundarySeries CC = conjugate(conjugate(G));
  CHECK((CC.a + G.a).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((CC.b + G.b).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(CC.a0 == 0.0);
}

TEST_CASE("resolvent") {
  KOperator zero;
  zero.m = 4;
  zero.B = Eigen::MatrixXcd::Zero(4, 4);
  zero.K = Eigen::MatrixXd::Zero(8, 8);
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(8, -1.0, 2.0);
  CHECK((solve_resolvent(zero, v) - v).cwiseAbs().maxCoeff() == 0.0);

  const double c = 0.35;
  const int m = 16;
  const Operators ops = ops_for(family(CurveFamily::ellipse, c), m);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2 * m);
  e1(0) = 1.0;
  Eigen::VectorXd x = solve_resolvent(ops.K, e1);
  CHECK(x(0) == doctest::Approx(1.0 / (1.0 + c)).epsilon(1e-14));
  x(0) = 0.0;
  CHECK(x.cwiseAbs().maxCoeff() < 1e-15);
  Eigen::VectorXd f1 = Eigen::VectorXd::Zero(2 * m);
  f1(m) = 1.0;
  CHECK(solve_resolvent(ops.K, f1)(m) == doctest::Approx(1.0 / (1.0 - c)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Eigen::VectorXd r(2 * m);
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = nd(rng);
  const Eigen::VectorXd y = solve_resolvent(ops.K, r);
  CHECK((y + ops.K.K * y - r).cwiseAbs().maxCoeff() < 1e-14);

  Eigen::VectorXcd rc = r.cast<cplx>() * cplx(0.3, -1.1);
  const Eigen::VectorXcd yc = solve_resolvent(ops.K, rc);
  CHECK((yc + ops.K.K.cast<cplx>() * yc - rc).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("resolvent refuses a nearly singular operator") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(0, 0) = 1.0 - 1e-7;
  const Operators ops = build_operators(grunsky_from_matrix(a));
  CHECK(kind_of([&] { solve_resolvent(ops.K, Eigen::VectorXd(Eigen::VectorXd::Ones(6))); }) == ErrorKind::IllConditioned);
}

TEST_CASE("rotate_l") {
  Eigen::VectorXd v(4);
  v << 1, 2, 3, 4;
  const Eigen::VectorXd w = rotate_l(v);
  CHECK(w(0) == -3);
  CHECK(w(1) == -4);
  CHECK(w(2) == 1);
  CHECK(w(3) == 2);
}

TEST_CASE("solve_h examples") {
  const int m = 16;
  const ConformalMap circle = make_curve(CurveSpec{});
  const Operators c0 = ops_for(circle, m);
  GSpec g;
  g.a = {0.7, 0.0, -0.2};
  g.b = {0.1, 0.4};
  const BoundarySeries G = analyze_g(g, circle, m, 128);
  const HSolution h = solve_h(c0.K, G, 2.0);
  const BoundarySeries Gt = conjugate(G);
  for (double t : {0.0, 0.4, 1.9, 3.3, 5.0}) CHECK(std::abs(h.H(t) - Gt.evaluate(t)) < 1e-14);
  // Htilde is the conjugate of H, and g = -Htilde for the circle at beta = 2.
  for (double t : {0.2, 2.2}) CHECK(std::abs(h.Htilde(t) + G.evaluate(t)) < 1e-14);

  const double c = 0.3;
  const ConformalMap e = family(CurveFamily::ellipse, c);
  const Operators eo = ops_for(e, m);
  const BoundarySeries R = analyze_g(re_z(), e, m, 128);
  for (double beta : {1.0, 2.0, 4.0}) {
    const HSolution he = solve_h(eo.K, R, beta);
    for (double t : {0.1, 1.0, 2.5}) {
      CHECK(std::abs(he.H(t) - (2.0 / beta) * std::sin(t)) < 1e-14);
      CHECK(std::abs(he.Hprime(t) - (2.0 / beta) * std::cos(t)) < 1e-14);
    }
    CHECK(fourier_form_residual(eo.K, R, he) < 1e-14);
  }

  GSpec zero;
  const HSolution hz = solve_h(eo.K, analyze_g(zero, e, m, 128), 2.0);
  CHECK(hz.hvec.cwiseAbs().maxCoeff() == 0.0);

  CHECK(kind_of([&] { solve_h(eo.K, R, 0.0); }) == ErrorKind::OutOfRange);
  CHECK(kind_of([&] { solve_h(eo.K, analyze_g(re_z(), e, 8, 128), 2.0); }) == ErrorKind::InvalidConfig);
}

TEST_CASE("integral equation residual") {
  {
    const ConformalMap circle = make_curve(CurveSpec{});
    const Operators ops = ops_for(circle, 8);
    const BoundarySeries G = analyze_g(cos_mode(1), circle, 8, 64);
    CHECK(residual_inteq(circle, G, solve_h(ops.K, G, 2.0), 64) <= 1e-12);
  }
  {
    const ConformalMap e = family(CurveFamily::ellipse, 0.3);
    const Operators ops = ops_for(e, 128);
    const BoundarySeries G = analyze_g(re_z(), e, 128, 1024);
    for (double beta : {1.0, 2.0, 4.0}) CHECK(residual_inteq(e, G, solve_h(ops.K, G, beta), 1024) <= 1e-6);
    GSpec zero;
    const BoundarySeries Z = analyze_g(zero, e, 128, 1024);
    CHECK(residual_inteq(e, Z, solve_h(ops.K, Z, 2.0), 1024) == 0.0);
  }
  {
    // A curve without symmetry and a multi-mode g.
    CurveSpec s;
    s.type = CurveFamily::laurent;
    s.terms = {{1, cplx(0.2, 0.1)}, {2, cplx(-0.05, 0.04)}};
    const ConformalMap map = make_curve(s);
    const Operators ops = ops_for(map, 64);
    GSpec g = re_z(2);
    const BoundarySeries G = analyze_g(g, map, 64, 512);
    CHECK(residual_inteq(map, G, solve_h(ops.K, G, 3.0), 512) <= 1e-6);
  }
}

TEST_CASE("Selberg integral") {
  for (double beta : {0.5, 1.0, 2.0, 4.0}) CHECK(log_selberg(1, beta) == doctest::Approx(std::log(kTwoPi)).epsilon(1e-15));
  CHECK(log_selberg(2, 2.0) == doctest::Approx(std::log(4 * kPi * kPi)).epsilon(1e-15));
  // n! prod over Gamma ratios at beta = 2 gives (2 pi)^n.
  CHECK(log_selberg(5, 2.0) == doctest::Approx(5 * std::log(kTwoPi)).epsilon(1e-14));
  CHECK(kind_of([] { log_selberg(0, 2.0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("predictions on the analytic families") {
  const int m = 32;
  {
    const ConformalMap circle = make_curve(CurveSpec{});
    const Operators ops = ops_for(circle, m);
    const Prediction p = predict(ops.K, ops.d, analyze_g(cos_mode(1), circle, m, 256), 2.0, {4});
    CHECK(p.sigma2 == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.mu == 0.0);
    REQUIRE(p.terms.size() == 1);
    CHECK(std::abs(p.terms[0].det_term) < 1e-30);
    CHECK(p.terms[0].quadratic_term == doctest::Approx(0.25));
  }
  const double c = 0.4;
  const ConformalMap e = family(CurveFamily::ellipse, c);
  const Operators ops = ops_for(e, m);
  const BoundarySeries G = analyze_g(re_z(), e, m, 256);
  for (double beta : {1.0, 2.0, 4.0}) {
    const Prediction p = predict(ops.K, ops.d, G, beta, {8, 16});
    CHECK(p.sigma2 == doctest::Approx((1 + c) / beta).epsilon(1e-14));
    CHECK(std::abs(p.mu) < 1e-15);
    CHECK(p.terms.size() == 2);
    CHECK(p.terms[1].selberg == doctest::Approx(log_selberg(16, beta)));
  }
  // Adding a constant only moves the mean term.
  GSpec k;
  k.a0 = 1.0;
  const BoundarySeries K1 = analyze_g(k, e, m, 256);
  BoundarySeries Gs = make_series(G.a0 + K1.a0, G.a, G.b);
  const Prediction p0 = predict(ops.K, ops.d, G, 4.0, {10});
  const Prediction p1 = predict(ops.K, ops.d, Gs, 4.0, {10});
  CHECK(p1.mu == doctest::Approx(p0.mu));
  CHECK(p1.sigma2 == doctest::Approx(p0.sigma2));
  CHECK(p1.terms[0].log_D - p0.terms[0].log_D == doctest::Approx(5.0));
}

TEST_CASE("beta = 4 mean shift on the cubic is 3c/2 to first order") {
  for (double c : {0.01, 0.02, 0.05}) {
    const ConformalMap map = family(CurveFamily::cubic, c);
    const Operators ops = ops_for(map, 64);
    const Prediction p = predict(ops.K, ops.d, analyze_g(re_z(3), map, 64, 512), 4.0, {});
    CHECK(std::abs(p.mu - 1.5 * c) < 10 * c * c);
  }
}

TEST_CASE("variance is a positive quadratic form") {
  const int m = 32;
  CurveSpec s;
  s.type = CurveFamily::laurent;
  s.terms = {{1, cplx(0.3, -0.2)}, {2, cplx(0.1, 0.05)}};
  const Operators ops = ops_for(make_curve(s), m);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd a(m), b(m);
    for (int k = 0; k < m; ++k) {
      a(k) = nd(rng) / (k + 1);
      b(k) = nd(rng) / (k + 1);
    }
    const Prediction p = predict(ops.K, ops.d, make_series(0.0, a, b), 2.0, {});
    CHECK(p.sigma2 > 0.0);
  }
}

TEST_CASE("complex quadratic exponent") {
  const int m = 16;
  const ConformalMap e = family(CurveFamily::ellipse, 0.3);
  const Operators ops = ops_for(e, m);
  const BoundarySeries G = analyze_g(re_z(), e, m, 128);
  for (double beta : {2.0, 4.0}) {
    const Prediction p = predict(ops.K, ops.d, G, beta, {1});
    const cplx q = quadratic_exponent(ops.K, ops.d, G.gvec.cast<cplx>(), beta);
    CHECK(q.real() == doctest::Approx(p.terms[0].quadratic_term).epsilon(1e-14));
    CHECK(std::abs(q.imag()) < 1e-15);
  }
  // Purely imaginary g at beta = 2 flips the sign of the form.
  const cplx qi = quadratic_exponent(ops.K, ops.d, cplx(0.0, 1.0) * G.gvec.cast<cplx>(), 2.0);
  const cplx qr = quadratic_exponent(ops.K, ops.d, G.gvec.cast<cplx>(), 2.0);
  CHECK(std::abs(qi + qr) < 1e-15);
}

TEST_CASE("variance identity") {
  const int m = 32;
  {
    const ConformalMap circle = make_curve(CurveSpec{});
    const Operators ops = ops_for(circle, m);
    GSpec g;
    g.a = {0.5, 0.2};
    g.b = {0.0, -0.3};
    const BoundarySeries G = analyze_g(g, circle, m, 256);
    for (double beta : {1.0, 3.0}) {
      const IdentityCheck id = identity_lemma_gvar(circle, G, solve_h(ops.K, G, beta), ops.d, ops.K, beta, 256);
      const double expect = (2.0 / beta) * G.gvec.squaredNorm();
      CHECK(id.lhs == doctest::Approx(expect).epsilon(1e-13));
      CHECK(id.rhs == doctest::Approx(expect).epsilon(1e-13));
    }
  }
  const ConformalMap e = family(CurveFamily::ellipse, 0.4);
  const Operators ops = ops_for(e, m);
  const BoundarySeries G = analyze_g(re_z(), e, m, 256);
  const IdentityCheck id = identity_lemma_gvar(e, G, solve_h(ops.K, G, 3.0), ops.d, ops.K, 3.0, 256);
  CHECK(std::abs(id.lhs - id.rhs) <= 1e-8);

  GSpec zero;
  const BoundarySeries Z = analyze_g(zero, e, m, 256);
  const IdentityCheck iz = identity_lemma_gvar(e, Z, solve_h(ops.K, Z, 2.0), ops.d, ops.K, 2.0, 256);
  CHECK(iz.lhs == 0.0);
  CHECK(iz.rhs == 0.0);
}
