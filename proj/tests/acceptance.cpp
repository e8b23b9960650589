// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "jgas/boundary.hpp"
#include "jgas/cli.hpp"
#include "jgas/curve.hpp"
#include "jgas/gas.hpp"
#include "jgas/grunsky.hpp"
#include "jgas/potential.hpp"

using namespace jgas;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ConformalMap family(CurveFamily f, double c) {
  CurveSpec s;
  s.type = f;
  s.c = c;
  return make_curve(s);
}

GSpec re_z(int p = 1) {
  GSpec g;
  g.type = GKind::re_z;
  g.p = p;
  return g;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict ellipse_determinant() {
  Verdict v{true, ""};
  double worst_det = 0.0, worst_le = 0.0, worst_time = 0.0;
  for (double c : {0.2, 0.5, 0.8}) {
    const auto t0 = std::chrono::steady_clock::now();
    const ConformalMap map = family(CurveFamily::ellipse, c);
    const GrunskyData G = compute_grunsky(map, 64, GrunskyMethod::boundary_fft, 1024);
    const Operators ops = build_operators(G);
    const FredholmResult f = fredholm_det(ops.K, G.tail);
    const double dt = seconds_since(t0);
    double prod = 1.0, logsum = 0.0;
    for (int k = 1; k <= 64; ++k) {
      prod *= 1.0 - std::pow(c, 2 * k);
      logsum += std::log1p(-std::pow(c, 2 * k));
    }
    const double rd = std::abs(f.det_I_plus_K - prod) / prod;
    const double rl = std::abs(f.loewner_energy + 12.0 * logsum) / std::abs(12.0 * logsum);
    worst_det = std::max(worst_det, rd);
    worst_le = std::max(worst_le, rl);
    worst_time = std::max(worst_time, dt);
    v.pass = v.pass && rd <= 1e-10 && rl <= 1e-10 && dt < 1.0;
  }
  v.detail = fmt("max rel err det %.2e, Loewner %.2e (tol 1e-10); slowest %.3f s (limit 1 s)", worst_det, worst_le,
                 worst_time);
  return v;
}

Verdict cross_method() {
  Verdict v{true, ""};
  std::string parts;
  for (const ConformalMap& map : {family(CurveFamily::ellipse, 0.3), family(CurveFamily::cubic, 0.1)}) {
    const GrunskyData A = compute_grunsky(map, 64, GrunskyMethod::boundary_fft, 1024);
    const GrunskyData B = compute_grunsky(map, 64, GrunskyMethod::offcircle_fft, 1024, 1.25);
    const double diff = (A.a - B.a).cwiseAbs().maxCoeff();
    const double tol = 1e-8 + std::max(A.tail, B.tail);
    v.pass = v.pass && diff <= tol;
    parts += fmt("%s %.2e (tol %.2e) ", to_string(map.family()).c_str(), diff, tol);
  }
  v.detail = "max entrywise diff: " + parts;
  return v;
}

Verdict np_oracle() {
  Verdict v{true, ""};
  std::string parts;
  const auto t0 = std::chrono::steady_clock::now();
  for (const ConformalMap& map : {family(CurveFamily::ellipse, 0.3), family(CurveFamily::cubic, 0.1)}) {
    const Eigen::MatrixXd T = np_fourier_matrix(map, 16, 256);
    const Operators ops = build_operators(compute_grunsky(map, 16, GrunskyMethod::boundary_fft, 1024));
    const double diff = (T - ops.K.K).cwiseAbs().maxCoeff();
    v.pass = v.pass && diff <= 1e-6;
    parts += fmt("%s %.2e ", to_string(map.family()).c_str(), diff);
  }
  const double dt = seconds_since(t0);
  v.pass = v.pass && dt < 10.0;
  v.detail = "max |NP - K|: " + parts + fmt("(tol 1e-6); %.2f s (limit 10 s)", dt);
  return v;
}

Verdict integral_equation() {
  Verdict v{true, ""};
  const ConformalMap e = family(CurveFamily::ellipse, 0.3);
  const Operators ops = build_operators(compute_grunsky(e, 128, GrunskyMethod::boundary_fft, 1024));
  const BoundarySeries G = analyze_g(re_z(), e, 128, 1024);
  double worst = 0.0;
  for (double beta : {1.0, 2.0, 4.0}) worst = std::max(worst, residual_inteq(e, G, solve_h(ops.K, G, beta), 1024));
  v.pass = worst <= 1e-6;

  const ConformalMap circle = make_curve(CurveSpec{});
  const Operators c0 = build_operators(compute_grunsky(circle, 16, GrunskyMethod::boundary_fft, 128));
  GSpec g;
  g.a = {0.8, 0.0, -0.3, 0.1};
  g.b = {0.2, 0.5};
  const BoundarySeries F = analyze_g(g, circle, 16, 128);
  const HSolution h = solve_h(c0.K, F, 2.0);
  const BoundarySeries Ft = conjugate(F);
  double hdiff = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double t = kTwoPi * i / 256.0;
    hdiff = std::max(hdiff, std::abs(h.H(t) - Ft.evaluate(t)));
  }
  v.pass = v.pass && hdiff <= 1e-12;
  v.detail = fmt("ellipse residual max over beta %.2e (tol 1e-6); circle |h - conj g| %.2e (tol 1e-12)", worst, hdiff);
  return v;
}

Verdict gvar_identity() {
  double worst = 0.0;
  for (const ConformalMap& map : {family(CurveFamily::ellipse, 0.3), family(CurveFamily::cubic, 0.1)}) {
    const Operators ops = build_operators(compute_grunsky(map, 64, GrunskyMethod::boundary_fft, 512));
    for (int p : {1, 3}) {
      const BoundarySeries G = analyze_g(re_z(p), map, 64, 512);
      for (double beta : {1.0, 2.0, 4.0}) {
        const IdentityCheck id = identity_lemma_gvar(map, G, solve_h(ops.K, G, beta), ops.d, ops.K, beta, 512);
        worst = std::max(worst, std::abs(id.lhs - id.rhs));
      }
    }
  }
  return {worst <= 1e-8, fmt("max |lhs - rhs| over 12 cases %.2e (tol 1e-8)", worst)};
}

Verdict dirichlet_energies() {
  const double c = 0.4;
  const ConformalMap e = family(CurveFamily::ellipse, c);
  const Operators ops = build_operators(compute_grunsky(e, 64, GrunskyMethod::boundary_fft, 512));
  const BoundarySeries G = analyze_g(re_z(), e, 64, 512);
  const DirichletEnergies E = interior_dirichlet_energy(e, re_z(), G, 512);
  const double lhs = (E.interior + E.exterior) / (8.0 * kPi);
  const double rhs = G.gvec.dot(solve_resolvent(ops.K, G.gvec));
  const double diff = std::abs(lhs - rhs);
  return {diff <= 1e-5,
          fmt("(E+ + E-)/(8 pi) = %.10f, g^T(I+K)^-1 g = %.10f, diff %.2e (tol 1e-5)", lhs, rhs, diff)};
}

Verdict selberg_and_two_particles() {
  Verdict v{true, ""};
  const ConformalMap circle = make_curve(CurveSpec{});
  double worst = 0.0;
  for (double beta : {1.0, 2.0, 4.0}) {
    const BruteForceResult r = brute_force(circle, nullptr, beta, 2, 512);
    worst = std::max(worst, std::abs(r.D / std::exp(log_selberg(2, beta)) - 1.0));
  }
  v.pass = worst <= 1e-6;

  // Two particles on an ellipse: observables against tensor quadrature.
  const ConformalMap e = family(CurveFamily::ellipse, 0.5);
  double worst_z = 0.0;
  for (double beta : {1.0, 2.0, 4.0}) {
    const auto fcos = [](std::span<const double> t) { return std::cos(t[0] - t[1]); };
    const auto fre = [&](std::span<const double> t) {
      return e.boundary_point(t[0]).real() * e.boundary_point(t[1]).real();
    };
    const double ecos = brute_force(e, nullptr, beta, 2, 512, fcos).expectation;
    const double ere = brute_force(e, nullptr, beta, 2, 512, fre).expectation;
    GasConfig cfg;
    cfg.n = 2;
    cfg.beta = beta;
    cfg.m = 8;
    cfg.sweeps = 400000;
    cfg.burn_in = 4000;
    cfg.seed = 2024;
    const std::vector<Observable> obs = {
        [](const ChainView& c) { return std::cos(c.theta[0] - c.theta[1]); },
        [&](const ChainView& c) { return e.boundary_point(c.theta[0]).real() * e.boundary_point(c.theta[1]).real(); }};
    const McmcRun run = mcmc_run(cfg, e, 1.0, nullptr, obs);
    const Estimate& a = run.report.observables[0];
    const Estimate& b = run.report.observables[1];
    const double za = std::abs(a.mean - ecos) / a.stderr_mean;
    const double zb = std::abs(b.mean - ere) / b.stderr_mean;
    worst_z = std::max({worst_z, za, zb});
  }
  v.pass = v.pass && worst_z <= 3.0;
  v.detail = fmt("Selberg max rel err %.2e (tol 1e-6); n = 2 MCMC vs quadrature max |z| %.2f over 6 observables (tol 3)",
                 worst, worst_z);
  return v;
}

struct CltRow {
  int n;
  Estimate est;
  double seconds;
};

Verdict clt_trend() {
  const double c = 0.3, target = (1 + c) / 2;
  const ConformalMap e = family(CurveFamily::ellipse, c);
  const GSpec g = re_z();
  std::vector<CltRow> rows;
  const auto t_all = std::chrono::steady_clock::now();
  for (int n : {16, 32, 64, 128}) {
    GasConfig cfg;
    cfg.n = n;
    cfg.beta = 2.0;
    cfg.m = 8;
    cfg.sweeps = 100000;
    cfg.burn_in = 5000;
    cfg.seed = 7;
    const auto t0 = std::chrono::steady_clock::now();
    const McmcRun run = mcmc_run(cfg, e, 1.0, &g);
    rows.push_back({n, run.report.linstat, seconds_since(t0)});
  }
  const double total = seconds_since(t_all);
  const Estimate& last = rows.back().est;
  bool pass = std::abs(last.mean) <= 3 * last.stderr_mean &&
              std::abs(last.variance - target) <= 3 * last.stderr_variance && total < 600.0;
  // Monotone shrinkage up to noise: each step may not grow the deviation by
  // more than three combined standard errors.
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1].est;
    const auto& b = rows[i].est;
    const double dv = std::abs(b.variance - target) - std::abs(a.variance - target);
    const double dm = std::abs(b.mean) - std::abs(a.mean);
    pass = pass && dv <= 3 * std::hypot(a.stderr_variance, b.stderr_variance) &&
           dm <= 3 * std::hypot(a.stderr_mean, b.stderr_mean);
  }
  std::string detail;
  for (const auto& r : rows)
    detail += fmt("n=%d mean %.4f+-%.4f var %.4f+-%.4f; ", r.n, r.est.mean, r.est.stderr_mean, r.est.variance,
                  r.est.stderr_variance);
  detail += fmt("target var %.2f; %.0f s (limit 600 s)", target, total);
  return {pass, detail};
}

Verdict mean_shift() {
  const double c = 0.05;
  const ConformalMap map = family(CurveFamily::cubic, c);
  const GSpec g = re_z(3);
  const int m = 64;
  const Operators ops = build_operators(compute_grunsky(map, m, GrunskyMethod::boundary_fft, 512));
  const Prediction p = predict(ops.K, ops.d, analyze_g(g, map, m, 512), 4.0, {});
  GasConfig cfg;
  cfg.n = 128;
  cfg.beta = 4.0;
  cfg.m = 8;
  cfg.sweeps = 300000;
  cfg.burn_in = 10000;
  cfg.seed = 11;
  const auto t0 = std::chrono::steady_clock::now();
  const McmcRun run = mcmc_run(cfg, map, 1.0, &g);
  const double dt = seconds_since(t0);
  const Estimate& est = run.report.linstat;
  const bool near_first_order = std::abs(p.mu - 1.5 * c) <= 10 * c * c;
  const bool pass = std::abs(est.mean - p.mu) <= 3 * est.stderr_mean && near_first_order && dt < 600.0;
  return {pass, fmt("predicted mu %.5f (3c/2 = %.3f); MC mean %.5f +- %.5f, |z| %.2f (tol 3); %.0f s (limit 600 s)",
                    p.mu, 1.5 * c, est.mean, est.stderr_mean, std::abs(est.mean - p.mu) / est.stderr_mean, dt)};
}

Verdict thermo() {
  const double c = 0.4;
  const ConformalMap e = family(CurveFamily::ellipse, c);
  const GrunskyData G = compute_grunsky(e, 32, GrunskyMethod::boundary_fft, 256);
  bool pass = true;
  std::string detail;
  const auto t0 = std::chrono::steady_clock::now();
  for (double beta : {2.0, 4.0}) {
    GasConfig cfg;
    cfg.n = 64;
    cfg.beta = beta;
    cfg.sweeps = 100000;
    cfg.burn_in = 5000;
    cfg.seed = 31;
    const ThermoResult r = thermo_integrate(cfg, e, G, 16);
    const double z = std::abs(r.log_ratio_mc - r.log_ratio_closed) / r.stderr;
    pass = pass && z <= 3.0;
    detail += fmt("beta=%g MC %.5f +- %.5f vs closed %.5f (|z| %.2f); ", beta, r.log_ratio_mc, r.stderr,
                  r.log_ratio_closed, z);
  }
  const double dt = seconds_since(t0);
  pass = pass && dt < 1800.0;
  return {pass, detail + fmt("%.0f s (limit 1800 s)", dt)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "jgas_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"curve": {"type": "ellipse", "c": 0.3}, "g": {"type": "re_z"}, "beta": 2, "m": 16,
  "N": 128, "mcmc": {"n": 32, "sweeps": 5000, "burn_in": 500, "seed": 123456789, "chains": 1}})";
  std::ostringstream out, err;
  const int a = cli::run({"sample", "--config", cfg.string(), "--out-dir", (dir / "a").string(), "--threads", "1"},
                         out, err);
  const int b = cli::run({"sample", "--config", cfg.string(), "--out-dir", (dir / "b").string(), "--threads", "1"},
                         out, err);
  const std::string sa = slurp(dir / "a" / "chain_0.csv"), sb = slurp(dir / "b" / "chain_0.csv");
  const bool pass = a == 0 && b == 0 && !sa.empty() && sa == sb;
  return {pass, fmt("exit codes %d/%d, %zu bytes per stream, identical: %s", a, b, sa.size(), sa == sb ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "ellipse determinant and Loewner energy", ellipse_determinant},
      {2, "cross-method Grunsky coefficients", cross_method},
      {3, "Neumann-Poincare operator equals K", np_oracle},
      {4, "integral equation residual", integral_equation},
      {5, "variance identity", gvar_identity},
      {6, "Dirichlet energies", dirichlet_energies},
      {7, "Selberg integral and n = 2 sampler", selberg_and_two_particles},
      {8, "CLT trend for Re z on the ellipse", clt_trend},
      {9, "beta = 4 mean shift on the cubic", mean_shift},
      {10, "thermodynamic integration", thermo},
      {11, "byte-identical sample streams", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) ++failures;
    std::printf("criterion %2d %s  %s: %s\n", c.id, v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
