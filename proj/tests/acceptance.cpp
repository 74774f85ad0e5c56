// Acceptance suite: one pass/fail line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only
//   acceptance --out DIR       experiment output directory (default acceptance_out)
//
// Exit status is nonzero when any selected criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "fbsing/experiments.hpp"
#include "fbsing/field.hpp"
#include "fbsing/monotonicity.hpp"
#include "fbsing/poisson.hpp"

using namespace fbsing;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances, one block per criterion.
constexpr double kRatioLo = 3.5, kRatioHi = 4.5;        // 1
constexpr double kTorsionCenter = 0.25, kTorsionTol = 1e-3;
constexpr double kSolveSeconds = 30.0;
constexpr double kPhiOracleRel = 0.01;                  // 2
constexpr double kHomogeneityRel = 1e-3;                // 3
constexpr double kIntegrandRel = 1e-6;
constexpr double kDefectRel = 0.02;                     // 4
constexpr double kDefectHalving = 2.0;
constexpr double kZeroTol = 1e-12;                      // 5
constexpr double kMonteCarloRel = 0.01;
constexpr std::size_t kMonteCarloSamples = 4'000'000;
constexpr double kCrossSeconds = 600.0;                 // 6

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_error(const ScalarField& u, const std::function<double(double, double)>& exact) {
  double e = 0.0;
  for (int i = 0; i < u.grid().n_r(); ++i)
    for (int j = 0; j < u.grid().n_phi(); ++j)
      e = std::max(e, std::abs(u(i, j) - exact(u.grid().r(i), u.grid().phi(j))));
  return e;
}

// Closed-form solution of Lap u = -chi_{u > 0} with free boundary r = R.
double radial_exact(double r, double R) {
  return r <= R ? (R * R - r * r) / 4.0 : -(R * R / 2.0) * std::log(r / R);
}

Outcome criterion1() {
  Outcome o;
  const std::vector<int> sizes{64, 128, 256, 512};
  std::vector<double> harmonic, torsion;
  double slowest = 0.0, center = 0.0;
  for (int n : sizes) {
    const PolarGrid g = build_sector_grid(SectorSpec{2}, n, n);
    const DiscreteLaplacian lap(g);
    const auto t0 = std::chrono::steady_clock::now();
    const ScalarField h = solve(lap, ScalarField(g), [](double p) { return std::cos(2 * p); });
    slowest = std::max(slowest, seconds_since(t0));
    const auto t1 = std::chrono::steady_clock::now();
    const ScalarField minus_one = ScalarField(g).map([](double) { return -1.0; });
    const ScalarField t = solve(lap, minus_one, [](double) { return 0.0; });
    slowest = std::max(slowest, seconds_since(t1));
    harmonic.push_back(max_error(h, [](double r, double p) { return r * r * std::cos(2 * p); }));
    torsion.push_back(max_error(t, [](double r, double) { return (1 - r * r) / 4; }));
    if (n == 256) center = eval_origin(t);
  }
  for (std::size_t a = 0; a + 1 < sizes.size(); ++a) {
    const double rh = harmonic[a] / harmonic[a + 1], rt = torsion[a] / torsion[a + 1];
    o.require(rh >= kRatioLo && rh <= kRatioHi,
              "harmonic ratio " + std::to_string(sizes[a]) + "->" + std::to_string(sizes[a + 1]) + " " + fmt("%.3f", rh));
    o.require(rt >= kRatioLo && rt <= kRatioHi,
              "torsion ratio " + std::to_string(sizes[a]) + "->" + std::to_string(sizes[a + 1]) + " " + fmt("%.3f", rt));
  }
  o.require(std::abs(center - kTorsionCenter) <= kTorsionTol, "torsion u(0) " + fmt("%.6f", center));
  o.require(slowest < kSolveSeconds, "slowest solve " + fmt("%.2f s", slowest));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 256, 256);
  for (double M : {1.0, 40.0}) {
    const ScalarField u = ScalarField::from_function(g, [M](double r, double p) { return M * r * r * std::cos(2 * p); });
    // 2 pi M^2 - M - 2 pi M^2
    const double expected = -M;
    const double got = phi(u, 1.0 - g.dr());
    o.require(std::abs(got - expected) <= kPhiOracleRel * std::abs(expected),
              "M = " + fmt("%g", M) + ": Phi(1-h) " + fmt("%.6f", got));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  const double M = 1.0;
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 256, 256);
  const ScalarField u = ScalarField::from_function(g, [M](double r, double p) { return M * r * r * std::cos(2 * p); });
  std::vector<double> radii;
  for (int n = 0; n <= 10; ++n) radii.push_back(0.3 + 0.05 * n);
  const MonotonicityProfile prof = phi_profile(u, radii);
  double spread = 0.0;
  for (double v : prof.phi) spread = std::max(spread, std::abs(v - prof.phi.front()));
  o.require(spread <= kHomogeneityRel * std::abs(prof.phi.front()),
            "Phi spread over [0.3, 0.8] " + fmt("%.3e", spread));
  double integrand = 0.0;
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    integrand += 0.5 * (radii[i + 1] - radii[i]) * (prof.rate[i] + prof.rate[i + 1]);
  const double energy_scale = 2.0 * kPi * M * M;  // int_{B_1} |grad u|^2
  o.require(integrand < kIntegrandRel * energy_scale, "identity integrand " + fmt("%.3e", integrand));
  return o;
}

double radial_defect(int n) {
  const double R = 0.5;
  const PolarGrid g = build_sector_grid(SectorSpec{2}, n, n);
  const ScalarField u = ScalarField::from_function(g, [R](double r, double) { return radial_exact(r, R); });
  // Radii two cells apart so the trapezoid in r refines with the grid.
  std::vector<double> radii;
  const int steps = n / 4;
  for (int s = 0; s <= steps; ++s) radii.push_back(0.25 + 0.5 * s / steps);
  const MonotonicityProfile p = phi_profile(u, radii);
  return p.defect(0, radii.size() - 1) / std::abs(p.increment(0, radii.size() - 1));
}

Outcome criterion4() {
  Outcome o;
  const double d256 = radial_defect(256), d512 = radial_defect(512);
  o.require(std::abs(d256) <= kDefectRel, "relative |D(0.25, 0.75)| at 256 " + fmt("%.3e", std::abs(d256)));
  o.require(std::abs(d256) >= kDefectHalving * std::abs(d512),
            "refinement ratio " + fmt("%.3f", std::abs(d256) / std::abs(d512)));
  return o;
}

Outcome criterion5(const fs::path& out) {
  Outcome o;
  const double zero = energy_bound_integral(0.0, 0.5);
  o.require(std::abs(zero - kPi / 4) <= kZeroTol, "bound(0, 0.5) - pi/4 = " + fmt("%.2e", zero - kPi / 4));
  ThresholdScan scan;
  scan.mc_samples = kMonteCarloSamples;
  scan.mc_rel = kMonteCarloRel;
  const RunManifest m = run_threshold_scan(scan, out / "scan");
  const bool has_star = m.headline.contains("M_star");
  o.require(has_star, has_star ? "M* = " + fmt("%.6f", m.headline["M_star"].get<double>()) : "no M*");
  if (has_star) {
    const double ms = m.headline["M_star"].get<double>();
    bool beyond = true;
    const auto& Ms = m.headline["M"];
    const auto& vs = m.headline["bound_value"];
    for (std::size_t i = 0; i < Ms.size(); ++i)
      if (Ms[i].get<double>() > ms) beyond = beyond && vs[i].get<double>() < 0.0;
    o.require(beyond, "negative beyond M*");
  }
  const Check* mc = m.find("monte_carlo_agreement");
  o.require(mc && mc->pass, "Monte Carlo gap " + fmt("%.3e", mc ? mc->value : -1.0));
  const Check* root = m.find("M_star_mc_consistent");
  o.require(root && root->pass, "MC at M* " + fmt("%.3e", root ? root->value : -1.0));
  return o;
}

void require_checks(Outcome& o, const RunManifest& m, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    const Check* c = m.find(n);
    o.require(c && c->pass, n + " = " + fmt("%.6g", c ? c->value : std::nan("")));
  }
}

Outcome criterion6(const fs::path& out) {
  Outcome o;
  const RunManifest m = run_cross(40.0, 256, 256, 0.0125, out / "cross");
  o.require(m.status != "solver_failure" && m.status != "parameter_error", "status " + m.status);
  require_checks(o, m, {"converged", "kappa_bracket", "phi_negative", "phi_nondecreasing", "classification_case1",
                        "mode2_fraction", "four_arcs_at_diagonals"});
  o.require(m.seconds < kCrossSeconds, "runtime " + fmt("%.1f s", m.seconds));
  return o;
}

Outcome criterion7(const fs::path& out) {
  Outcome o;
  const RunManifest m = run_asterisk(256, 256, 0.0125, out / "asterisk");
  o.require(m.status != "solver_failure" && m.status != "parameter_error", "status " + m.status);
  require_checks(o, m, {"converged", "mode2_annihilated", "degeneracy_trend", "classification_case3"});
  return o;
}

Outcome criterion8(const fs::path& out) {
  Outcome o;
  const RunManifest cross = run_cross(40.0, 256, 256, 0.0125, out / "det_cross");
  const RunManifest again = rerun(out / "det_cross" / "manifest.json", out / "det_cross_rerun");
  require_checks(o, again, {"reproduced"});
  o.require(again.headline["kappa"].get<double>() == cross.headline["kappa"].get<double>(), "cross kappa bit-exact");
  const RunManifest ast = run_asterisk(256, 256, 0.0125, out / "det_asterisk");
  const RunManifest ast_again = rerun(out / "det_asterisk" / "manifest.json", out / "det_asterisk_rerun");
  require_checks(o, ast_again, {"reproduced"});
  o.require(ast_again.headline["kappa"].get<double>() == ast.headline["kappa"].get<double>(), "asterisk kappa bit-exact");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  std::string out = "acceptance_out";
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  app.add_option("--out", out, "experiment output directory");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> all{
      {"Poisson convergence", criterion1},
      {"monotonicity functional oracle", criterion2},
      {"homogeneity", criterion3},
      {"monotonicity identity on the radial solution", criterion4},
      {"energy threshold", [&] { return criterion5(out); }},
      {"cross experiment", [&] { return criterion6(out); }},
      {"asterisk experiment", [&] { return criterion7(out); }},
      {"determinism", [&] { return criterion8(out); }},
  };
  bool ok = true;
  for (std::size_t c = 0; c < all.size(); ++c) {
    if (only && static_cast<int>(c + 1) != only) continue;
    Outcome r;
    try {
      r = all[c].second();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu %s: %s (%s)\n", c + 1, r.pass ? "PASS" : "FAIL", all[c].first, r.detail.c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
