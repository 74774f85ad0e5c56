// Experiment driver: solves, analyses exported fields, reruns manifests.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <numbers>

#include "fbsing/blowup.hpp"
#include "fbsing/experiments.hpp"
#include "fbsing/freeboundary.hpp"
#include "fbsing/io.hpp"
#include "fbsing/monotonicity.hpp"
#include "fbsing/semilinear.hpp"

using namespace fbsing;

namespace {

struct SolveFlags {
  int k = 2;
  double M = 40.0;
  int mode = 0;  // 0: use k
  int n_r = 256;
  int n_phi = 256;
  ContinuationConfig config{};
  std::vector<double> radii;
  std::string out = "out";
};

void add_grid_flags(CLI::App* app, SolveFlags& f) {
  app->add_option("--nr", f.n_r, "radial cells")->capture_default_str();
  app->add_option("--nphi", f.n_phi, "angular cells of the sector")->capture_default_str();
  app->add_option("--eps-min", f.config.eps_min, "final regularization")->capture_default_str();
  app->add_option("--eps-start", f.config.eps_start, "first regularization")->capture_default_str();
  app->add_option("--eps-ratio", f.config.eps_ratio, "schedule ratio")->capture_default_str();
  app->add_option("--tol", f.config.tol, "Newton tolerance")->capture_default_str();
  app->add_option("--out", f.out, "output directory")->capture_default_str();
}

void print_manifest(const RunManifest& m) {
  std::cout << m.experiment << ": " << m.status;
  if (!m.message.empty()) std::cout << " (" << m.message << ")";
  std::cout << '\n';
  for (const Check& c : m.checks)
    std::cout << "  " << (c.pass ? "ok  " : (c.informational ? "note" : "FAIL")) << ' ' << c.name
              << " = " << c.value << "  [" << c.bound << "]\n";
}

std::vector<double> default_phi_radii(const PolarGrid& g) {
  std::vector<double> r;
  for (double x : SolutionExperiment{}.phi_radii)
    if (x >= g.dr() && x <= 1.0 - g.dr()) r.push_back(x);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for the unstable free boundary problem: cross and asterisk singularities"};
  app.require_subcommand(1);

  SolveFlags solve_f;
  auto* solve = app.add_subcommand("solve", "solve on K_{pi/k} with arc data M cos(mode phi)");
  solve->add_option("--k", solve_f.k, "sector order")->capture_default_str();
  solve->add_option("--M", solve_f.M, "boundary amplitude")->capture_default_str();
  solve->add_option("--mode", solve_f.mode, "boundary mode (default k)");
  add_grid_flags(solve, solve_f);

  SolveFlags cross_f;
  auto* cross = app.add_subcommand("cross", "cross-shaped singularity experiment");
  cross->add_option("--M", cross_f.M, "boundary amplitude")->capture_default_str();
  cross->add_option("--radii", cross_f.radii, "monotonicity functional radii")->delimiter(',');
  cross_f.out = "out/cross";
  add_grid_flags(cross, cross_f);

  SolveFlags ast_f;
  auto* asterisk = app.add_subcommand("asterisk", "second-order degenerate point experiment");
  asterisk->add_option("--radii", ast_f.radii, "monotonicity functional radii")->delimiter(',');
  ast_f.out = "out/asterisk";
  add_grid_flags(asterisk, ast_f);

  ThresholdScan scan_p;
  std::string scan_out = "out/scan";
  auto* scan = app.add_subcommand("scan", "energy threshold scan in M");
  scan->add_option("--M", scan_p.M_list, "comma list of M values")->delimiter(',');
  scan->add_option("--C1", scan_p.C1, "comparison constant")->capture_default_str();
  scan->add_option("--samples", scan_p.mc_samples, "Monte Carlo samples")->capture_default_str();
  scan->add_option("--seed", scan_p.seed, "Monte Carlo seed")->capture_default_str();
  scan->add_option("--out", scan_out, "output directory")->capture_default_str();

  std::string field_path, analysis_out = "out/analysis";
  std::vector<double> analysis_radii;
  auto add_analysis = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--field", field_path, "exported field CSV")->required();
    sub->add_option("--radii", analysis_radii, "sample radii")->delimiter(',');
    sub->add_option("--out", analysis_out, "output directory")->capture_default_str();
    return sub;
  };
  auto* phi_cmd = add_analysis("phi", "monotonicity functional profile of an exported field");
  auto* blowup_cmd = add_analysis("blowup", "blow-up traces and classification of an exported field");
  auto* fb_cmd = add_analysis("fb", "zero level set and arcs of an exported field");

  std::string manifest_path, rerun_out = "out/rerun";
  auto* rerun_cmd = app.add_subcommand("rerun", "rerun an experiment from its manifest");
  rerun_cmd->add_option("--manifest", manifest_path, "manifest.json")->required();
  rerun_cmd->add_option("--out", rerun_out, "output directory")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const BoundaryData g{solve_f.M, solve_f.mode ? solve_f.mode : solve_f.k};
      const Solution sol = solve_fixed_point(solve_f.k, solve_f.n_r, solve_f.n_phi, g, solve_f.config);
      io::write_solution(solve_f.out, "solution", sol);
      std::printf("kappa = %.15g  eps = %g  pde = %.3e  |u(0)| = %.3e\n", sol.kappa, sol.eps,
                  sol.pde_residual, sol.origin_residual);
      return kExitOk;
    }
    if (*cross || *asterisk) {
      SolveFlags& f = *cross ? cross_f : ast_f;
      SolutionExperiment p = *cross ? cross_experiment(f.M, f.n_r, f.n_phi, f.config.eps_min)
                                    : asterisk_experiment(f.n_r, f.n_phi, f.config.eps_min);
      p.config = f.config;
      if (!f.radii.empty()) p.phi_radii = f.radii;
      const RunManifest m = run_solution_experiment(p, f.out);
      print_manifest(m);
      return m.exit_code();
    }
    if (*scan) {
      const RunManifest m = run_threshold_scan(scan_p, scan_out);
      print_manifest(m);
      if (m.headline.contains("M_star"))
        std::cout << "  M* = " << m.headline["M_star"].get<double>() << '\n';
      return m.exit_code();
    }
    if (*rerun_cmd) {
      const RunManifest m = rerun(manifest_path, rerun_out);
      print_manifest(m);
      return m.exit_code();
    }

    const ScalarField u = io::load_field(field_path);
    const std::vector<double> radii = analysis_radii.empty() ? default_phi_radii(u.grid()) : analysis_radii;
    if (*phi_cmd) {
      const MonotonicityProfile p = phi_profile(u, radii);
      io::write_phi_profile_csv(io::fs::path(analysis_out) / "phi_profile.csv", p);
      for (std::size_t i = 0; i < p.radii.size(); ++i) std::printf("r = %-8g Phi = %.10g\n", p.radii[i], p.phi[i]);
    } else if (*blowup_cmd) {
      const BlowupReport rep = blowup_report(u, radii);
      io::write_blowup_csv(io::fs::path(analysis_out) / "blowup.csv", rep);
      for (std::size_t i = 0; i < rep.radii.size(); ++i)
        std::printf("r = %-8g S = %.6e  S/r^2 = %.6g  mode-2 fraction = %.6f\n", rep.radii[i], rep.s[i],
                    rep.ratio[i], rep.mode2_fraction[i]);
      std::cout << "classification: " << to_string(rep.classification) << '\n';
    } else if (*fb_cmd) {
      const LevelSet ls = extract_zero_set(u);
      io::write_level_set_csv(io::fs::path(analysis_out) / "fb.csv", ls);
      const ArcFit fit = fit_arcs_at_origin(ls, radii);
      io::write_json(io::fs::path(analysis_out) / "arcs.json", io::arcs_json(fit));
      std::printf("%zu polylines, %d branches at the origin\n", ls.polylines.size(), ls.origin_branches);
      for (const Arc& a : fit.arcs) std::printf("arc limit angle %.3f deg\n", a.limit_angle * 180.0 / std::numbers::pi);
      if (fit.topology_changed()) std::printf("crossing count changes across radii\n");
    }
    return kExitOk;
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const io::FormatError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitParameter;
  } catch (const StageFailed& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const SolverStagnation& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
}
