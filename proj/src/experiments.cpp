#include "fbsing/experiments.hpp"

#include <chrono>
#include <fstream>
#include <limits>
#include <cmath>
#include <numbers>

#include "fbsing/freeboundary.hpp"
#include "fbsing/io.hpp"
#include "fbsing/monotonicity.hpp"

namespace fbsing {

namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

std::string backend_name(LinearBackend b) {
  switch (b) {
    case LinearBackend::automatic: return "automatic";
    case LinearBackend::direct: return "direct";
    case LinearBackend::iterative: return "iterative";
  }
  return "direct";
}

LinearBackend backend_from(const std::string& s) {
  if (s == "automatic") return LinearBackend::automatic;
  if (s == "direct") return LinearBackend::direct;
  if (s == "iterative") return LinearBackend::iterative;
  throw ParameterError("unknown linear backend '" + s + "'");
}

json config_json(const ContinuationConfig& c) {
  return {{"eps_start", c.eps_start},
          {"eps_ratio", c.eps_ratio},
          {"eps_min", c.eps_min},
          {"tol", c.tol},
          {"max_newton", c.max_newton},
          {"armijo_c", c.armijo_c},
          {"max_backtracks", c.max_backtracks},
          {"eps_floor_cells", c.eps_floor_cells},
          {"backend", backend_name(c.backend)},
          {"schedule", c.schedule()}};
}

ContinuationConfig config_from(const json& j) {
  ContinuationConfig c;
  c.eps_start = j.at("eps_start");
  c.eps_ratio = j.at("eps_ratio");
  c.eps_min = j.at("eps_min");
  c.tol = j.at("tol");
  c.max_newton = j.at("max_newton");
  c.armijo_c = j.at("armijo_c");
  c.max_backtracks = j.at("max_backtracks");
  c.eps_floor_cells = j.at("eps_floor_cells");
  c.backend = backend_from(j.at("backend"));
  return c;
}

json thresholds_json(const Thresholds& t) {
  return {{"phi_rel", t.phi_rel}, {"phi_abs", t.phi_abs}, {"trend_tol", t.trend_tol}, {"s_floor", t.s_floor}};
}

Thresholds thresholds_from(const json& j) {
  Thresholds t;
  t.phi_rel = j.at("phi_rel");
  t.phi_abs = j.at("phi_abs");
  t.trend_tol = j.at("trend_tol");
  t.s_floor = j.at("s_floor");
  return t;
}

Check check(std::string name, bool pass, double value, std::string bound, bool info = false) {
  return {std::move(name), pass, value, std::move(bound), info};
}

double deg(double rad) { return rad * 180.0 / kPi; }

double angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

// Fills the manifest hash from its parameters.
void stamp(RunManifest& m) { m.input_hash = io::git_blob_hash(m.parameters.dump()); }

void finish(RunManifest& m, const fs::path& out_dir,
            std::chrono::steady_clock::time_point start) {
  m.settle();
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  m.outputs.push_back("manifest.json");
  io::write_json(out_dir / "manifest.json", m.to_json());
}

// Shared failure handling: every path writes the manifest.
template <class Body>
RunManifest guarded(RunManifest m, const fs::path& out_dir, Body&& body) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);
  try {
    body(m);
  } catch (const ParameterError& e) {
    m.status = "parameter_error";
    m.message = e.what();
  } catch (StageFailed& e) {
    m.status = "solver_failure";
    m.message = e.what();
    json done = json::array();
    for (const StageReport& s : e.completed) done.push_back({{"eps", s.eps}, {"iterations", s.iterations}});
    m.headline["completed_stages"] = done;
    m.headline["failed_stage"] = {{"eps", e.failed.eps},
                                  {"iterations", e.failed.iterations},
                                  {"pde_residual", e.failed.pde_residual},
                                  {"origin_residual", e.failed.origin_residual}};
    if (e.last_converged) {
      auto names = io::write_solution(out_dir, "partial_solution", *e.last_converged);
      m.outputs.insert(m.outputs.end(), names.begin(), names.end());
    }
  } catch (const SolverStagnation& e) {
    m.status = "solver_failure";
    m.message = e.what();
  }
  finish(m, out_dir, start);
  return m;
}

}  // namespace

const Check* RunManifest::find(const std::string& name) const {
  for (const Check& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void RunManifest::settle() {
  if (status != "ok" && status != "assertion_failure") return;
  status = "ok";
  for (const Check& c : checks)
    if (!c.pass && !c.informational) status = "assertion_failure";
}

int RunManifest::exit_code() const {
  if (status == "parameter_error") return kExitParameter;
  if (status == "solver_failure") return kExitSolver;
  if (status == "assertion_failure") return kExitAssertion;
  return kExitOk;
}

json RunManifest::to_json() const {
  json cs = json::array();
  for (const Check& c : checks)
    cs.push_back({{"name", c.name},
                  {"pass", c.pass},
                  {"value", c.value},
                  {"bound", c.bound},
                  {"informational", c.informational}});
  return {{"experiment", experiment}, {"parameters", parameters}, {"input_hash", input_hash},
          {"outputs", outputs},       {"headline", headline},     {"checks", cs},
          {"status", status},         {"message", message},       {"seconds", seconds},
          {"exit_code", exit_code()}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.experiment = j.at("experiment");
  m.parameters = j.at("parameters");
  m.input_hash = j.value("input_hash", "");
  m.outputs = j.value("outputs", std::vector<std::string>{});
  m.headline = j.value("headline", json::object());
  for (const json& c : j.value("checks", json::array()))
    m.checks.push_back({c.at("name"), c.at("pass"), c.value("value", 0.0), c.value("bound", ""),
                        c.value("informational", false)});
  m.status = j.value("status", "ok");
  m.message = j.value("message", "");
  m.seconds = j.value("seconds", 0.0);
  return m;
}

json SolutionExperiment::to_json() const {
  return {{"name", name},
          {"k", k},
          {"amplitude", boundary.amplitude},
          {"mode", boundary.mode},
          {"boundary", boundary.describe()},
          {"n_r", n_r},
          {"n_phi", n_phi},
          {"continuation", config_json(config)},
          {"phi_radii", phi_radii},
          {"blowup_radii", blowup_radii},
          {"arc_radii", arc_radii},
          {"thresholds", thresholds_json(thresholds)},
          {"monotonicity_rel", monotonicity_rel},
          {"mode2_radius", mode2_radius},
          {"mode2_min", mode2_min},
          {"trend_inner", trend_inner},
          {"trend_outer", trend_outer},
          {"arc_tol_deg", arc_tol_deg},
          {"kappa_max", kappa_max},
          {"mode2_coeff_max", mode2_coeff_max}};
}

SolutionExperiment SolutionExperiment::from_json(const json& j) {
  SolutionExperiment p;
  p.name = j.at("name");
  p.k = j.at("k");
  p.boundary = {j.at("amplitude").get<double>(), j.at("mode").get<int>()};
  p.n_r = j.at("n_r");
  p.n_phi = j.at("n_phi");
  p.config = config_from(j.at("continuation"));
  p.phi_radii = j.at("phi_radii").get<std::vector<double>>();
  p.blowup_radii = j.at("blowup_radii").get<std::vector<double>>();
  p.arc_radii = j.at("arc_radii").get<std::vector<double>>();
  p.thresholds = thresholds_from(j.at("thresholds"));
  p.monotonicity_rel = j.at("monotonicity_rel");
  p.mode2_radius = j.at("mode2_radius");
  p.mode2_min = j.at("mode2_min");
  p.trend_inner = j.at("trend_inner");
  p.trend_outer = j.at("trend_outer");
  p.arc_tol_deg = j.at("arc_tol_deg");
  p.kappa_max = j.at("kappa_max");
  p.mode2_coeff_max = j.at("mode2_coeff_max");
  return p;
}

SolutionExperiment cross_experiment(double M, int n_r, int n_phi, double eps_min) {
  SolutionExperiment p;
  p.name = "cross";
  p.k = 2;
  p.boundary = {M, 2};
  p.n_r = n_r;
  p.n_phi = n_phi;
  p.config.eps_min = eps_min;
  return p;
}

SolutionExperiment asterisk_experiment(int n_r, int n_phi, double eps_min) {
  SolutionExperiment p;
  p.name = "asterisk";
  p.k = 4;
  p.boundary = {1.0, 4};
  p.n_r = n_r;
  p.n_phi = n_phi;
  p.config.eps_min = eps_min;
  return p;
}

RunManifest run_solution_experiment(const SolutionExperiment& p, const fs::path& out_dir) {
  RunManifest m;
  m.experiment = p.name;
  m.parameters = p.to_json();
  stamp(m);
  return guarded(std::move(m), out_dir, [&](RunManifest& m) {
    if (p.name == "cross" && !(p.boundary.amplitude > 0.0))
      throw ParameterError("cross experiment needs M > 0");
    const Solution sol = solve_fixed_point(p.k, p.n_r, p.n_phi, p.boundary, p.config);
    auto names = io::write_solution(out_dir, "solution", sol);
    m.outputs.insert(m.outputs.end(), names.begin(), names.end());

    const DiscreteLaplacian lap(sol.u.grid());
    const ResidualCheck rc = residual_check(sol, lap);
    const ScalarField disk = reflect_to_disk(sol.u, SymmetryGroup{p.k});

    const MonotonicityProfile prof = phi_profile(disk, p.phi_radii);
    io::write_phi_profile_csv(out_dir / "phi_profile.csv", prof);
    const BlowupReport rep = blowup_report(disk, p.blowup_radii, p.thresholds);
    io::write_blowup_csv(out_dir / "blowup.csv", rep);
    const LevelSet ls = extract_zero_set(disk);
    io::write_level_set_csv(out_dir / "fb.csv", ls);
    const ArcFit fit = fit_arcs_at_origin(ls, p.arc_radii);
    io::write_json(out_dir / "arcs.json", io::arcs_json(fit));
    m.outputs.insert(m.outputs.end(), {"phi_profile.csv", "blowup.csv", "fb.csv", "arcs.json"});

    json iters = json::array();
    for (const StageReport& s : sol.stages) iters.push_back(s.iterations);
    std::vector<double> limits;
    for (const Arc& a : fit.arcs) limits.push_back(deg(a.limit_angle));
    double max_defect = 0.0;
    for (double d : prof.defect_to_next) max_defect = std::max(max_defect, std::abs(d));

    m.headline = {{"kappa", sol.kappa},
                  {"eps", sol.eps},
                  {"pde_residual", rc.pde_residual},
                  {"origin_residual", rc.origin_residual},
                  {"transition_area", rc.transition_area},
                  {"newton_iterations", iters},
                  {"phi_radii", prof.radii},
                  {"phi", prof.phi},
                  {"defect_to_next", prof.defect_to_next},
                  {"blowup_radii", rep.radii},
                  {"S", rep.s},
                  {"S_over_r2", rep.ratio},
                  {"mode2_fraction", rep.mode2_fraction},
                  {"phi_r_min", rep.phi_min},
                  {"delta_phi", rep.delta_phi},
                  {"trend", rep.trend},
                  {"classification", to_string(rep.classification)},
                  {"arc_limit_angles_deg", limits},
                  {"arc_gaps_deg", [&] {
                     std::vector<double> g;
                     for (double x : fit.gaps) g.push_back(deg(x));
                     return g;
                   }()},
                  {"origin_branches", ls.origin_branches},
                  {"polylines", ls.polylines.size()},
                  {"max_vertex_residual", ls.max_vertex_residual}};

    m.checks.push_back(check("converged", rc.origin_residual <= p.config.tol && rc.pde_residual <= p.config.tol,
                             std::max(rc.origin_residual, rc.pde_residual),
                             "|u(0)| and PDE residual <= " + json(p.config.tol).dump()));

    double phi_abs_max = 0.0;
    for (double v : prof.phi) phi_abs_max = std::max(phi_abs_max, std::abs(v));
    const double mono_tol = p.monotonicity_rel * phi_abs_max;
    double worst_drop = 0.0;
    for (std::size_t a = 0; a < prof.phi.size(); ++a)
      for (std::size_t b = a + 1; b < prof.phi.size(); ++b)
        worst_drop = std::max(worst_drop, prof.phi[a] - prof.phi[b]);
    m.checks.push_back(check("phi_nondecreasing", worst_drop <= mono_tol, worst_drop,
                             "max drop <= " + json(mono_tol).dump(), p.name != "cross"));
    m.checks.push_back(check("identity_defect", max_defect <= mono_tol, max_defect,
                             "max |D| <= " + json(mono_tol).dump(), p.name != "cross"));

    if (p.name == "cross") {
      m.checks.push_back(check("kappa_bracket", sol.kappa > 0.0 && sol.kappa < p.kappa_max, sol.kappa,
                               "0 < kappa < " + json(p.kappa_max).dump()));
      double phi_top = -std::numeric_limits<double>::infinity();
      for (double v : prof.phi) phi_top = std::max(phi_top, v);
      m.checks.push_back(check("phi_negative", phi_top < 0.0, phi_top, "max Phi < 0"));
      m.checks.push_back(check("classification_case1", rep.classification == BlowupCase::Case1,
                               static_cast<double>(rep.classification), to_string(rep.classification) +
                               " (want Case1)"));
      double frac = 0.0;
      try {
        frac = mode2_energy_fraction(blowup_profile(disk, p.mode2_radius, p.thresholds.s_floor));
      } catch (const DegenerateTrace&) {
      }
      m.headline["mode2_fraction_probe"] = frac;
      m.checks.push_back(check("mode2_fraction", frac >= p.mode2_min, frac,
                               ">= " + json(p.mode2_min).dump() + " at r = " + json(p.mode2_radius).dump()));
      bool rising = true;
      for (std::size_t i = 0; i + 1 < rep.mode2_fraction.size(); ++i)
        rising = rising && rep.mode2_fraction[i] >= rep.mode2_fraction[i + 1];
      m.checks.push_back(check("mode2_fraction_rising_inward", rising, rep.mode2_fraction.front(),
                               "fraction nonincreasing in r", true));
      double worst = 180.0;
      if (fit.arcs.size() == 4) {
        worst = 0.0;
        for (std::size_t a = 0; a < 4; ++a)
          worst = std::max(worst, deg(angle_distance(fit.arcs[a].limit_angle, kPi / 4 + a * kPi / 2)));
      }
      m.checks.push_back(check("four_arcs_at_diagonals", worst <= p.arc_tol_deg, worst,
                               "4 arcs, deviation <= " + json(p.arc_tol_deg).dump() + " deg"));
      double gap_dev = 180.0;
      if (fit.gaps.size() == 4) {
        gap_dev = 0.0;
        for (double g : fit.gaps) gap_dev = std::max(gap_dev, std::abs(deg(g) - 90.0));
      }
      m.checks.push_back(check("right_angles", gap_dev <= p.arc_tol_deg, gap_dev,
                               "gaps within " + json(p.arc_tol_deg).dump() + " deg of 90", true));
    } else {
      double coeff = 0.0;
      for (std::size_t i = 0; i < rep.traces.size(); ++i)
        if (!rep.degenerate[i]) coeff = std::max({coeff, std::abs(rep.traces[i].a[2]), std::abs(rep.traces[i].b[2])});
      m.checks.push_back(check("mode2_annihilated", coeff <= p.mode2_coeff_max, coeff,
                               "|a2|, |b2| <= " + json(p.mode2_coeff_max).dump()));
      const double inner = s_norm(disk, p.trend_inner) / (p.trend_inner * p.trend_inner);
      const double outer = s_norm(disk, p.trend_outer) / (p.trend_outer * p.trend_outer);
      m.headline["trend_inner_ratio"] = inner;
      m.headline["trend_outer_ratio"] = outer;
      m.checks.push_back(check("degeneracy_trend", inner < outer, inner - outer,
                               "S/r^2 at " + json(p.trend_inner).dump() + " < at " + json(p.trend_outer).dump()));
      m.checks.push_back(check("classification_case3", rep.classification == BlowupCase::Case3,
                               static_cast<double>(rep.classification), to_string(rep.classification) +
                               " (want Case3)"));
      // Crossing sets under the rotation 2 pi / k of the reflection group, and
      // under the half-step pi / k, which is not a symmetry of the solution.
      auto rotation_mismatch = [&](double turn, std::size_t& crossings) {
        double mismatch = 0.0;
        crossings = 0;
        for (double r : p.phi_radii) {
          const auto c = crossings_on_circle(disk, r);
          crossings += c.size();
          for (double a : c) {
            double best = 2.0 * kPi;
            for (double b : c) best = std::min(best, angle_distance(a + turn, b));
            mismatch = std::max(mismatch, best);
          }
        }
        return mismatch;
      };
      std::size_t crossings = 0;
      const double group = rotation_mismatch(2.0 * kPi / p.k, crossings);
      const double half = rotation_mismatch(kPi / p.k, crossings);
      m.headline["probe_crossings"] = crossings;
      m.checks.push_back(check("crossings_rotation_invariant", group <= 1e-9 && crossings > 0, group,
                               "<= 1e-9 rad over " + std::to_string(crossings) + " crossings"));
      m.checks.push_back(check("crossings_half_rotation_invariant", half <= 1e-9, half, "<= 1e-9 rad", true));
    }
  });
}

RunManifest run_cross(double M, int n_r, int n_phi, double eps_min, const fs::path& out_dir) {
  return run_solution_experiment(cross_experiment(M, n_r, n_phi, eps_min), out_dir);
}

RunManifest run_asterisk(int n_r, int n_phi, double eps_min, const fs::path& out_dir) {
  return run_solution_experiment(asterisk_experiment(n_r, n_phi, eps_min), out_dir);
}

json ThresholdScan::to_json() const {
  return {{"M_list", M_list}, {"C1", C1},           {"mc_samples", mc_samples},
          {"seed", seed},     {"mc_floor", mc_floor}, {"mc_rel", mc_rel}};
}

ThresholdScan ThresholdScan::from_json(const json& j) {
  ThresholdScan s;
  s.M_list = j.at("M_list").get<std::vector<double>>();
  s.C1 = j.at("C1");
  s.mc_samples = j.at("mc_samples");
  s.seed = j.at("seed");
  s.mc_floor = j.at("mc_floor");
  s.mc_rel = j.at("mc_rel");
  return s;
}

RunManifest run_threshold_scan(const ThresholdScan& p, const fs::path& out_dir) {
  RunManifest m;
  m.experiment = "threshold_scan";
  m.parameters = p.to_json();
  stamp(m);
  return guarded(std::move(m), out_dir, [&](RunManifest& m) {
    if (p.M_list.empty()) throw ParameterError("threshold scan needs at least one M");
    if (!(p.C1 > 0.0)) throw ParameterError("threshold scan needs C1 > 0");
    std::vector<double> values;
    for (double M : p.M_list) values.push_back(energy_bound_integral(M, p.C1));
    {
      std::ofstream out;
      const fs::path path = out_dir / "threshold_scan.csv";
      out.open(path);
      if (!out) throw io::FormatError("cannot write " + path.string());
      out << "M,bound_value\n";
      out.precision(17);
      for (std::size_t i = 0; i < values.size(); ++i) out << p.M_list[i] << ',' << values[i] << '\n';
    }
    m.outputs.push_back("threshold_scan.csv");
    m.headline["M"] = p.M_list;
    m.headline["bound_value"] = values;

    bool nonincreasing = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
      if (p.M_list[i + 1] >= p.M_list[i]) nonincreasing = nonincreasing && values[i + 1] <= values[i];
    m.checks.push_back(check("nonincreasing_in_M", nonincreasing, 0.0, "value(M) nonincreasing"));

    std::size_t first_neg = values.size();
    for (std::size_t i = 0; i < values.size(); ++i)
      if (values[i] < 0.0) {
        first_neg = i;
        break;
      }
    m.checks.push_back(check("negative_value_found", first_neg < values.size(),
                             first_neg < values.size() ? values[first_neg] : 0.0, "some value < 0"));
    if (first_neg < values.size() && first_neg > 0 && values[first_neg - 1] >= 0.0) {
      const double ms = energy_threshold(p.C1, p.M_list[first_neg - 1], p.M_list[first_neg]);
      m.headline["M_star"] = ms;
      const MonteCarloEstimate at = energy_bound_monte_carlo(ms, p.C1, p.mc_samples, p.seed);
      m.headline["M_star_mc"] = {{"mean", at.mean}, {"std_error", at.std_error}};
      // At the root the quadrature is zero; the oracle must not see a clear sign.
      m.checks.push_back(check("M_star_mc_consistent", std::abs(at.mean) <= 5.0 * at.std_error,
                               at.mean, "|MC(M*)| <= 5 standard errors"));
    }

    json mc = json::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const MonteCarloEstimate e = energy_bound_monte_carlo(p.M_list[i], p.C1, p.mc_samples, p.seed + i);
      mc.push_back({{"M", p.M_list[i]}, {"mean", e.mean}, {"std_error", e.std_error}});
      if (std::abs(values[i]) >= p.mc_floor)
        worst = std::max(worst, std::abs(e.mean - values[i]) / std::abs(values[i]));
    }
    m.headline["monte_carlo"] = mc;
    m.checks.push_back(check("monte_carlo_agreement", worst <= p.mc_rel, worst,
                             "relative gap <= " + json(p.mc_rel).dump() + " where |value| >= " +
                                 json(p.mc_floor).dump()));
  });
}

std::vector<std::string> headline_differences(const json& a, const json& b) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const json& x, const json& y, const std::string& path) -> void {
    if (x.type() != y.type() && !(x.is_number() && y.is_number())) {
      out.push_back(path);
      return;
    }
    if (x.is_object()) {
      for (auto it = x.begin(); it != x.end(); ++it) {
        if (!y.contains(it.key())) out.push_back(path + "/" + it.key());
        else self(self, it.value(), y.at(it.key()), path + "/" + it.key());
      }
      for (auto it = y.begin(); it != y.end(); ++it)
        if (!x.contains(it.key())) out.push_back(path + "/" + it.key());
    } else if (x.is_array()) {
      if (x.size() != y.size()) {
        out.push_back(path);
        return;
      }
      for (std::size_t i = 0; i < x.size(); ++i) self(self, x[i], y[i], path + "/" + std::to_string(i));
    } else if (x.is_number()) {
      if (x.get<double>() != y.get<double>()) out.push_back(path);
    } else if (x != y) {
      out.push_back(path);
    }
  };
  walk(walk, a, b, "");
  return out;
}

RunManifest rerun(const fs::path& manifest_path, const fs::path& out_dir) {
  const RunManifest old = RunManifest::from_json(io::read_json(manifest_path));
  RunManifest fresh;
  if (old.experiment == "threshold_scan") {
    fresh = run_threshold_scan(ThresholdScan::from_json(old.parameters), out_dir);
  } else {
    fresh = run_solution_experiment(SolutionExperiment::from_json(old.parameters), out_dir);
  }
  const auto diffs = headline_differences(old.headline, fresh.headline);
  std::string listed;
  for (const auto& d : diffs) listed += (listed.empty() ? "" : ", ") + d;
  fresh.checks.push_back(check("reproduced", diffs.empty() && old.input_hash == fresh.input_hash,
                               static_cast<double>(diffs.size()),
                               diffs.empty() ? "bit-exact headline" : "differs at " + listed));
  fresh.message = "rerun of " + old.input_hash + (fresh.message.empty() ? "" : "; " + fresh.message);
  fresh.settle();
  io::write_json(out_dir / "manifest.json", fresh.to_json());
  return fresh;
}

}  // namespace fbsing
