#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fbsing/blowup.hpp"
#include "fbsing/semilinear.hpp"

namespace fbsing {

namespace fs = std::filesystem;

enum ExitCode : int {
  kExitOk = 0,
  kExitParameter = 2,
  kExitSolver = 3,
  kExitAssertion = 4,
};

/// One headline assertion. Informational checks are recorded but never fail a run.
struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string bound;
  bool informational = false;
};

struct RunManifest {
  std::string experiment;
  nlohmann::json parameters;
  /// Git blob hash of the canonical parameter dump.
  std::string input_hash;
  std::vector<std::string> outputs;
  nlohmann::json headline = nlohmann::json::object();
  std::vector<Check> checks;
  /// ok, parameter_error, solver_failure or assertion_failure.
  std::string status = "ok";
  std::string message;
  double seconds = 0.0;

  const Check* find(const std::string& name) const;
  /// Sets status from the checks when no error was recorded.
  void settle();
  int exit_code() const;
  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

/// Parameters of a solve-and-analyse experiment on K_{pi/k}.
struct SolutionExperiment {
  std::string name = "cross";
  int k = 2;
  BoundaryData boundary{40.0, 2};
  int n_r = 256;
  int n_phi = 256;
  ContinuationConfig config{};
  std::vector<double> phi_radii{0.05, 0.075, 0.1, 0.15, 0.2, 0.25, 0.3,
                                0.4,  0.5,   0.6, 0.7,  0.8, 0.9};
  std::vector<double> blowup_radii{0.05, 0.075, 0.1, 0.15, 0.2};
  std::vector<double> arc_radii{0.05, 0.075, 0.1, 0.15, 0.2};
  Thresholds thresholds{};
  /// Slack for Phi nondecreasing, relative to max |Phi| over the window.
  double monotonicity_rel = 0.02;
  /// Mode-2 energy fraction probed here.
  double mode2_radius = 0.05;
  double mode2_min = 0.9;
  /// S/r^2 compared between these radii for the degeneracy trend.
  double trend_inner = 0.05;
  double trend_outer = 0.2;
  /// Cross arcs must come within this many degrees of the diagonals.
  double arc_tol_deg = 5.0;
  double kappa_max = 0.26;
  double mode2_coeff_max = 1e-10;

  nlohmann::json to_json() const;
  static SolutionExperiment from_json(const nlohmann::json& j);
};

SolutionExperiment cross_experiment(double M, int n_r, int n_phi, double eps_min);
SolutionExperiment asterisk_experiment(int n_r, int n_phi, double eps_min);

/// Solves, reflects, exports the artifact set and evaluates the headline
/// checks. The manifest is written to out_dir/manifest.json in every case.
RunManifest run_solution_experiment(const SolutionExperiment& p, const fs::path& out_dir);
RunManifest run_cross(double M, int n_r, int n_phi, double eps_min, const fs::path& out_dir);
RunManifest run_asterisk(int n_r, int n_phi, double eps_min, const fs::path& out_dir);

struct ThresholdScan {
  std::vector<double> M_list{0.0, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0,
                             4.0, 5.0,  6.0, 8.0,  10.0, 15.0, 20.0, 30.0, 40.0};
  double C1 = 0.5;
  std::size_t mc_samples = 4'000'000;
  std::uint64_t seed = 20240917;
  /// Monte Carlo agreement is asserted on rows with |value| above this floor.
  double mc_floor = 0.1;
  double mc_rel = 0.01;

  nlohmann::json to_json() const;
  static ThresholdScan from_json(const nlohmann::json& j);
};

RunManifest run_threshold_scan(const ThresholdScan& p, const fs::path& out_dir);

/// Reruns the experiment recorded in a manifest into out_dir and adds a
/// check that every headline number matches the recorded one bit for bit.
RunManifest rerun(const fs::path& manifest_path, const fs::path& out_dir);

/// Pairs of headline numbers that differ between two manifests.
std::vector<std::string> headline_differences(const nlohmann::json& a, const nlohmann::json& b);

}  // namespace fbsing
