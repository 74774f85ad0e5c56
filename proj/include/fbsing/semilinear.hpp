#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbsing/field.hpp"
#include "fbsing/poisson.hpp"

namespace fbsing {

/// Regularized indicator f_eps(z) = eta(z / eps + 1) with eta the quintic
/// smoothstep: f = 1 for z >= 0, f = 0 for z <= -eps, monotone in between,
/// f_eps >= chi_{z > 0} and f_eps decreases pointwise as eps decreases.
class SmoothedHeaviside {
 public:
  explicit SmoothedHeaviside(double eps);

  double eps() const { return eps_; }
  double operator()(double z) const;
  double derivative(double z) const;
  /// sup |f_eps'| = (15/8) / eps.
  double derivative_bound() const { return 15.0 / (8.0 * eps_); }

 private:
  double eps_;
};

double f_eps(double z, double eps);
double f_eps_prime(double z, double eps);

/// Arc data g(phi) = amplitude * cos(mode * phi).
struct BoundaryData {
  double amplitude = 1.0;
  int mode = 2;

  double operator()(double phi) const;
  std::string describe() const;
  /// Even across both edges of K_{pi/k} iff mode is a multiple of k.
  bool compatible_with(int k) const;
};

struct ContinuationConfig {
  double eps_start = 0.2;
  double eps_ratio = 0.5;
  double eps_min = 0.0125;
  /// Max-norm bound for the pointwise PDE residual and for |u(0)|.
  double tol = 1e-8;
  int max_newton = 25;
  double armijo_c = 1e-4;
  int max_backtracks = 12;
  /// eps_min must be at least this many radial cell widths.
  double eps_floor_cells = 2.0;
  LinearBackend backend = LinearBackend::direct;

  /// Geometric schedule eps_start, eps_start * ratio, ... ending exactly at eps_min.
  std::vector<double> schedule() const;
  /// Throws ParameterError on an invalid schedule or an unresolved eps_min.
  void validate(const PolarGrid& grid) const;
};

/// Unknowns of the bordered system: the shifted field and the shift kappa.
struct NewtonState {
  ScalarField u;
  double kappa = 0.0;
};

struct StageReport {
  double eps = 0.0;
  int iterations = 0;
  double pde_residual = 0.0;
  double origin_residual = 0.0;
};

/// Converged pair (u, kappa): Delta u = -f_eps(u), u = g - kappa on the arc,
/// Neumann on the radial edges, u(0) = 0.
struct Solution {
  ScalarField u;
  double kappa = 0.0;
  double eps = 0.0;
  double pde_residual = 0.0;
  double origin_residual = 0.0;
  std::vector<StageReport> stages;
  int k = 2;
  BoundaryData boundary;
};

class StageFailed : public std::runtime_error {
 public:
  StageFailed(const std::string& what, StageReport failed_stage)
      : std::runtime_error(what), failed(failed_stage) {}
  StageReport failed;
  std::vector<StageReport> completed;
  /// Last fully converged stage, when there is one.
  std::optional<Solution> last_converged;
};

/// Pointwise residual -Delta_h u - source(u) with arc data g - kappa.
Eigen::VectorXd pointwise_residual(const DiscreteLaplacian& lap, const ScalarField& u,
                                   const ArcData& g, double kappa,
                                   const std::function<double(double)>& source);

/// Bordered residual R1 = -Delta_h u - f_eps(u) (arc data g - kappa), R2 = u(0).
struct BorderedResidual {
  Eigen::VectorXd r1;
  double r2 = 0.0;
};

BorderedResidual bordered_residual(const DiscreteLaplacian& lap, const ScalarField& u, double kappa,
                                   double eps, const ArcData& g);

/// (1,1) block of the bordered Jacobian in flux form, L - diag(area * f_eps'(u)).
Eigen::SparseMatrix<double> jacobian_block(const DiscreteLaplacian& lap, const ScalarField& u, double eps);

/// Jacobian of bordered_residual at u applied to (du, dkappa), as used by the
/// Newton step.
BorderedResidual jacobian_apply(const DiscreteLaplacian& lap, const ScalarField& u, double eps,
                                const ScalarField& du, double dkappa);

/// Linear bordered solve with f = 1: Delta u = -1, u = g - kappa on the arc, u(0) = 0.
NewtonState initial_guess(const DiscreteLaplacian& lap, const ArcData& g);

/// Damped Newton on the bordered system at fixed eps. Returns with the state
/// unchanged and zero iterations when it already meets the tolerance.
StageReport newton_stage(const DiscreteLaplacian& lap, NewtonState& state, double eps,
                         const ArcData& g, const ContinuationConfig& config);

/// Continuation along config.schedule() from initial_guess.
Solution solve_fixed_point(int k, int n_r, int n_phi, const BoundaryData& g,
                           const ContinuationConfig& config);

struct ResidualCheck {
  double pde_residual = 0.0;
  double origin_residual = 0.0;
  /// Disk area of the transition zone {|u| <= eps}.
  double transition_area = 0.0;
};

ResidualCheck residual_check(const Solution& sol, const DiscreteLaplacian& lap);

}  // namespace fbsing
