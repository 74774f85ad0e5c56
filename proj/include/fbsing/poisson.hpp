#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbsing/field.hpp"
#include "fbsing/kernels.hpp"

namespace fbsing {

/// Angular boundary data on the arc {r = 1}, evaluated at cell-center angles.
using ArcData = std::function<double(double phi)>;

/// Linear solve that did not reach the requested residual.
class SolverStagnation : public std::runtime_error {
 public:
  SolverStagnation(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_residual(achieved) {}
  double achieved_residual;
};

enum class LinearBackend { automatic, direct, iterative };

/// Finite-volume discretization of -Laplacian on a sector with Dirichlet data
/// on the arc and homogeneous Neumann data on both radial edges.
///
/// The stiffness matrix L is the symmetric flux form: for a cell-centered
/// field u and arc data g, the discrete Laplacian is
///     (Delta_h u)_c = -(L u - lift(g))_c / area_c.
class DiscreteLaplacian {
 public:
  explicit DiscreteLaplacian(const PolarGrid& grid);

  const PolarGrid& grid() const { return grid_; }
  const Eigen::SparseMatrix<double>& stiffness() const { return stiffness_; }
  const kernels::Stencil& stencil() const { return stencil_; }
  /// Cell areas in storage order.
  const Eigen::VectorXd& areas() const { return areas_; }

  /// Right-hand-side contribution of arc data g.
  Eigen::VectorXd lift(const ArcData& g) const;
  /// lift of the constant 1; lift(g - kappa) = lift(g) - kappa * unit_lift().
  const Eigen::VectorXd& unit_lift() const { return unit_lift_; }

  /// L u, matrix-free.
  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;

 private:
  PolarGrid grid_;
  kernels::Stencil stencil_;
  Eigen::SparseMatrix<double> stiffness_;
  Eigen::VectorXd areas_;
  Eigen::VectorXd unit_lift_;
};

DiscreteLaplacian assemble(const PolarGrid& grid);

struct PoissonOptions {
  LinearBackend backend = LinearBackend::automatic;
  /// Bound on the normwise backward error ||L u - b|| / (||L|| ||u|| + ||b||).
  double rel_tol = 1e-10;
  /// automatic backend switches to CG above this many cells.
  std::size_t direct_limit = 1024 * 1024;
};

/// Solve Delta u = F in K, u = g on the arc, du/dnu = 0 on the radial edges.
ScalarField solve(const DiscreteLaplacian& lap, const ScalarField& F, const ArcData& g,
                  const PoissonOptions& opts = {});

Eigen::VectorXd to_vector(const ScalarField& f);
ScalarField from_vector(const PolarGrid& grid, const Eigen::VectorXd& v);

}  // namespace fbsing
