#include "fbsing/poisson.hpp"

#include <cstdio>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

namespace fbsing {

DiscreteLaplacian::DiscreteLaplacian(const PolarGrid& grid)
    : grid_(grid), stencil_(kernels::make_stencil(grid)) {
  const int nr = grid.n_r(), np = grid.n_phi();
  const auto n = static_cast<Eigen::Index>(grid.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(5 * grid.size());
  auto couple = [&](std::size_t a, std::size_t b, double c) {
    trip.emplace_back(a, a, c);
    trip.emplace_back(b, b, c);
    trip.emplace_back(a, b, -c);
    trip.emplace_back(b, a, -c);
  };
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < np; ++j) {
      const std::size_t c = grid.index(i, j);
      if (i + 1 < nr) couple(c, grid.index(i + 1, j), stencil_.radial[i]);
      else trip.emplace_back(c, c, stencil_.arc);
      if (j + 1 < np) couple(c, grid.index(i, j + 1), stencil_.angular[i]);
      else if (grid.is_disk()) couple(c, grid.index(i, 0), stencil_.angular[i]);
    }
  }
  stiffness_.resize(n, n);
  stiffness_.setFromTriplets(trip.begin(), trip.end());
  stiffness_.makeCompressed();

  areas_.resize(n);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < np; ++j) areas_[grid.index(i, j)] = grid.area(i);
  unit_lift_ = lift([](double) { return 1.0; });
}

Eigen::VectorXd DiscreteLaplacian::lift(const ArcData& g) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid_.size()));
  const int outer = grid_.n_r() - 1;
  for (int j = 0; j < grid_.n_phi(); ++j) b[grid_.index(outer, j)] = stencil_.arc * g(grid_.phi(j));
  return b;
}

Eigen::VectorXd DiscreteLaplacian::apply(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out(u.size());
  kernels::omp::apply_stencil(stencil_, {u.data(), static_cast<std::size_t>(u.size())},
                              {out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

DiscreteLaplacian assemble(const PolarGrid& grid) { return DiscreteLaplacian(grid); }

Eigen::VectorXd to_vector(const ScalarField& f) {
  const auto v = f.values();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ScalarField from_vector(const PolarGrid& grid, const Eigen::VectorXd& v) {
  return ScalarField(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

ScalarField solve(const DiscreteLaplacian& lap, const ScalarField& F, const ArcData& g,
                  const PoissonOptions& opts) {
  if (!(F.grid() == lap.grid())) throw ParameterError("source lives on a different grid");
  const Eigen::VectorXd rhs = lap.lift(g) - lap.areas().cwiseProduct(to_vector(F));
  const auto& L = lap.stiffness();

  bool direct = opts.backend == LinearBackend::direct;
  if (opts.backend == LinearBackend::automatic) direct = lap.grid().size() <= opts.direct_limit;

  Eigen::VectorXd u;
  if (direct) {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(L);
    if (ldlt.info() != Eigen::Success) throw SolverStagnation("LDL^T factorization failed", 1.0);
    u = ldlt.solve(rhs);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(0.1 * opts.rel_tol);  // headroom for the recomputed residual below
    cg.setMaxIterations(20 * static_cast<int>(lap.grid().n_r() + lap.grid().n_phi()));
    cg.compute(L);
    u = cg.solve(rhs);
  }
  // Normwise backward error: ||L u - b|| relative to ||b|| alone bottoms out near
  // 1e-10 for area-weighted sources, where L u is a cancellation of O(1/h^2) terms.
  const double scale = L.norm() * u.norm() + rhs.norm();
  const double res = (L * u - rhs).norm() / (scale > 0.0 ? scale : 1.0);
  if (res > opts.rel_tol)
  {
    char buf[96];
    std::snprintf(buf, sizeof buf, "Poisson solve stagnated at relative residual %.3e", res);
    throw SolverStagnation(buf, res);
  }
  return from_vector(lap.grid(), u);
}

}  // namespace fbsing
