#include "fbsing/semilinear.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#include "fbsing/kernels.hpp"

namespace fbsing {

SmoothedHeaviside::SmoothedHeaviside(double eps) : eps_(eps) {
  if (!(eps > 0.0)) throw ParameterError("regularization eps must be positive");
}

double SmoothedHeaviside::operator()(double z) const { return kernels::smoothstep(z / eps_ + 1.0); }

double SmoothedHeaviside::derivative(double z) const {
  return kernels::smoothstep_prime(z / eps_ + 1.0) / eps_;
}

double f_eps(double z, double eps) { return SmoothedHeaviside(eps)(z); }
double f_eps_prime(double z, double eps) { return SmoothedHeaviside(eps).derivative(z); }

double BoundaryData::operator()(double phi) const { return amplitude * std::cos(mode * phi); }

std::string BoundaryData::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << amplitude << "*cos(" << mode << "*phi)";
  return os.str();
}

bool BoundaryData::compatible_with(int k) const { return k > 0 && mode % k == 0; }

std::vector<double> ContinuationConfig::schedule() const {
  if (!(eps_start > 0.0) || !(eps_min > 0.0) || eps_min > eps_start)
    throw ParameterError("eps schedule needs 0 < eps_min <= eps_start");
  if (!(eps_ratio > 0.0 && eps_ratio < 1.0)) throw ParameterError("eps ratio must lie in (0, 1)");
  std::vector<double> out;
  double eps = eps_start;
  while (eps > eps_min * (1.0 + 1e-12)) {
    out.push_back(eps);
    eps *= eps_ratio;
  }
  out.push_back(eps_min);
  return out;
}

void ContinuationConfig::validate(const PolarGrid& grid) const {
  (void)schedule();
  if (eps_min < eps_floor_cells * grid.dr() * (1.0 - 1e-12))
    throw ParameterError("eps_min = " + std::to_string(eps_min) + " is below " +
                         std::to_string(eps_floor_cells) + " radial cells (" +
                         std::to_string(eps_floor_cells * grid.dr()) + "); refine the grid");
  if (max_newton < 1) throw ParameterError("max_newton must be positive");
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
}

namespace {

Eigen::VectorXd constraint_row(const PolarGrid& g) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
  const auto w = origin_weights(g);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < g.n_phi(); ++j) c[g.index(i, j)] = w[i] / g.n_phi();
  return c;
}

double max_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Residual pieces at a trial point, evaluated once per line-search probe.
struct Eval {
  Eigen::VectorXd r1;  // pointwise -Delta_h u - f_eps(u)
  Eigen::VectorXd df;  // f_eps'(u)
  double r2 = 0.0;     // u(0)
  double merit = 0.0;
};

Eval evaluate(const DiscreteLaplacian& lap, const Eigen::VectorXd& lift_g, const Eigen::VectorXd& c,
              const Eigen::VectorXd& u, double kappa, double eps) {
  const std::size_t n = static_cast<std::size_t>(u.size());
  Eval e;
  Eigen::VectorXd f(u.size());
  e.df.resize(u.size());
  kernels::omp::heaviside(eps, {u.data(), n}, {f.data(), n}, {e.df.data(), n});
  e.r1 = (lap.apply(u) - lift_g + kappa * lap.unit_lift()).cwiseQuotient(lap.areas()) - f;
  e.r2 = c.dot(u);
  e.merit = std::max(max_abs(e.r1), std::abs(e.r2));
  return e;
}

// Solves K x = b for the two bordered right-hand sides with one factorization.
class BlockSolver {
 public:
  explicit BlockSolver(LinearBackend backend) : backend_(backend) {}

  bool factor(const Eigen::SparseMatrix<double>& K) {
    K_ = &K;
    if (backend_ == LinearBackend::iterative) {
      iter_.compute(K);
      if (iter_.info() == Eigen::Success) {
        use_iterative_ = true;
        return true;
      }
    }
    use_iterative_ = false;
    if (!analyzed_) {
      lu_.analyzePattern(K);
      analyzed_ = true;
    }
    lu_.factorize(K);
    return lu_.info() == Eigen::Success;
  }

  Eigen::VectorXd solve(const Eigen::VectorXd& b) {
    if (use_iterative_) {
      Eigen::VectorXd x = iter_.solve(b);
      const double bn = b.norm();
      if (iter_.info() == Eigen::Success && (*K_ * x - b).norm() <= 1e-12 * (bn > 0 ? bn : 1.0))
        return x;
      // Breakdown on the indefinite block: switch this iteration to LU.
      use_iterative_ = false;
      if (!analyzed_) {
        lu_.analyzePattern(*K_);
        analyzed_ = true;
      }
      lu_.factorize(*K_);
    }
    return lu_.solve(b);
  }

 private:
  LinearBackend backend_;
  const Eigen::SparseMatrix<double>* K_ = nullptr;
  bool analyzed_ = false;
  bool use_iterative_ = false;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> iter_;
};

Eigen::SparseMatrix<double> block_from(const DiscreteLaplacian& lap, const Eigen::VectorXd& df) {
  Eigen::SparseMatrix<double> K = lap.stiffness();
  K.diagonal() -= lap.areas().cwiseProduct(df);
  return K;
}

Eigen::VectorXd derivative_of(const ScalarField& u, double eps) {
  const std::size_t n = u.size();
  Eigen::VectorXd f(u.size()), df(u.size());
  kernels::omp::heaviside(eps, u.values(), {f.data(), n}, {df.data(), n});
  return df;
}

}  // namespace

BorderedResidual bordered_residual(const DiscreteLaplacian& lap, const ScalarField& u, double kappa,
                                   double eps, const ArcData& g) {
  const Eval e = evaluate(lap, lap.lift(g), constraint_row(lap.grid()), to_vector(u), kappa, eps);
  return {e.r1, e.r2};
}

Eigen::SparseMatrix<double> jacobian_block(const DiscreteLaplacian& lap, const ScalarField& u, double eps) {
  return block_from(lap, derivative_of(u, eps));
}

BorderedResidual jacobian_apply(const DiscreteLaplacian& lap, const ScalarField& u, double eps,
                                const ScalarField& du, double dkappa) {
  const Eigen::VectorXd d = to_vector(du);
  const Eigen::VectorXd flux = jacobian_block(lap, u, eps) * d + dkappa * lap.unit_lift();
  return {flux.cwiseQuotient(lap.areas()), constraint_row(lap.grid()).dot(d)};
}

Eigen::VectorXd pointwise_residual(const DiscreteLaplacian& lap, const ScalarField& u,
                                   const ArcData& g, double kappa,
                                   const std::function<double(double)>& source) {
  const Eigen::VectorXd uv = to_vector(u);
  Eigen::VectorXd src(uv.size());
  for (Eigen::Index n = 0; n < uv.size(); ++n) src[n] = source(uv[n]);
  return (lap.apply(uv) - lap.lift(g) + kappa * lap.unit_lift()).cwiseQuotient(lap.areas()) - src;
}

NewtonState initial_guess(const DiscreteLaplacian& lap, const ArcData& g) {
  const PolarGrid& grid = lap.grid();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(lap.stiffness());
  if (ldlt.info() != Eigen::Success) throw SolverStagnation("LDL^T factorization failed", 1.0);
  const Eigen::VectorXd with_source = ldlt.solve(lap.lift(g) + lap.areas());
  const Eigen::VectorXd shift_response = ldlt.solve(lap.unit_lift());
  const Eigen::VectorXd c = constraint_row(grid);
  const double kappa = c.dot(with_source) / c.dot(shift_response);
  const Eigen::VectorXd u = with_source - kappa * shift_response;
  return {from_vector(grid, u), kappa};
}

StageReport newton_stage(const DiscreteLaplacian& lap, NewtonState& state, double eps,
                         const ArcData& g, const ContinuationConfig& config) {
  const PolarGrid& grid = lap.grid();
  if (!(eps > 0.0)) throw ParameterError("regularization eps must be positive");
  if (eps < config.eps_floor_cells * grid.dr() * (1.0 - 1e-12))
    throw ParameterError("eps = " + std::to_string(eps) + " is below the resolvable floor of " +
                         std::to_string(config.eps_floor_cells) + " radial cells");
  if (!(state.u.grid() == grid)) throw ParameterError("Newton state lives on a different grid");

  const Eigen::VectorXd lift_g = lap.lift(g);
  const Eigen::VectorXd c = constraint_row(grid);
  Eigen::VectorXd u = to_vector(state.u);
  double kappa = state.kappa;
  Eval cur = evaluate(lap, lift_g, c, u, kappa, eps);

  StageReport rep{eps, 0, max_abs(cur.r1), std::abs(cur.r2)};
  if (cur.merit <= config.tol) return rep;

  Eigen::SparseMatrix<double> K;
  BlockSolver block(config.backend);
  for (int it = 1; it <= config.max_newton; ++it) {
    K = block_from(lap, cur.df);
    if (!block.factor(K)) {
      rep.iterations = it;
      throw StageFailed("singular bordered Jacobian at eps = " + std::to_string(eps), rep);
    }
    const Eigen::VectorXd y1 = block.solve(-lap.areas().cwiseProduct(cur.r1));
    const Eigen::VectorXd y2 = block.solve(lap.unit_lift());
    const double schur = c.dot(y2);
    if (!(std::abs(schur) > 0.0) || !std::isfinite(schur)) {
      rep.iterations = it;
      throw StageFailed("degenerate constraint pivot at eps = " + std::to_string(eps), rep);
    }
    const double dkappa = (c.dot(y1) + cur.r2) / schur;
    const Eigen::VectorXd du = y1 - dkappa * y2;

    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= config.max_backtracks; ++bt) {
      Eigen::VectorXd trial = u + step * du;
      Eval e = evaluate(lap, lift_g, c, trial, kappa + step * dkappa, eps);
      if (std::isfinite(e.merit) && e.merit <= (1.0 - config.armijo_c * step) * cur.merit) {
        u = std::move(trial);
        kappa += step * dkappa;
        cur = std::move(e);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    rep.iterations = it;
    rep.pde_residual = max_abs(cur.r1);
    rep.origin_residual = std::abs(cur.r2);
    if (!accepted) {
      state = {from_vector(grid, u), kappa};
      throw StageFailed("line search failed at eps = " + std::to_string(eps) +
                            " (residual " + std::to_string(cur.merit) + ")",
                        rep);
    }
    if (cur.merit <= config.tol) {
      state = {from_vector(grid, u), kappa};
      return rep;
    }
  }
  state = {from_vector(grid, u), kappa};
  throw StageFailed("Newton did not converge in " + std::to_string(config.max_newton) +
                        " iterations at eps = " + std::to_string(eps) + " (residual " +
                        std::to_string(cur.merit) + ")",
                    rep);
}

Solution solve_fixed_point(int k, int n_r, int n_phi, const BoundaryData& g,
                           const ContinuationConfig& config) {
  const PolarGrid grid = build_sector_grid(SectorSpec{k}, n_r, n_phi);
  if (!g.compatible_with(k))
    throw ParameterError("boundary mode " + std::to_string(g.mode) +
                         " is not even across the edges of K_{pi/" + std::to_string(k) + "}");
  config.validate(grid);
  const DiscreteLaplacian lap(grid);
  const ArcData arc = [g](double phi) { return g(phi); };

  NewtonState state = initial_guess(lap, arc);
  Solution sol;
  sol.k = k;
  sol.boundary = g;
  std::optional<Solution> last;
  for (double eps : config.schedule()) {
    StageReport rep;
    try {
      rep = newton_stage(lap, state, eps, arc, config);
    } catch (StageFailed& failure) {
      failure.completed = sol.stages;
      failure.last_converged = last;
      throw;
    }
    sol.stages.push_back(rep);
    sol.u = state.u;
    sol.kappa = state.kappa;
    sol.eps = eps;
    sol.pde_residual = rep.pde_residual;
    sol.origin_residual = rep.origin_residual;
    last = sol;
  }
  return sol;
}

ResidualCheck residual_check(const Solution& sol, const DiscreteLaplacian& lap) {
  const SmoothedHeaviside f(sol.eps);
  const BoundaryData g = sol.boundary;
  const Eigen::VectorXd r = pointwise_residual(
      lap, sol.u, [g](double phi) { return g(phi); }, sol.kappa, [&f](double z) { return f(z); });
  ResidualCheck out;
  out.pde_residual = max_abs(r);
  out.origin_residual = std::abs(eval_origin(sol.u));
  const PolarGrid& grid = sol.u.grid();
  double area = 0.0;
  for (int i = 0; i < grid.n_r(); ++i)
    for (int j = 0; j < grid.n_phi(); ++j)
      if (std::abs(sol.u(i, j)) <= sol.eps) area += grid.area(i);
  out.transition_area = area * grid.multiplicity();
  return out;
}

}  // namespace fbsing
