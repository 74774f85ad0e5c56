#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fbsing/mesh.hpp"

namespace fbsing {

/// Real values at the cell centers of a PolarGrid.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(PolarGrid grid);
  /// Throws ParameterError on a size mismatch or non-finite entries.
  ScalarField(PolarGrid grid, std::vector<double> values);

  template <class F>
  static ScalarField from_function(const PolarGrid& grid, F&& f) {
    ScalarField out(grid);
    for (int i = 0; i < grid.n_r(); ++i)
      for (int j = 0; j < grid.n_phi(); ++j) out.at(i, j) = f(grid.r(i), grid.phi(j));
    return out;
  }

  const PolarGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::size_t size() const { return values_.size(); }

  double operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  double& at(int i, int j) { return values_[grid_.index(i, j)]; }

  /// Pointwise image under f.
  ScalarField map(const std::function<double(double)>& f) const;

 private:
  PolarGrid grid_;
  std::vector<double> values_;
};

inline constexpr int kFourierModes = 8;

/// Samples of a field on a full circle plus its low Fourier content.
struct CircleTrace {
  double radius = 0.0;
  /// samples[s] at theta_s = 2 pi s / m.
  std::vector<double> samples;
  /// u ~ a[0] + sum_l a[l] cos(l theta) + b[l] sin(l theta); b[0] = 0.
  std::array<double, kFourierModes + 1> a{};
  std::array<double, kFourierModes + 1> b{};

  double mean_square() const;
  /// Mean-square contribution of mode l: a0^2 for l = 0, (a^2 + b^2) / 2 otherwise.
  double mode_energy(int l) const;
  /// Fourier coefficients recomputed after scaling the samples by c.
  CircleTrace scaled(double c) const;
};

/// Ring-wise area integrals of a field (stored copy only).
std::vector<double> ring_integrals(const ScalarField& field);

/// Integral over B_r of the reflected disk field given its ring integrals.
/// A ring cut by r contributes its area fraction (r^2 - a^2) / (b^2 - a^2).
double ball_from_rings(const PolarGrid& grid, std::span<const double> rings, double r);

/// Integral over B_r of the reflected field, 0 < r <= 1.
double integrate_ball(const ScalarField& field, double r);
double integrate_ball(const ScalarField& field, const std::function<double(double)>& integrand,
                      double r);

/// Default circle sample count: four samples per disk column.
int default_samples(const PolarGrid& grid);

/// Line integral over the full circle of radius r of integrand(u).
/// Requires dr/2 <= r <= 1 - dr.
double integrate_circle(const ScalarField& field, double r,
                        const std::function<double(double)>& integrand = {}, int samples = 0);

/// Trace on the circle of radius r with trapezoidal Fourier coefficients.
/// Requires dr/2 <= r <= 1 - dr and samples >= 64.
CircleTrace trace_on_circle(const ScalarField& field, double r, int samples = 0);

struct Gradient {
  ScalarField d_r;  ///< du/dr
  ScalarField d_t;  ///< r^-1 du/dphi
};

/// Central differences with polar metric; across-origin neighbor on the
/// innermost ring, one-sided second order on the outer ring, ghost
/// reflection on Neumann edges.
Gradient gradient(const ScalarField& field);
ScalarField gradient_sq(const ScalarField& field);

/// Ring weights w such that u(0) ~ sum_i w_i <u>(r_i) over the innermost rings.
std::array<double, 4> origin_weights(const PolarGrid& grid);

/// u(0) from the angular means of the four innermost rings, fitted by a
/// least-squares quadratic in r^2 and evaluated at r = 0.
double eval_origin(const ScalarField& field);

/// Even reflection of a sector field across every mirror axis.
ScalarField reflect_to_disk(const ScalarField& field, const SymmetryGroup& sym);
ScalarField restrict_to_sector(const ScalarField& disk_field, const PolarGrid& sector);

}  // namespace fbsing
