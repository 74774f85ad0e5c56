#include "fbsing/field.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <string>

#include "fbsing/kernels.hpp"

namespace fbsing {

namespace {

constexpr double kRadiusSlack = 1e-12;

void check_circle_radius(const PolarGrid& g, double r) {
  if (!(r >= 0.5 * g.dr() - kRadiusSlack && r <= 1.0 - g.dr() + kRadiusSlack))
    throw ParameterError("circle radius " + std::to_string(r) + " outside [dr/2, 1 - dr]");
}

}  // namespace

ScalarField::ScalarField(PolarGrid grid) : grid_(grid), values_(grid.size(), 0.0) {}

ScalarField::ScalarField(PolarGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ParameterError("field has " + std::to_string(values_.size()) + " values, grid has " +
                         std::to_string(grid_.size()) + " cells");
  for (double v : values_)
    if (!std::isfinite(v)) throw ParameterError("field contains non-finite values");
}

ScalarField ScalarField::map(const std::function<double(double)>& f) const {
  ScalarField out(grid_);
  auto dst = out.values();
#pragma omp parallel for schedule(static)
  for (std::size_t n = 0; n < values_.size(); ++n) dst[n] = f(values_[n]);
  return out;
}

double CircleTrace::mean_square() const {
  double acc = 0.0;
  for (double v : samples) acc += v * v;
  return acc / static_cast<double>(samples.size());
}

double CircleTrace::mode_energy(int l) const {
  if (l == 0) return a[0] * a[0];
  return 0.5 * (a[l] * a[l] + b[l] * b[l]);
}

CircleTrace CircleTrace::scaled(double c) const {
  CircleTrace out = *this;
  for (double& v : out.samples) v *= c;
  for (int l = 0; l <= kFourierModes; ++l) {
    out.a[l] *= c;
    out.b[l] *= c;
  }
  return out;
}

std::vector<double> ring_integrals(const ScalarField& field) {
  std::vector<double> rings(field.grid().n_r());
  kernels::omp::ring_sums(field.grid(), field.values(), rings);
  return rings;
}

double ball_from_rings(const PolarGrid& grid, std::span<const double> rings, double r) {
  if (!(r > 0.0 && r <= 1.0 + kRadiusSlack))
    throw ParameterError("ball radius " + std::to_string(r) + " outside (0, 1]");
  const double cells = r / grid.dr();
  int full = static_cast<int>(std::floor(cells + kRadiusSlack));
  if (full > grid.n_r()) full = grid.n_r();
  double acc = 0.0;
  for (int i = 0; i < full; ++i) acc += rings[i];
  if (full < grid.n_r()) {
    const double a = grid.r_face(full);
    const double b = grid.r_face(full + 1);
    const double frac = (r * r - a * a) / (b * b - a * a);
    if (frac > 0.0) acc += frac * rings[full];
  }
  return acc * grid.multiplicity();
}

double integrate_ball(const ScalarField& field, double r) {
  return ball_from_rings(field.grid(), ring_integrals(field), r);
}

double integrate_ball(const ScalarField& field, const std::function<double(double)>& integrand,
                      double r) {
  return integrate_ball(field.map(integrand), r);
}

int default_samples(const PolarGrid& grid) {
  const int m = 4 * grid.disk_columns();
  return m < 64 ? 64 : m;
}

double integrate_circle(const ScalarField& field, double r,
                        const std::function<double(double)>& integrand, int samples) {
  const PolarGrid& g = field.grid();
  check_circle_radius(g, r);
  const int m = samples > 0 ? samples : default_samples(g);
  std::vector<double> trace(m);
  kernels::omp::sample_circle(g, field.values(), r, trace);
  double acc = 0.0;
  if (integrand) {
    for (double v : trace) acc += integrand(v);
  } else {
    for (double v : trace) acc += v;
  }
  return acc * (2.0 * std::numbers::pi * r / m);
}

CircleTrace trace_on_circle(const ScalarField& field, double r, int samples) {
  const PolarGrid& g = field.grid();
  if (!(r >= g.dr() - kRadiusSlack && r <= 1.0 - g.dr() + kRadiusSlack))
    throw ParameterError("trace radius " + std::to_string(r) + " outside [dr, 1 - dr]");
  const int m = samples > 0 ? samples : default_samples(g);
  if (m < 64) throw ParameterError("circle traces need at least 64 samples");
  CircleTrace tr;
  tr.radius = r;
  tr.samples.resize(m);
  kernels::omp::sample_circle(g, field.values(), r, tr.samples);

  const double step = 2.0 * std::numbers::pi / m;
  double mean = 0.0;
  for (double v : tr.samples) mean += v;
  tr.a[0] = mean / m;
  for (int l = 1; l <= kFourierModes; ++l) {
    double ca = 0.0, sb = 0.0;
    for (int s = 0; s < m; ++s) {
      // Reduce l*s modulo m so symmetric sample pairs see identical phases.
      const double theta = step * static_cast<double>((static_cast<long>(l) * s) % m);
      ca += tr.samples[s] * std::cos(theta);
      sb += tr.samples[s] * std::sin(theta);
    }
    tr.a[l] = 2.0 * ca / m;
    tr.b[l] = 2.0 * sb / m;
  }
  return tr;
}

Gradient gradient(const ScalarField& field) {
  Gradient out{ScalarField(field.grid()), ScalarField(field.grid())};
  kernels::omp::gradient(field.grid(), field.values(), out.d_r.values(), out.d_t.values());
  return out;
}

ScalarField gradient_sq(const ScalarField& field) {
  const Gradient g = gradient(field);
  ScalarField out(field.grid());
  auto dst = out.values();
  const auto dr = g.d_r.values();
  const auto dt = g.d_t.values();
  for (std::size_t n = 0; n < dst.size(); ++n) dst[n] = dr[n] * dr[n] + dt[n] * dt[n];
  return out;
}

std::array<double, 4> origin_weights(const PolarGrid& grid) {
  Eigen::Matrix<double, 4, 3> V;
  for (int i = 0; i < 4; ++i) {
    const double s = grid.r(i) * grid.r(i);
    V(i, 0) = 1.0;
    V(i, 1) = s;
    V(i, 2) = s * s;
  }
  const Eigen::Matrix3d normal = V.transpose() * V;
  const Eigen::Matrix<double, 3, 4> pinv = normal.ldlt().solve(V.transpose());
  return {pinv(0, 0), pinv(0, 1), pinv(0, 2), pinv(0, 3)};
}

double eval_origin(const ScalarField& field) {
  const PolarGrid& g = field.grid();
  const auto w = origin_weights(g);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    double mean = 0.0;
    for (int j = 0; j < g.n_phi(); ++j) mean += field(i, j);
    acc += w[i] * (mean / g.n_phi());
  }
  return acc;
}

ScalarField reflect_to_disk(const ScalarField& field, const SymmetryGroup& sym) {
  const PolarGrid& g = field.grid();
  if (g.is_disk()) throw ParameterError("field is already defined on the full disk");
  if (sym.k != g.spec().k)
    throw ParameterError("symmetry order " + std::to_string(sym.k) +
                         " does not match sector order " + std::to_string(g.spec().k));
  const PolarGrid disk = g.full_disk();
  ScalarField out(disk);
  for (int i = 0; i < disk.n_r(); ++i)
    for (int j = 0; j < disk.n_phi(); ++j) out.at(i, j) = field(i, g.fold(j));
  return out;
}

ScalarField restrict_to_sector(const ScalarField& disk_field, const PolarGrid& sector) {
  const PolarGrid& d = disk_field.grid();
  if (!d.is_disk() || sector.is_disk() || d.n_r() != sector.n_r() ||
      d.n_phi() != sector.disk_columns())
    throw ParameterError("disk field is not the reflection of the given sector grid");
  ScalarField out(sector);
  for (int i = 0; i < sector.n_r(); ++i)
    for (int j = 0; j < sector.n_phi(); ++j) out.at(i, j) = disk_field(i, j);
  return out;
}

}  // namespace fbsing
