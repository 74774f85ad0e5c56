#include "fbsing/monotonicity.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fbsing/kernels.hpp"

namespace fbsing {

namespace {

constexpr double kSlack = 1e-12;

void check_window(const PolarGrid& g, double r) {
  if (!(r >= g.dr() - kSlack && r <= 1.0 - g.dr() + kSlack))
    throw ParameterError("monotonicity functional radius " + std::to_string(r) + " outside [dr, 1 - dr]");
}

// Per-field data reused across radii.
//
// Green's identity turns int_{B_r} |grad u|^2 into int_{dB_r} u du/dr - int_{B_r} u Lap u,
// so Phi(r) = r^-4 [int_{dB_r} u (du/dr - 2u/r) - int_{B_r} (u Lap u + 2 u^+)].
// The two O(r^4 |D^2 u|^2) terms of the definition cancel analytically here
// instead of numerically, which keeps Phi accurate at radii of a few cells.
struct PhiParts {
  std::vector<double> ball_rings;
  ScalarField d_r;
};

PhiParts prepare(const ScalarField& u) {
  const PolarGrid& g = u.grid();
  const kernels::Stencil st = kernels::make_stencil(g);
  const auto uv = u.values();
  std::vector<double> lu(uv.size());
  kernels::omp::apply_stencil(st, uv, lu);  // L u = -area * Lap u away from the arc
  ScalarField density(g);
  auto e = density.values();
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_phi(); ++j) {
      const std::size_t n = g.index(i, j);
      e[n] = uv[n] * lu[n] / g.area(i) - 2.0 * std::max(uv[n], 0.0);
    }
  return {ring_integrals(density), gradient(u).d_r};
}

struct CircleTerms {
  double cross = 0.0;     // int_{dB_r} u (du/dr - 2u/r)
  double rate_sq = 0.0;   // int_{dB_r} (du/dr - 2u/r)^2
};

CircleTerms circle_terms(const ScalarField& u, const ScalarField& d_r, double r) {
  const int m = default_samples(u.grid());
  std::vector<double> us(m), ds(m);
  kernels::omp::sample_circle(u.grid(), u.values(), r, us);
  kernels::omp::sample_circle(u.grid(), d_r.values(), r, ds);
  CircleTerms t;
  for (int s = 0; s < m; ++s) {
    const double q = ds[s] - 2.0 * us[s] / r;
    t.cross += us[s] * q;
    t.rate_sq += q * q;
  }
  const double w = 2.0 * std::numbers::pi * r / m;
  t.cross *= w;
  t.rate_sq *= w;
  return t;
}

double phi_from(const PolarGrid& g, const PhiParts& parts, const CircleTerms& c, double r) {
  const double r2 = r * r;
  return (ball_from_rings(g, parts.ball_rings, r) + c.cross) / (r2 * r2);
}

}  // namespace

double MonotonicityProfile::defect(std::size_t a, std::size_t b) const {
  double d = 0.0;
  for (std::size_t i = a; i < b; ++i) d += defect_to_next[i];
  return d;
}

bool MonotonicityProfile::nondecreasing(double tol) const {
  for (std::size_t a = 0; a < phi.size(); ++a)
    for (std::size_t b = a + 1; b < phi.size(); ++b)
      if (phi[b] < phi[a] - tol) return false;
  return true;
}

double phi(const ScalarField& u, double r) {
  check_window(u.grid(), r);
  const PhiParts parts = prepare(u);
  return phi_from(u.grid(), parts, circle_terms(u, parts.d_r, r), r);
}

MonotonicityProfile phi_profile(const ScalarField& u, std::span<const double> radii) {
  const PolarGrid& g = u.grid();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    check_window(g, radii[i]);
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw ParameterError("profile radii must be strictly increasing");
  }
  const PhiParts parts = prepare(u);
  MonotonicityProfile p;
  p.radii.assign(radii.begin(), radii.end());
  p.window_lo = g.dr();
  p.window_hi = 1.0 - g.dr();
  p.phi.resize(radii.size());
  p.rate.resize(radii.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    const CircleTerms c = circle_terms(u, parts.d_r, r);
    p.phi[i] = phi_from(g, parts, c, r);
    p.rate[i] = 2.0 * c.rate_sq / (r * r * r * r);
  }
  if (radii.size() > 1) p.defect_to_next.resize(radii.size() - 1);
  for (std::size_t i = 0; i + 1 < radii.size(); ++i) {
    const double h = radii[i + 1] - radii[i];
    p.defect_to_next[i] = (p.phi[i + 1] - p.phi[i]) - 0.5 * h * (p.rate[i] + p.rate[i + 1]);
  }
  return p;
}

double energy_bound_integral(double M, double C1) {
  if (!(M >= 0.0)) throw ParameterError("energy bound needs M >= 0");
  if (!(C1 > 0.0)) throw ParameterError("energy bound needs C1 > 0");
  const double base = std::numbers::pi * C1 * C1;
  if (M <= C1) return base;  // M r^2 cos 2phi <= M <= C1 on the unit disk
  // Positive part lives in two congruent lobes around phi = 0 and phi = pi, each
  // symmetric about its axis; integrate phi in [0, phi_c] with M cos(2 phi_c) = C1
  // and multiply by 4.
  const double phi_c = 0.5 * std::acos(C1 / M);
  auto radial = [&](double ph) {
    const double c = M * std::cos(2.0 * ph);
    if (c <= C1) return 0.0;
    const double s2 = C1 / c;  // squared radius where the integrand changes sign
    return c * (1.0 - s2 * s2) / 4.0 - C1 * (1.0 - s2) / 2.0;
  };
  constexpr int panels = 4096;
  const double h = phi_c / panels;
  double acc = radial(0.0) + radial(phi_c);
  for (int n = 1; n < panels; ++n) acc += (n % 2 ? 4.0 : 2.0) * radial(n * h);
  const double positive = 4.0 * acc * h / 3.0;
  return base - 2.0 * positive;
}

MonteCarloEstimate energy_bound_monte_carlo(double M, double C1, std::size_t samples,
                                            std::uint64_t seed) {
  if (samples < 2) throw ParameterError("Monte Carlo needs at least two samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    const double r2 = unit(rng);
    const double th = 2.0 * std::numbers::pi * unit(rng);
    const double v = C1 * C1 - 2.0 * std::max(M * r2 * std::cos(2.0 * th) - C1, 0.0);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / samples;
  const double var = std::max(sum_sq / samples - mean * mean, 0.0);
  const double area = std::numbers::pi;
  return {area * mean, area * std::sqrt(var / samples)};
}

double energy_threshold(double C1, double lo, double hi, double tol) {
  double vlo = energy_bound_integral(lo, C1);
  const double vhi = energy_bound_integral(hi, C1);
  if (!(vlo >= 0.0 && vhi < 0.0))
    throw ParameterError("energy threshold bracket does not contain a sign change");
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (energy_bound_integral(mid, C1) >= 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fbsing
