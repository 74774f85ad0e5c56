#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fbsing/field.hpp"

namespace fbsing {

/// Monotonicity functional at the origin in two dimensions,
///   Phi(r) = r^-4 int_{B_r} (|grad u|^2 - 2 max(u, 0)) - 2 r^-5 int_{dB_r} u^2,
/// sampled on a set of radii, together with the defect of its derivative identity
///   Phi(s) - Phi(p) = int_p^s r^-4 int_{dB_r} 2 (du/dnu - 2 u / r)^2.
struct MonotonicityProfile {
  std::vector<double> radii;
  std::vector<double> phi;
  /// r^-4 int_{dB_r} 2 (du/dnu - 2u/r)^2 at each radius.
  std::vector<double> rate;
  /// D between consecutive radii, trapezoid in r; size radii.size() - 1.
  std::vector<double> defect_to_next;
  /// Radii admitted by phi(): [dr, 1 - dr].
  double window_lo = 0.0;
  double window_hi = 0.0;

  /// D(radii[a], radii[b]) for a < b.
  double defect(std::size_t a, std::size_t b) const;
  /// Phi(radii[b]) - Phi(radii[a]).
  double increment(std::size_t a, std::size_t b) const { return phi[b] - phi[a]; }
  /// Phi(s) >= Phi(p) - tol for every sampled p < s.
  bool nondecreasing(double tol) const;
};

/// Evaluated through Green's identity as
///   r^-4 [int_{dB_r} u (du/dr - 2u/r) - int_{B_r} (u Lap_h u + 2 u^+)],
/// with Lap_h the finite-volume Laplacian. Requires dr <= r <= 1 - dr.
double phi(const ScalarField& u, double r);

/// Radii must be strictly increasing and inside [dr, 1 - dr].
MonotonicityProfile phi_profile(const ScalarField& u, std::span<const double> radii);

/// int_{B_1} C1^2 - 2 (M (x1^2 - x2^2) - C1)^+ by semi-analytic quadrature:
/// exact radial integration, composite Simpson in angle. Requires M >= 0, C1 > 0.
double energy_bound_integral(double M, double C1);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Plain Monte Carlo estimate of energy_bound_integral, uniform in the disk.
MonteCarloEstimate energy_bound_monte_carlo(double M, double C1, std::size_t samples,
                                            std::uint64_t seed);

/// Smallest M with energy_bound_integral(M, C1) = 0, bisected inside [lo, hi].
/// Requires value(lo) >= 0 > value(hi).
double energy_threshold(double C1, double lo, double hi, double tol = 1e-10);

}  // namespace fbsing
