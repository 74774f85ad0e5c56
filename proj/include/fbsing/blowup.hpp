#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbsing/field.hpp"

namespace fbsing {

/// S(0, r) fell below the floor, so the rescaled trace is undefined.
class DegenerateTrace : public std::runtime_error {
 public:
  DegenerateTrace(double radius, double s);
  double radius;
  double s;
};

/// S(0, r) = (r^-1 int_{dB_r} u^2)^{1/2}.
double s_norm(const ScalarField& u, double r);

inline constexpr double kDefaultSFloor = 1e-12;

/// Trace of u(r x) / S(0, r) on the unit circle. Throws DegenerateTrace when
/// S(0, r) <= s_floor.
CircleTrace blowup_profile(const ScalarField& u, double r, double s_floor = kDefaultSFloor);

/// pi (a2^2 + b2^2) of a normalized trace: the share of its L2 norm in mode 2.
double mode2_energy_fraction(const CircleTrace& normalized);

struct Thresholds {
  /// delta_Phi = max(phi_rel * |Phi(r_max)|, phi_abs).
  double phi_rel = 0.05;
  double phi_abs = 1e-3;
  /// S/r^2 counts as decreasing toward the origin when
  /// ratio(r_min) < (1 - trend_tol) * ratio(r_max).
  double trend_tol = 1e-3;
  double s_floor = kDefaultSFloor;
};

enum class BlowupCase { Case1, Case3, Inconclusive };

std::string to_string(BlowupCase c);

struct BlowupReport {
  std::vector<double> radii;
  std::vector<double> s;
  /// S(0, r) / r^2.
  std::vector<double> ratio;
  /// Normalized traces; empty samples where S is below the floor.
  std::vector<CircleTrace> traces;
  std::vector<double> mode2_fraction;
  std::vector<bool> degenerate;
  double phi_min = 0.0;  ///< Phi at the smallest radius
  double phi_max = 0.0;  ///< Phi at the largest radius
  double delta_phi = 0.0;
  /// ratio(r_min) / ratio(r_max); 0 when S(r_max) is below the floor.
  double trend = 0.0;
  BlowupCase classification = BlowupCase::Inconclusive;

  /// Fourier mode carrying the most energy of trace i (-1 when degenerate).
  int dominant_mode(std::size_t i) const;
};

/// Radii strictly increasing, at least three, inside [dr, 1 - dr].
BlowupReport blowup_report(const ScalarField& u, std::span<const double> radii,
                           const Thresholds& thresholds = {});

/// Case1 when Phi(r_min) < -delta and S/r^2 does not decrease as r shrinks;
/// Case3 when |Phi(r_min)| <= delta and S/r^2 decreases as r shrinks.
/// Inconclusive when S(r_max) is below the floor. Case 2 cannot occur in the
/// plane and is never returned.
BlowupCase classify(const ScalarField& u, std::span<const double> radii,
                    const Thresholds& thresholds = {});

}  // namespace fbsing
