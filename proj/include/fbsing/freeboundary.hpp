#pragma once

#include <span>
#include <vector>

#include "fbsing/field.hpp"

namespace fbsing {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Polyline {
  std::vector<Point2> points;
  double length = 0.0;
  bool closed = false;
  /// Starts at the origin junction where four or more arcs meet.
  bool from_origin = false;
};

/// Zero level set of a field reflected to the full disk.
struct LevelSet {
  ScalarField field;  ///< the disk field the set was extracted from
  std::vector<Polyline> polylines;
  /// Largest |u| of the linear interpolant at an emitted edge crossing.
  double max_vertex_residual = 0.0;
  /// Crossings of ring 0, i.e. free-boundary branches entering the central cap.
  int origin_branches = 0;

  bool empty() const { return polylines.empty(); }
};

/// Marching squares on the logical (r, phi) grid of cell centers, mapped to
/// Cartesian coordinates. Saddle cells follow the sign of the cell average.
/// The cap inside the innermost ring joins two crossings by a chord and four
/// or more at the origin. Sector fields are reflected first. u > 0 is the
/// positive phase; zero values count as nonpositive.
LevelSet extract_zero_set(const ScalarField& u);

/// Angles in [0, 2 pi) where the trace on the circle of radius r changes sign,
/// located by linear interpolation between consecutive samples.
std::vector<double> crossings_on_circle(const ScalarField& u, double r, int samples = 0);

struct Arc {
  std::vector<double> radii;
  /// Unwrapped along the arc; the first entry lies in [0, 2 pi).
  std::vector<double> angles;
  /// Least-squares line in r evaluated at r = 0, reduced to [0, 2 pi).
  double limit_angle = 0.0;
};

struct ArcFit {
  std::vector<Arc> arcs;  ///< sorted by limit angle
  /// Cyclic differences of consecutive limit angles; sums to 2 pi.
  std::vector<double> gaps;
  /// Radii whose crossing count differs from the count at the smallest radius.
  std::vector<double> topology_changes;

  bool topology_changed() const { return !topology_changes.empty(); }
};

/// Crossing angles on each circle, linked into arcs by nearest-angle matching
/// outward from the smallest radius, capped at half the minimal angular gap.
/// Radii strictly increasing inside [dr, 1 - dr].
ArcFit fit_arcs_at_origin(const LevelSet& ls, std::span<const double> radii);

}  // namespace fbsing
