#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbsing {

/// Raised for invalid user-facing parameters (grid sizes, radii, orders).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Disk sector K = {r(cos phi, sin phi) : 0 < r < 1, 0 < phi < pi/k}.
struct SectorSpec {
  int k = 2;

  double opening() const { return std::numbers::pi / k; }
  int copies() const { return 2 * k; }
  bool operator==(const SectorSpec&) const = default;
};

/// Reflection group of a sector: the 2k mirror images that tile the disk.
struct SymmetryGroup {
  int k = 2;

  int copies() const { return 2 * k; }
  /// Angles of the mirror axes, {0, pi/k, 2pi/k, ...}.
  std::vector<double> axes() const;
};

/// Cell-centered polar grid over a sector, or over the full disk obtained
/// from a sector by even reflection across its edges.
///
/// Cells are stored ring-major: index(i, j) = i * n_phi + j, with i the
/// radial ring (center r_i = (i + 1/2) dr) and j the angular column
/// (center phi_j = (j + 1/2) dphi). There is no node at r = 0.
class PolarGrid {
 public:
  PolarGrid() = default;

  static PolarGrid sector(SectorSpec spec, int n_r, int n_phi);
  /// Disk grid with 2k * n_phi angular cells whose copies mirror this sector.
  PolarGrid full_disk() const;

  const SectorSpec& spec() const { return spec_; }
  int n_r() const { return n_r_; }
  int n_phi() const { return n_phi_; }
  std::size_t size() const { return static_cast<std::size_t>(n_r_) * n_phi_; }
  bool is_disk() const { return disk_; }

  double dr() const { return dr_; }
  double dphi() const { return dphi_; }
  /// Angular extent covered by the stored cells.
  double span() const { return dphi_ * n_phi_; }
  /// Number of stored-grid copies needed to cover the disk.
  int multiplicity() const { return disk_ ? 1 : spec_.copies(); }
  /// Angular cells of the reflected disk.
  int disk_columns() const { return disk_ ? n_phi_ : spec_.copies() * n_phi_; }

  double r(int i) const { return (i + 0.5) * dr_; }
  double phi(int j) const { return (j + 0.5) * dphi_; }
  double r_face(int i) const { return i * dr_; }
  /// Exact cell area r_i dr dphi.
  double area(int i) const { return r(i) * dr_ * dphi_; }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * n_phi_ + j;
  }

  /// Map any angular column index of the reflected disk (wrapping modulo the
  /// disk column count) to the stored column holding the same value.
  int fold(int disk_column) const;

  bool operator==(const PolarGrid&) const = default;

 private:
  SectorSpec spec_{};
  int n_r_ = 0;
  int n_phi_ = 0;
  bool disk_ = false;
  double dr_ = 0.0;
  double dphi_ = 0.0;
};

PolarGrid build_sector_grid(SectorSpec spec, int n_r, int n_phi);

/// Sum of the stored cell areas: span/2 (pi/(2k) for a sector, pi for a disk).
double total_area(const PolarGrid& grid);

}  // namespace fbsing
