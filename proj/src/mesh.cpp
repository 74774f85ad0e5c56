#include "fbsing/mesh.hpp"

#include <cmath>
#include <numeric>

namespace fbsing {

std::vector<double> SymmetryGroup::axes() const {
  std::vector<double> out(copies());
  for (int m = 0; m < copies(); ++m) out[m] = m * std::numbers::pi / k;
  return out;
}

PolarGrid PolarGrid::sector(SectorSpec spec, int n_r, int n_phi) {
  if (spec.k < 1) throw ParameterError("sector order k must be >= 1");
  if (n_r < 8 || n_phi < 8)
    throw ParameterError("grid needs n_r, n_phi >= 8 (got " + std::to_string(n_r) + "x" +
                         std::to_string(n_phi) + ")");
  PolarGrid g;
  g.spec_ = spec;
  g.n_r_ = n_r;
  g.n_phi_ = n_phi;
  g.disk_ = false;
  g.dr_ = 1.0 / n_r;
  g.dphi_ = spec.opening() / n_phi;
  return g;
}

PolarGrid PolarGrid::full_disk() const {
  PolarGrid g = *this;
  if (disk_) return g;
  g.disk_ = true;
  g.n_phi_ = spec_.copies() * n_phi_;
  return g;
}

int PolarGrid::fold(int disk_column) const {
  const int total = disk_columns();
  int jd = disk_column % total;
  if (jd < 0) jd += total;
  if (disk_) return jd;
  const int copy = jd / n_phi_;
  const int local = jd % n_phi_;
  return (copy % 2 == 0) ? local : n_phi_ - 1 - local;
}

PolarGrid build_sector_grid(SectorSpec spec, int n_r, int n_phi) {
  return PolarGrid::sector(spec, n_r, n_phi);
}

double total_area(const PolarGrid& grid) {
  double sum = 0.0;
  for (int i = 0; i < grid.n_r(); ++i) sum += grid.area(i) * grid.n_phi();
  return sum;
}

}  // namespace fbsing
