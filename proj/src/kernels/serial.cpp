#include <cmath>

#include "fbsing/kernels.hpp"

namespace fbsing::kernels {

Stencil make_stencil(const PolarGrid& grid) {
  Stencil s;
  s.n_r = grid.n_r();
  s.n_phi = grid.n_phi();
  s.periodic = grid.is_disk();
  s.radial.resize(grid.n_r() - 1);
  for (int i = 0; i + 1 < grid.n_r(); ++i) s.radial[i] = grid.r_face(i + 1) * grid.dphi() / grid.dr();
  s.angular.resize(grid.n_r());
  for (int i = 0; i < grid.n_r(); ++i) s.angular[i] = grid.dr() / (grid.r(i) * grid.dphi());
  s.arc = 2.0 * grid.dphi() / grid.dr();
  return s;
}

namespace serial {

void apply_stencil(const Stencil& s, std::span<const double> u, std::span<double> out) {
  const int nr = s.n_r, np = s.n_phi;
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < np; ++j) {
      const std::size_t c = static_cast<std::size_t>(i) * np + j;
      const double uc = u[c];
      double acc = 0.0;
      if (i > 0) acc += s.radial[i - 1] * (uc - u[c - np]);
      if (i + 1 < nr) acc += s.radial[i] * (uc - u[c + np]);
      else acc += s.arc * uc;
      if (j > 0) acc += s.angular[i] * (uc - u[c - 1]);
      else if (s.periodic) acc += s.angular[i] * (uc - u[c + np - 1]);
      if (j + 1 < np) acc += s.angular[i] * (uc - u[c + 1]);
      else if (s.periodic) acc += s.angular[i] * (uc - u[c + 1 - np]);
      out[c] = acc;
    }
  }
}

void ring_sums(const PolarGrid& g, std::span<const double> values, std::span<double> sums) {
  const int np = g.n_phi();
  for (int i = 0; i < g.n_r(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < np; ++j) acc += values[g.index(i, j)];
    sums[i] = acc * g.area(i);
  }
}

void gradient(const PolarGrid& g, std::span<const double> u, std::span<double> d_r,
              std::span<double> d_t) {
  const int nr = g.n_r(), np = g.n_phi();
  const int half_turn = g.disk_columns() / 2;
  const double inv2dr = 0.5 / g.dr();
  for (int i = 0; i < nr; ++i) {
    const double inv2rdphi = 0.5 / (g.r(i) * g.dphi());
    for (int j = 0; j < np; ++j) {
      double dr;
      if (i == 0) {
        dr = (u[g.index(1, j)] - u[g.index(0, g.fold(j + half_turn))]) * inv2dr;
      } else if (i + 1 == nr) {
        dr = (3.0 * u[g.index(i, j)] - 4.0 * u[g.index(i - 1, j)] + u[g.index(i - 2, j)]) * inv2dr;
      } else {
        dr = (u[g.index(i + 1, j)] - u[g.index(i - 1, j)]) * inv2dr;
      }
      d_r[g.index(i, j)] = dr;
      d_t[g.index(i, j)] = (u[g.index(i, g.fold(j + 1))] - u[g.index(i, g.fold(j - 1))]) * inv2rdphi;
    }
  }
}

void sample_circle(const PolarGrid& g, std::span<const double> u, double r,
                   std::span<double> out) {
  const std::size_t m = out.size();
  const long columns = g.disk_columns();
  // Cubic Lagrange weights over four consecutive rings.
  const double y = r / g.dr() - 0.5;
  int i0 = static_cast<int>(std::floor(y)) - 1;
  if (i0 < 0) i0 = 0;
  if (i0 > g.n_r() - 4) i0 = g.n_r() - 4;
  const double q = y - i0;
  const double w[4] = {-(q - 1.0) * (q - 2.0) * (q - 3.0) / 6.0, q * (q - 2.0) * (q - 3.0) / 2.0,
                       -q * (q - 1.0) * (q - 3.0) / 2.0, q * (q - 1.0) * (q - 2.0) / 6.0};
  for (std::size_t s = 0; s < m; ++s) {
    const double x = static_cast<double>(static_cast<long>(s) * columns) / static_cast<double>(m) - 0.5;
    const double xf = std::floor(x);
    const double t = x - xf;
    const int j0 = g.fold(static_cast<int>(xf));
    const int j1 = g.fold(static_cast<int>(xf) + 1);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a)
      acc += w[a] * ((1.0 - t) * u[g.index(i0 + a, j0)] + t * u[g.index(i0 + a, j1)]);
    out[s] = acc;
  }
}

void heaviside(double eps, std::span<const double> z, std::span<double> f,
               std::span<double> df) {
  for (std::size_t n = 0; n < z.size(); ++n) {
    const double s = z[n] / eps + 1.0;
    f[n] = smoothstep(s);
    df[n] = smoothstep_prime(s) / eps;
  }
}

}  // namespace serial
}  // namespace fbsing::kernels
