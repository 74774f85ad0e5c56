#pragma once

// Data-parallel inner loops shared by the analysis and solver modules.
//
// Every kernel exists twice: `serial::` is the plain reference loop and
// `omp::` the OpenMP version the library calls. Each output entry is
// produced by exactly one thread with the same operation order as the
// reference, so both variants agree bit for bit and results do not depend
// on the thread count.

#include <span>
#include <vector>

#include "fbsing/mesh.hpp"

namespace fbsing::kernels {

/// Symmetric finite-volume coupling coefficients of the polar five-point stencil.
struct Stencil {
  int n_r = 0;
  int n_phi = 0;
  bool periodic = false;
  /// radial[i]: flux coefficient across the face between rings i and i+1.
  std::vector<double> radial;
  /// angular[i]: flux coefficient across angular faces inside ring i.
  std::vector<double> angular;
  /// Dirichlet coefficient of the outer face (ghost value 2g - u).
  double arc = 0.0;
};

Stencil make_stencil(const PolarGrid& grid);

namespace serial {
/// out = L u, the flux form of -Laplacian with homogeneous arc data.
void apply_stencil(const Stencil& s, std::span<const double> u, std::span<double> out);
/// sums[i] = area(i) * sum_j values(i, j).
void ring_sums(const PolarGrid& g, std::span<const double> values, std::span<double> sums);
/// Radial derivative and r^-1 times the angular derivative at cell centers.
void gradient(const PolarGrid& g, std::span<const double> u, std::span<double> d_r,
              std::span<double> d_t);
/// Samples at theta_s = 2 pi s / m on the reflected disk, m = out.size():
/// cubic in r over four rings, linear in phi.
void sample_circle(const PolarGrid& g, std::span<const double> u, double r,
                   std::span<double> out);
/// f = f_eps(z) and df = f_eps'(z) elementwise.
void heaviside(double eps, std::span<const double> z, std::span<double> f,
               std::span<double> df);
}  // namespace serial

namespace omp {
/// out = L u, the flux form of -Laplacian with homogeneous arc data.
void apply_stencil(const Stencil& s, std::span<const double> u, std::span<double> out);
/// sums[i] = area(i) * sum_j values(i, j).
void ring_sums(const PolarGrid& g, std::span<const double> values, std::span<double> sums);
/// Radial derivative and r^-1 times the angular derivative at cell centers.
void gradient(const PolarGrid& g, std::span<const double> u, std::span<double> d_r,
              std::span<double> d_t);
/// Samples at theta_s = 2 pi s / m on the reflected disk, m = out.size():
/// cubic in r over four rings, linear in phi.
void sample_circle(const PolarGrid& g, std::span<const double> u, double r,
                   std::span<double> out);
/// f = f_eps(z) and df = f_eps'(z) elementwise.
void heaviside(double eps, std::span<const double> z, std::span<double> f,
               std::span<double> df);
}  // namespace omp

/// Quintic smoothstep s^3 (10 - 15 s + 6 s^2) clamped to [0, 1].
inline double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

inline double smoothstep_prime(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double w = s * (1.0 - s);
  return 30.0 * w * w;
}

}  // namespace fbsing::kernels
