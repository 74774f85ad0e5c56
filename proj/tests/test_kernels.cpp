#include <doctest.h>

#include <random>
#include <vector>

#include "fbsing/kernels.hpp"

using namespace fbsing;

namespace {

std::vector<double> random_values(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

void check_same(const PolarGrid& g, unsigned seed) {
  const auto u = random_values(g.size(), seed);
  const auto s = kernels::make_stencil(g);

  std::vector<double> a(g.size()), b(g.size());
  kernels::serial::apply_stencil(s, u, a);
  kernels::omp::apply_stencil(s, u, b);
  CHECK(a == b);

  std::vector<double> ra(g.n_r()), rb(g.n_r());
  kernels::serial::ring_sums(g, u, ra);
  kernels::omp::ring_sums(g, u, rb);
  CHECK(ra == rb);

  std::vector<double> dr1(g.size()), dt1(g.size()), dr2(g.size()), dt2(g.size());
  kernels::serial::gradient(g, u, dr1, dt1);
  kernels::omp::gradient(g, u, dr2, dt2);
  CHECK(dr1 == dr2);
  CHECK(dt1 == dt2);

  for (double r : {g.dr(), 0.1, 0.5, 1.0 - g.dr()}) {
    std::vector<double> ca(256), cb(256);
    kernels::serial::sample_circle(g, u, r, ca);
    kernels::omp::sample_circle(g, u, r, cb);
    CHECK(ca == cb);
  }

  std::vector<double> f1(g.size()), df1(g.size()), f2(g.size()), df2(g.size());
  kernels::serial::heaviside(0.3, u, f1, df1);
  kernels::omp::heaviside(0.3, u, f2, df2);
  CHECK(f1 == f2);
  CHECK(df1 == df2);
}

}  // namespace

TEST_CASE("OpenMP kernels agree bit for bit with the serial reference") {
  check_same(build_sector_grid(SectorSpec{2}, 37, 29), 1);
  check_same(build_sector_grid(SectorSpec{4}, 64, 64), 2);
  check_same(build_sector_grid(SectorSpec{1}, 16, 40).full_disk(), 3);
}

TEST_CASE("stencil coefficients match the flux form") {
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 16, 12);
  const auto s = kernels::make_stencil(g);
  CHECK_FALSE(s.periodic);
  CHECK(s.radial.size() >= static_cast<std::size_t>(g.n_r() - 1));
  for (int i = 0; i + 1 < g.n_r(); ++i)
    CHECK(s.radial[i] == doctest::Approx(g.r_face(i + 1) * g.dphi() / g.dr()));
  for (int i = 0; i < g.n_r(); ++i) CHECK(s.angular[i] == doctest::Approx(g.dr() / (g.r(i) * g.dphi())));
  CHECK(s.arc == doctest::Approx(2.0 * g.dphi() / g.dr()));
  CHECK(kernels::make_stencil(g.full_disk()).periodic);
}

TEST_CASE("smoothstep plateaus and midpoint") {
  CHECK(kernels::smoothstep(-1.0) == 0.0);
  CHECK(kernels::smoothstep(2.0) == 1.0);
  CHECK(kernels::smoothstep(0.5) == doctest::Approx(0.5));
  CHECK(kernels::smoothstep_prime(0.5) == doctest::Approx(30.0 / 16));
}
