#include <doctest.h>

#include <cmath>

#include "fbsing/freeboundary.hpp"
#include "oracles.hpp"

using namespace fbsing;

namespace {

double norm(const Point2& p) { return std::hypot(p.x, p.y); }

}  // namespace

TEST_CASE("x1 vanishes on a diameter") {
  const PolarGrid g = build_sector_grid(SectorSpec{1}, 32, 32);
  const ScalarField u = ScalarField::from_function(g, [](double r, double p) { return r * std::cos(p); });
  const LevelSet ls = extract_zero_set(u);
  CHECK(ls.field.grid().is_disk());
  CHECK(ls.origin_branches == 2);
  REQUIRE(ls.polylines.size() == 1);
  const Polyline& line = ls.polylines[0];
  CHECK_FALSE(line.closed);
  CHECK_FALSE(line.from_origin);
  double max_x = 0.0;
  for (const Point2& p : line.points) max_x = std::max(max_x, std::abs(p.x));
  CHECK(max_x < 1e-9);
  CHECK(line.length == doctest::Approx(2 * g.r(g.n_r() - 1)).epsilon(1e-9));
  CHECK(ls.max_vertex_residual <= 1e-12);
}

TEST_CASE("homogeneous quadratic has four rays from the origin") {
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 32, 32);
  const ScalarField u = ScalarField::from_function(g, [](double r, double p) { return oracle::harmonic2(3.0, r, p); });
  const LevelSet ls = extract_zero_set(u);
  CHECK(ls.origin_branches == 4);
  REQUIRE(ls.polylines.size() == 4);
  for (const Polyline& line : ls.polylines) {
    CHECK(line.from_origin);
    CHECK(norm(line.points.front()) == 0.0);
    for (const Point2& p : line.points) CHECK(std::abs(std::abs(p.x) - std::abs(p.y)) < 1e-9);
  }
  CHECK(ls.max_vertex_residual <= 1e-12);

  const std::vector<double> radii{0.1, 0.2, 0.3, 0.5};
  const ArcFit fit = fit_arcs_at_origin(ls, radii);
  REQUIRE(fit.arcs.size() == 4);
  CHECK_FALSE(fit.topology_changed());
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(fit.arcs[a].limit_angle == doctest::Approx(oracle::pi / 4 + a * oracle::pi / 2).epsilon(1e-6));
    CHECK(fit.gaps[a] == doctest::Approx(oracle::pi / 2).epsilon(1e-6));
  }
  const std::vector<double> bad{0.2, 0.1};
  CHECK_THROWS_AS(fit_arcs_at_origin(ls, bad), ParameterError);
}

TEST_CASE("radial solution has a circular free boundary") {
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 64, 32);
  const ScalarField u = ScalarField::from_function(g, [](double r, double) { return oracle::radial_solution(r, 0.5); });
  const LevelSet ls = extract_zero_set(u);
  CHECK(ls.origin_branches == 0);
  REQUIRE(ls.polylines.size() == 1);
  CHECK(ls.polylines[0].closed);
  for (const Point2& p : ls.polylines[0].points) CHECK(std::abs(norm(p) - 0.5) <= g.dr());
  CHECK(ls.polylines[0].length == doctest::Approx(oracle::pi).epsilon(1e-2));
}

TEST_CASE("constants have no zero set") {
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 16, 16);
  CHECK(extract_zero_set(ScalarField(g).map([](double) { return 1.0; })).empty());
  CHECK(extract_zero_set(ScalarField(g).map([](double) { return -1.0; })).empty());
  CHECK(crossings_on_circle(ScalarField(g), 0.5).empty());
}

TEST_CASE("crossings come in pairs and reflection does not matter") {
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 64, 32);
  const ScalarField u = ScalarField::from_function(g, [](double r, double p) {
    return 5 * r * r * std::cos(2 * p) - 0.3 * r + 0.7 * std::pow(r, 4) * std::cos(4 * p);
  });
  for (double r : {0.05, 0.1, 0.3, 0.6, 0.9}) {
    const auto c = crossings_on_circle(u, r);
    CHECK(c.size() % 2 == 0);
    for (double t : c) CHECK((t >= 0.0 && t < 2 * oracle::pi));
  }
  const LevelSet a = extract_zero_set(u);
  const LevelSet b = extract_zero_set(reflect_to_disk(u, SymmetryGroup{2}));
  REQUIRE(a.polylines.size() == b.polylines.size());
  for (std::size_t n = 0; n < a.polylines.size(); ++n) {
    REQUIRE(a.polylines[n].points.size() == b.polylines[n].points.size());
    CHECK(a.polylines[n].length == b.polylines[n].length);
  }
  CHECK(a.max_vertex_residual <= 1e-12);
}
