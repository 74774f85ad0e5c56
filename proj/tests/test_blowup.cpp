#include <doctest.h>

#include <cmath>
#include <random>

#include "fbsing/blowup.hpp"
#include "oracles.hpp"

using namespace fbsing;

TEST_CASE("S norm and normalized trace of the quadratic") {
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 128, 64);
  const ScalarField u = ScalarField::from_function(g, [](double r, double p) { return oracle::harmonic2(1.0, r, p); });
  for (double r : {0.05, 0.2, 0.7}) {
    CHECK(s_norm(u, r) == doctest::Approx(std::sqrt(oracle::pi) * r * r).epsilon(1e-4));
    const CircleTrace t = blowup_profile(u, r);
    CHECK(t.radius == 1.0);
    CHECK(t.a[2] == doctest::Approx(1.0 / std::sqrt(oracle::pi)).epsilon(1e-8));
    CHECK(2 * oracle::pi * t.mean_square() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(mode2_energy_fraction(t) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("degenerate traces are reported") {
  const PolarGrid g = build_sector_grid(SectorSpec{2}, 32, 32);
  const ScalarField zero(g);
  CHECK(s_norm(zero, 0.5) == 0.0);
  CHECK_THROWS_AS(blowup_profile(zero, 0.5), DegenerateTrace);
  try {
    blowup_profile(zero, 0.5);
  } catch (const DegenerateTrace& e) {
    CHECK(e.radius == 0.5);
    CHECK(e.s == 0.0);
  }
  const std::vector<double> radii{0.1, 0.2, 0.4};
  const BlowupReport rep = blowup_report(zero, radii);
  CHECK(rep.degenerate == std::vector<bool>{true, true, true});
  CHECK(rep.dominant_mode(0) == -1);
  CHECK(rep.classification == BlowupCase::Inconclusive);
}

TEST_CASE("reflected fields carry only modes divisible by k") {
  for (int k : {2, 3, 4}) {
    const PolarGrid g = build_sector_grid(SectorSpec{k}, 32, 16);
    std::mt19937_64 rng(100 + k);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> v(g.size());
    for (double& x : v) x = uni(rng);
    const ScalarField u(g, v);
    for (double r : {0.3, 0.55}) {
      const CircleTrace t = trace_on_circle(u, r);
      double scale = 0.0;
      for (double s : t.samples) scale = std::max(scale, std::abs(s));
      for (int l = 1; l <= kFourierModes; ++l) {
        CHECK(std::abs(t.b[l]) < 1e-12 * scale);
        if (l % k != 0) CHECK(std::abs(t.a[l]) < 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("classification of homogeneous harmonics") {
  SUBCASE("quadratic is a cross: Case 1") {
    const PolarGrid g = build_sector_grid(SectorSpec{2}, 256, 128);
    const ScalarField u = ScalarField::from_function(g, [](double r, double p) { return oracle::harmonic2(1.0, r, p); });
    const std::vector<double> radii{0.05, 0.1, 0.2};
    const BlowupReport rep = blowup_report(u, radii);
    CHECK(rep.classification == BlowupCase::Case1);
    CHECK(rep.phi_min == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(rep.trend == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(rep.dominant_mode(0) == 2);
    CHECK(to_string(rep.classification) == "Case1");
  }
  SUBCASE("quartic is degenerate: Case 3") {
    const PolarGrid g = build_sector_grid(SectorSpec{4}, 256, 64);
    const double A = 1.0;
    const ScalarField u = ScalarField::from_function(g, [A](double r, double p) {
      return A * std::pow(r, 4) * std::cos(4 * p);
    });
    const std::vector<double> radii{0.02, 0.05, 0.1};
    CHECK(classify(u, radii) == BlowupCase::Case3);
    const BlowupReport rep = blowup_report(u, radii);
    // Phi(r) = 2 pi A^2 r^4 - (2/3) A r^2 for this field.
    CHECK(rep.phi_max == doctest::Approx(2 * oracle::pi * 1e-4 - 2.0 / 300).epsilon(1e-2));
    CHECK(rep.trend == doctest::Approx(0.04).epsilon(1e-3));
    CHECK(rep.dominant_mode(1) == 4);
  }
  SUBCASE("at least three radii") {
    const PolarGrid g = build_sector_grid(SectorSpec{2}, 32, 32);
    const std::vector<double> two{0.2, 0.4};
    CHECK_THROWS_AS(blowup_report(ScalarField(g), two), ParameterError);
  }
}
