#include "fbsing/blowup.hpp"

#include <cmath>
#include <numbers>

#include "fbsing/monotonicity.hpp"

namespace fbsing {

DegenerateTrace::DegenerateTrace(double r, double s_value)
    : std::runtime_error("S(0, " + std::to_string(r) + ") = " + std::to_string(s_value) +
                         " is below the degeneracy floor"),
      radius(r),
      s(s_value) {}

double s_norm(const ScalarField& u, double r) {
  const double line = integrate_circle(u, r, [](double v) { return v * v; });
  return std::sqrt(std::max(line, 0.0) / r);
}

CircleTrace blowup_profile(const ScalarField& u, double r, double s_floor) {
  const double s = s_norm(u, r);
  if (!(s > s_floor)) throw DegenerateTrace(r, s);
  CircleTrace t = trace_on_circle(u, r).scaled(1.0 / s);
  t.radius = 1.0;
  return t;
}

double mode2_energy_fraction(const CircleTrace& t) {
  return std::numbers::pi * (t.a[2] * t.a[2] + t.b[2] * t.b[2]);
}

std::string to_string(BlowupCase c) {
  switch (c) {
    case BlowupCase::Case1: return "Case1";
    case BlowupCase::Case3: return "Case3";
    case BlowupCase::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

int BlowupReport::dominant_mode(std::size_t i) const {
  if (degenerate[i]) return -1;
  int best = 0;
  for (int l = 1; l <= kFourierModes; ++l)
    if (traces[i].mode_energy(l) > traces[i].mode_energy(best)) best = l;
  return best;
}

BlowupReport blowup_report(const ScalarField& u, std::span<const double> radii,
                           const Thresholds& th) {
  if (radii.size() < 3) throw ParameterError("classification needs at least three radii");
  const MonotonicityProfile prof = phi_profile(u, radii);  // validates the window

  const std::size_t n = radii.size();
  BlowupReport rep;
  rep.radii.assign(radii.begin(), radii.end());
  rep.s.resize(n);
  rep.ratio.resize(n);
  rep.traces.resize(n);
  rep.mode2_fraction.assign(n, 0.0);
  rep.degenerate.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radii[i];
    rep.s[i] = s_norm(u, r);
    rep.ratio[i] = rep.s[i] / (r * r);
    if (rep.s[i] > th.s_floor) {
      rep.traces[i] = trace_on_circle(u, r).scaled(1.0 / rep.s[i]);
      rep.traces[i].radius = 1.0;
      rep.mode2_fraction[i] = mode2_energy_fraction(rep.traces[i]);
    } else {
      rep.degenerate[i] = true;
      rep.traces[i].radius = 1.0;
    }
  }

  rep.phi_min = prof.phi.front();
  rep.phi_max = prof.phi.back();
  rep.delta_phi = std::max(th.phi_rel * std::abs(rep.phi_max), th.phi_abs);
  rep.trend = rep.s.back() > th.s_floor ? rep.ratio.front() / rep.ratio.back() : 0.0;

  const bool decreasing = rep.trend < 1.0 - th.trend_tol;
  if (!(rep.s.back() > th.s_floor))
    rep.classification = BlowupCase::Inconclusive;  // no trend to read
  else if (rep.phi_min < -rep.delta_phi && !decreasing)
    rep.classification = BlowupCase::Case1;
  else if (std::abs(rep.phi_min) <= rep.delta_phi && decreasing)
    rep.classification = BlowupCase::Case3;
  else
    rep.classification = BlowupCase::Inconclusive;
  return rep;
}

BlowupCase classify(const ScalarField& u, std::span<const double> radii, const Thresholds& th) {
  return blowup_report(u, radii, th).classification;
}

}  // namespace fbsing
