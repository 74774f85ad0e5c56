#include "fbsing/freeboundary.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace fbsing {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr long kOrigin = -1;

struct Crossing {
  Point2 p;
  double residual = 0.0;
};

struct Segment {
  long a, b;
};

class Marcher {
 public:
  explicit Marcher(const ScalarField& disk) : u_(disk), g_(disk.grid()), n_(g_.n_phi()) {}

  void run() {
    for (int i = 0; i + 1 < g_.n_r(); ++i)
      for (int j = 0; j < n_; ++j) cell(i, j);
    cap();
  }

  LevelSet link() &&;

 private:
  bool pos(int i, int j) const { return u_(i, wrap(j)) > 0.0; }
  int wrap(int j) const { return ((j % n_) + n_) % n_; }
  long angular_id(int i, int j) const { return 2L * (static_cast<long>(i) * n_ + wrap(j)); }
  long radial_id(int i, int j) const { return angular_id(i, j) + 1; }

  // Crossing on the edge (i, j)-(i, j+1).
  long angular(int i, int j) {
    const long id = angular_id(i, j);
    if (!points_.count(id)) {
      const double u0 = u_(i, wrap(j)), u1 = u_(i, wrap(j + 1));
      const double t = u0 / (u0 - u1);
      const double ph = (wrap(j) + 0.5 + t) * g_.dphi();
      const double r = g_.r(i);
      points_[id] = {{r * std::cos(ph), r * std::sin(ph)}, std::abs((1.0 - t) * u0 + t * u1)};
    }
    return id;
  }

  // Crossing on the edge (i, j)-(i+1, j).
  long radial(int i, int j) {
    const long id = radial_id(i, j);
    if (!points_.count(id)) {
      const double u0 = u_(i, wrap(j)), u1 = u_(i + 1, wrap(j));
      const double t = u0 / (u0 - u1);
      const double r = g_.r(i) + t * g_.dr();
      const double ph = g_.phi(wrap(j));
      points_[id] = {{r * std::cos(ph), r * std::sin(ph)}, std::abs((1.0 - t) * u0 + t * u1)};
    }
    return id;
  }

  void cell(int i, int j) {
    const bool c0 = pos(i, j), c1 = pos(i, j + 1), c2 = pos(i + 1, j + 1), c3 = pos(i + 1, j);
    const bool bottom = c0 != c1, right = c1 != c2, top = c2 != c3, left = c3 != c0;
    const int count = bottom + right + top + left;
    if (count == 0) return;
    if (count == 2) {
      long e[2];
      int n = 0;
      if (bottom) e[n++] = angular(i, j);
      if (right) e[n++] = radial(i, j + 1);
      if (top) e[n++] = angular(i + 1, j);
      if (left) e[n++] = radial(i, j);
      segments_.push_back({e[0], e[1]});
      return;
    }
    // Saddle: the cell average decides whether c0 joins c2 across the center.
    const double mean =
        0.25 * (u_(i, wrap(j)) + u_(i, wrap(j + 1)) + u_(i + 1, wrap(j + 1)) + u_(i + 1, wrap(j)));
    if ((mean > 0.0) == c0) {
      segments_.push_back({angular(i, j), radial(i, j + 1)});   // cuts off c1
      segments_.push_back({angular(i + 1, j), radial(i, j)});   // cuts off c3
    } else {
      segments_.push_back({radial(i, j), angular(i, j)});       // cuts off c0
      segments_.push_back({radial(i, j + 1), angular(i + 1, j)});  // cuts off c2
    }
  }

  void cap() {
    std::vector<long> hits;
    for (int j = 0; j < n_; ++j)
      if (pos(0, j) != pos(0, j + 1)) hits.push_back(angular(0, j));
    branches_ = static_cast<int>(hits.size());
    if (hits.size() == 2) {
      segments_.push_back({hits[0], hits[1]});
    } else if (hits.size() >= 4) {
      for (long h : hits) segments_.push_back({kOrigin, h});
    }
  }

  const ScalarField& u_;
  const PolarGrid& g_;
  int n_;
  std::map<long, Crossing> points_;
  std::vector<Segment> segments_;
  int branches_ = 0;
};

LevelSet Marcher::link() && {
  LevelSet ls;
  ls.field = u_;
  ls.origin_branches = branches_;
  for (const auto& [id, c] : points_) ls.max_vertex_residual = std::max(ls.max_vertex_residual, c.residual);

  std::map<long, std::vector<std::size_t>> adj;
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    adj[segments_[s].a].push_back(s);
    adj[segments_[s].b].push_back(s);
  }
  std::vector<bool> used(segments_.size(), false);
  auto point = [&](long id) { return id == kOrigin ? Point2{} : points_.at(id).p; };

  auto walk = [&](long start, std::size_t first) {
    Polyline pl;
    pl.from_origin = start == kOrigin;
    pl.points.push_back(point(start));
    long at = start;
    std::size_t seg = first;
    while (true) {
      used[seg] = true;
      const long next = segments_[seg].a == at ? segments_[seg].b : segments_[seg].a;
      pl.points.push_back(point(next));
      at = next;
      if (at == kOrigin || at == start) break;
      const auto& out = adj[at];
      auto it = std::find_if(out.begin(), out.end(), [&](std::size_t s) { return !used[s]; });
      if (it == out.end()) break;
      seg = *it;
    }
    pl.closed = at == start && start != kOrigin;
    for (std::size_t p = 1; p < pl.points.size(); ++p)
      pl.length += std::hypot(pl.points[p].x - pl.points[p - 1].x, pl.points[p].y - pl.points[p - 1].y);
    ls.polylines.push_back(std::move(pl));
  };

  // Open polylines from endpoints and the junction, then the closed loops.
  for (const auto& [id, segs] : adj)
    if (segs.size() != 2)
      for (std::size_t s : segs)
        if (!used[s]) walk(id, s);
  for (const auto& [id, segs] : adj)
    for (std::size_t s : segs)
      if (!used[s]) walk(id, s);
  return ls;
}

double angle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(d, kTwoPi - d);
}

double reduce(double a) {
  double r = std::fmod(a, kTwoPi);
  return r < 0.0 ? r + kTwoPi : r;
}

}  // namespace

LevelSet extract_zero_set(const ScalarField& u) {
  const ScalarField disk =
      u.grid().is_disk() ? u : reflect_to_disk(u, SymmetryGroup{u.grid().spec().k});
  Marcher m(disk);
  m.run();
  return std::move(m).link();
}

std::vector<double> crossings_on_circle(const ScalarField& u, double r, int samples) {
  const CircleTrace t = trace_on_circle(u, r, samples);
  const std::size_t m = t.samples.size();
  std::vector<double> out;
  for (std::size_t s = 0; s < m; ++s) {
    const double u0 = t.samples[s], u1 = t.samples[(s + 1) % m];
    if ((u0 > 0.0) != (u1 > 0.0)) {
      const double frac = u0 / (u0 - u1);
      out.push_back(kTwoPi * (static_cast<double>(s) + frac) / static_cast<double>(m));
    }
  }
  return out;
}

ArcFit fit_arcs_at_origin(const LevelSet& ls, std::span<const double> radii) {
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw ParameterError("arc radii must be strictly increasing");
  ArcFit fit;
  if (radii.empty() || ls.field.size() == 0) return fit;

  std::vector<std::vector<double>> sets(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) sets[i] = crossings_on_circle(ls.field, radii[i]);
  const std::vector<double>& ref = sets.front();
  if (ref.empty()) return fit;

  double min_gap = kTwoPi;
  for (std::size_t a = 0; a < ref.size(); ++a)
    for (std::size_t b = a + 1; b < ref.size(); ++b) min_gap = std::min(min_gap, angle_distance(ref[a], ref[b]));
  const double cap = 0.5 * min_gap;

  fit.arcs.resize(ref.size());
  for (std::size_t a = 0; a < ref.size(); ++a) {
    fit.arcs[a].radii.push_back(radii[0]);
    fit.arcs[a].angles.push_back(ref[a]);
  }
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (sets[i].size() != ref.size()) fit.topology_changes.push_back(radii[i]);
    std::vector<bool> taken(sets[i].size(), false);
    for (Arc& arc : fit.arcs) {
      const double last = arc.angles.back();
      std::size_t best = sets[i].size();
      double best_d = cap;
      for (std::size_t c = 0; c < sets[i].size(); ++c) {
        const double d = angle_distance(sets[i][c], last);
        if (!taken[c] && d < best_d) {
          best = c;
          best_d = d;
        }
      }
      if (best == sets[i].size()) continue;
      taken[best] = true;
      // Unwrap so the arc's angle samples vary continuously.
      double a = sets[i][best];
      a += kTwoPi * std::round((last - a) / kTwoPi);
      arc.radii.push_back(radii[i]);
      arc.angles.push_back(a);
    }
  }

  for (Arc& arc : fit.arcs) {
    const std::size_t n = arc.radii.size();
    if (n == 1) {
      arc.limit_angle = reduce(arc.angles[0]);
      continue;
    }
    double sr = 0, sa = 0, srr = 0, sra = 0;
    for (std::size_t p = 0; p < n; ++p) {
      sr += arc.radii[p];
      sa += arc.angles[p];
      srr += arc.radii[p] * arc.radii[p];
      sra += arc.radii[p] * arc.angles[p];
    }
    const double slope = (n * sra - sr * sa) / (n * srr - sr * sr);
    arc.limit_angle = reduce((sa - slope * sr) / n);
  }
  std::sort(fit.arcs.begin(), fit.arcs.end(),
            [](const Arc& x, const Arc& y) { return x.limit_angle < y.limit_angle; });
  for (std::size_t a = 0; a < fit.arcs.size(); ++a) {
    const double next = a + 1 < fit.arcs.size() ? fit.arcs[a + 1].limit_angle
                                                 : fit.arcs[0].limit_angle + kTwoPi;
    fit.gaps.push_back(next - fit.arcs[a].limit_angle);
  }
  return fit;
}

}  // namespace fbsing
