#include "fbsing/io.hpp"

#include <openssl/sha.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace fbsing::io {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

double parse(const std::string& s, const fs::path& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() && s.find_first_not_of(" \r", used) != std::string::npos) throw 0;
    return v;
  } catch (...) {
    throw FormatError("bad number '" + s + "' in " + path.string());
  }
}

}  // namespace

nlohmann::json grid_json(const PolarGrid& g) {
  return {{"k", g.spec().k}, {"n_r", g.n_r()}, {"n_phi", g.n_phi()}, {"disk", g.is_disk()}};
}

PolarGrid grid_from_json(const nlohmann::json& j) {
  const int k = j.at("k").get<int>();
  const int n_r = j.at("n_r").get<int>();
  const int n_phi = j.at("n_phi").get<int>();
  if (!j.value("disk", false)) return PolarGrid::sector(SectorSpec{k}, n_r, n_phi);
  if (n_phi % (2 * k) != 0) throw FormatError("disk column count not a multiple of 2k");
  return PolarGrid::sector(SectorSpec{k}, n_r, n_phi / (2 * k)).full_disk();
}

void write_field_csv(const fs::path& path, const ScalarField& f) {
  auto out = open_out(path);
  const PolarGrid& g = f.grid();
  out << "i,j,r,phi,u\n";
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_phi(); ++j)
      out << i << ',' << j << ',' << num(g.r(i)) << ',' << num(g.phi(j)) << ',' << num(f(i, j))
          << '\n';
}

ScalarField read_field_csv(const fs::path& path, const nlohmann::json& grid) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty field file " + path.string());
  struct Row {
    int i, j;
    double phi, u;
  };
  std::vector<Row> rows;
  int max_i = -1, max_j = -1;
  double phi0 = -1.0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto c = split(line, ',');
    if (c.size() != 5) throw FormatError("expected 5 columns in " + path.string());
    Row r{static_cast<int>(parse(c[0], path)), static_cast<int>(parse(c[1], path)),
          parse(c[3], path), parse(c[4], path)};
    if (r.i < 0 || r.j < 0) throw FormatError("negative index in " + path.string());
    max_i = std::max(max_i, r.i);
    max_j = std::max(max_j, r.j);
    if (r.j == 0) phi0 = r.phi;
    rows.push_back(r);
  }
  PolarGrid g;
  if (!grid.is_null()) {
    g = grid_from_json(grid);
  } else {
    const int n_r = max_i + 1, n = max_j + 1;
    if (phi0 <= 0.0) throw FormatError("cannot infer angular spacing from " + path.string());
    const double span = 2.0 * phi0 * n;
    const double pi = std::numbers::pi;
    if (std::abs(span - 2.0 * pi) < 1e-9) {
      if (n % 2) throw FormatError("odd disk column count in " + path.string());
      g = PolarGrid::sector(SectorSpec{1}, n_r, n / 2).full_disk();
    } else {
      const int k = static_cast<int>(std::lround(pi / span));
      if (k < 1 || std::abs(pi / k - span) > 1e-9)
        throw FormatError("angular span is not pi/k in " + path.string());
      g = PolarGrid::sector(SectorSpec{k}, n_r, n);
    }
  }
  if (rows.size() != g.size()) throw FormatError("row count does not match grid in " + path.string());
  std::vector<double> values(g.size());
  std::vector<bool> seen(g.size(), false);
  for (const Row& r : rows) {
    if (r.i >= g.n_r() || r.j >= g.n_phi()) throw FormatError("index outside grid in " + path.string());
    const std::size_t n = g.index(r.i, r.j);
    if (seen[n]) throw FormatError("duplicate cell in " + path.string());
    seen[n] = true;
    values[n] = r.u;
  }
  return ScalarField(g, std::move(values));
}

void write_field_vtk(const fs::path& path, const ScalarField& f) {
  auto out = open_out(path);
  const PolarGrid& g = f.grid();
  out << "# vtk DataFile Version 3.0\nfbsing field\nASCII\nDATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << g.n_phi() << ' ' << g.n_r() << " 1\n";
  out << "POINTS " << g.size() << " double\n";
  for (int i = 0; i < g.n_r(); ++i)
    for (int j = 0; j < g.n_phi(); ++j)
      out << num(g.r(i) * std::cos(g.phi(j))) << ' ' << num(g.r(i) * std::sin(g.phi(j))) << " 0\n";
  out << "POINT_DATA " << g.size() << "\nSCALARS u double 1\nLOOKUP_TABLE default\n";
  for (double v : f.values()) out << num(v) << '\n';
}

nlohmann::json solution_sidecar(const Solution& sol) {
  nlohmann::json stages = nlohmann::json::array();
  for (const StageReport& s : sol.stages)
    stages.push_back({{"eps", s.eps},
                      {"iterations", s.iterations},
                      {"pde_residual", s.pde_residual},
                      {"origin_residual", s.origin_residual}});
  return {{"grid", grid_json(sol.u.grid())},
          {"k", sol.k},
          {"boundary", sol.boundary.describe()},
          {"amplitude", sol.boundary.amplitude},
          {"mode", sol.boundary.mode},
          {"eps", sol.eps},
          {"kappa", sol.kappa},
          {"pde_residual", sol.pde_residual},
          {"origin_residual", sol.origin_residual},
          {"stages", stages}};
}

std::vector<std::string> write_solution(const fs::path& dir, const std::string& stem,
                                        const Solution& sol) {
  write_field_csv(dir / (stem + ".csv"), sol.u);
  write_field_vtk(dir / (stem + ".vtk"), sol.u);
  write_json(dir / (stem + ".json"), solution_sidecar(sol));
  return {stem + ".csv", stem + ".vtk", stem + ".json"};
}

ScalarField load_field(const fs::path& csv_path) {
  fs::path side = csv_path;
  side.replace_extension(".json");
  if (fs::exists(side)) {
    const nlohmann::json j = read_json(side);
    if (j.contains("grid")) return read_field_csv(csv_path, j.at("grid"));
  }
  return read_field_csv(csv_path);
}

void write_phi_profile_csv(const fs::path& path, const MonotonicityProfile& p) {
  auto out = open_out(path);
  out << "r,phi,defect_to_next\n";
  for (std::size_t i = 0; i < p.radii.size(); ++i)
    out << num(p.radii[i]) << ',' << num(p.phi[i]) << ','
        << (i < p.defect_to_next.size() ? num(p.defect_to_next[i]) : std::string()) << '\n';
}

void write_blowup_csv(const fs::path& path, const BlowupReport& rep) {
  auto out = open_out(path);
  out << "r,S,S/r^2";
  for (int l = 0; l <= kFourierModes; ++l) out << ",a" << l;
  for (int l = 1; l <= kFourierModes; ++l) out << ",b" << l;
  out << ",mode2_energy_fraction\n";
  for (std::size_t i = 0; i < rep.radii.size(); ++i) {
    out << num(rep.radii[i]) << ',' << num(rep.s[i]) << ',' << num(rep.ratio[i]);
    const CircleTrace& t = rep.traces[i];
    for (int l = 0; l <= kFourierModes; ++l) out << ',' << num(t.a[l]);
    for (int l = 1; l <= kFourierModes; ++l) out << ',' << num(t.b[l]);
    out << ',' << num(rep.mode2_fraction[i]) << '\n';
  }
}

void write_level_set_csv(const fs::path& path, const LevelSet& ls) {
  auto out = open_out(path);
  out << "polyline,x,y\n";
  for (std::size_t p = 0; p < ls.polylines.size(); ++p)
    for (const Point2& q : ls.polylines[p].points) out << p << ',' << num(q.x) << ',' << num(q.y) << '\n';
}

nlohmann::json arcs_json(const ArcFit& fit) {
  nlohmann::json arcs = nlohmann::json::array();
  for (const Arc& a : fit.arcs)
    arcs.push_back({{"radii", a.radii},
                    {"angles", a.angles},
                    {"limit_angle", a.limit_angle},
                    {"limit_angle_deg", a.limit_angle * 180.0 / std::numbers::pi}});
  return {{"arcs", arcs}, {"gaps", fit.gaps}, {"topology_changes", fit.topology_changes}};
}

void write_json(const fs::path& path, const nlohmann::json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string git_blob_hash(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char c : digest) {
    out += hex[c >> 4];
    out += hex[c & 15];
  }
  return out;
}

}  // namespace fbsing::io
