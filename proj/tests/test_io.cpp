#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "fbsing/io.hpp"

using namespace fbsing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::path("io_scratch") / name;
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

void write_text(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

ScalarField wiggly(const PolarGrid& g) {
  return ScalarField::from_function(g, [](double r, double p) { return std::exp(r) * std::cos(3.3 * p) / 7.0; });
}

bool same(const ScalarField& a, const ScalarField& b) {
  if (!(a.grid() == b.grid())) return false;
  for (std::size_t n = 0; n < a.size(); ++n)
    if (a.values()[n] != b.values()[n]) return false;
  return true;
}

}  // namespace

TEST_CASE("field CSV round trip is bit-exact") {
  const fs::path dir = scratch("roundtrip");
  SUBCASE("sector grid inferred from the angular span") {
    const ScalarField u = wiggly(build_sector_grid(SectorSpec{4}, 10, 12));
    io::write_field_csv(dir / "sector.csv", u);
    CHECK(first_line(dir / "sector.csv") == "i,j,r,phi,u");
    CHECK(same(io::read_field_csv(dir / "sector.csv"), u));
  }
  SUBCASE("disk grid inferred from a full turn") {
    const ScalarField u = wiggly(build_sector_grid(SectorSpec{1}, 8, 10).full_disk());
    io::write_field_csv(dir / "disk.csv", u);
    const ScalarField back = io::read_field_csv(dir / "disk.csv");
    CHECK(back.grid().is_disk());
    CHECK(back.grid().n_phi() == 20);
    for (std::size_t n = 0; n < u.size(); ++n) CHECK(back.values()[n] == u.values()[n]);
  }
  SUBCASE("sidecar grid wins") {
    const PolarGrid g = build_sector_grid(SectorSpec{2}, 8, 8).full_disk();
    const ScalarField u = wiggly(g);
    io::write_field_csv(dir / "side.csv", u);
    io::write_json(dir / "side.json", {{"grid", io::grid_json(g)}});
    const ScalarField back = io::load_field(dir / "side.csv");
    CHECK(back.grid().spec().k == 2);
    CHECK(same(back, u));
    CHECK(io::grid_from_json(io::grid_json(g)) == g);
  }
}

TEST_CASE("malformed field files are rejected") {
  const fs::path dir = scratch("bad");
  const std::string head = "i,j,r,phi,u\n";
  write_text(dir / "cols.csv", head + "0,0,0.1,0.2\n");
  CHECK_THROWS_AS(io::read_field_csv(dir / "cols.csv"), io::FormatError);
  write_text(dir / "num.csv", head + "0,0,0.1,0.2,abc\n");
  CHECK_THROWS_AS(io::read_field_csv(dir / "num.csv"), io::FormatError);
  write_text(dir / "empty.csv", "");
  CHECK_THROWS_AS(io::read_field_csv(dir / "empty.csv"), io::FormatError);
  CHECK_THROWS_AS(io::read_field_csv(dir / "missing.csv"), io::FormatError);

  // Drop one row of a valid file, then duplicate another.
  const ScalarField u = wiggly(build_sector_grid(SectorSpec{2}, 8, 8));
  io::write_field_csv(dir / "ok.csv", u);
  std::string text = slurp(dir / "ok.csv");
  const std::size_t last = text.rfind('\n', text.size() - 2);
  write_text(dir / "short.csv", text.substr(0, last + 1));
  CHECK_THROWS_AS(io::read_field_csv(dir / "short.csv", io::grid_json(u.grid())), io::FormatError);
  const std::size_t second = text.find('\n', text.find('\n') + 1);
  const std::string row = text.substr(text.find('\n') + 1, second - text.find('\n'));
  write_text(dir / "dup.csv", text.substr(0, last + 1) + row);
  CHECK_THROWS_AS(io::read_field_csv(dir / "dup.csv", io::grid_json(u.grid())), io::FormatError);

  write_text(dir / "bad.json", "{ not json");
  CHECK_THROWS_AS(io::read_json(dir / "bad.json"), io::FormatError);
}

TEST_CASE("VTK export header") {
  const fs::path dir = scratch("vtk");
  const ScalarField u = wiggly(build_sector_grid(SectorSpec{2}, 8, 12));
  io::write_field_vtk(dir / "u.vtk", u);
  const std::string text = slurp(dir / "u.vtk");
  CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
  CHECK(text.find("DATASET STRUCTURED_GRID") != std::string::npos);
  CHECK(text.find("DIMENSIONS 12 8 1") != std::string::npos);
  CHECK(text.find("POINTS 96 double") != std::string::npos);
  CHECK(text.find("POINT_DATA 96") != std::string::npos);
}

TEST_CASE("git blob hash") {
  // Values printed by `git hash-object` for the same content.
  CHECK(io::git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(io::git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}
