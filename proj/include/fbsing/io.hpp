#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fbsing/blowup.hpp"
#include "fbsing/field.hpp"
#include "fbsing/freeboundary.hpp"
#include "fbsing/monotonicity.hpp"
#include "fbsing/semilinear.hpp"

namespace fbsing::io {

namespace fs = std::filesystem;

/// Raised on unreadable or malformed input files.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid description stored next to exported fields.
nlohmann::json grid_json(const PolarGrid& grid);
PolarGrid grid_from_json(const nlohmann::json& j);

/// Columns i, j, r, phi, u with round-trip precision.
void write_field_csv(const fs::path& path, const ScalarField& field);
/// Reads a field CSV. The grid comes from `grid` when given (the sidecar
/// object), otherwise it is inferred from the index ranges and the angular
/// spacing: a span of pi/k is a sector, a span of 2 pi a disk.
ScalarField read_field_csv(const fs::path& path, const nlohmann::json& grid = {});

/// Legacy VTK structured grid over the cell centers of the field,
/// Cartesian point coordinates, one scalar per point.
void write_field_vtk(const fs::path& path, const ScalarField& field);

/// Sidecar {grid, k, boundary, eps, kappa, residuals, stages}.
nlohmann::json solution_sidecar(const Solution& sol);
/// Writes <stem>.csv, <stem>.vtk and <stem>.json; returns the written names.
std::vector<std::string> write_solution(const fs::path& dir, const std::string& stem,
                                        const Solution& sol);
/// Loads a field from its CSV, using <path without extension>.json when present.
ScalarField load_field(const fs::path& csv_path);

void write_phi_profile_csv(const fs::path& path, const MonotonicityProfile& p);
void write_blowup_csv(const fs::path& path, const BlowupReport& rep);
void write_level_set_csv(const fs::path& path, const LevelSet& ls);
nlohmann::json arcs_json(const ArcFit& fit);
void write_json(const fs::path& path, const nlohmann::json& j);
nlohmann::json read_json(const fs::path& path);

/// Git blob hash: SHA-1 over "blob <size>\0" + content, lowercase hex.
std::string git_blob_hash(const std::string& content);

}  // namespace fbsing::io
