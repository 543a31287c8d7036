#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdiv/extended_real.hpp"
#include "qdiv/hermitian.hpp"
#include "qdiv/preserver.hpp"

namespace qdiv::io {

using nlohmann::json;

// State / matrix file: {"dim": N, "re": [[...] x N] x N, "im": [[...]]}, rows first.
json matrix_to_json(const Eigen::MatrixXcd& m);
/// Throws ParseError on a malformed object.
Eigen::MatrixXcd matrix_from_json(const json& j);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

Eigen::MatrixXcd read_matrix_file(const std::filesystem::path& path);
/// Parses and validates (ParseError, then ValidationError).
DensityState read_state_file(const std::filesystem::path& path, const Tolerances& tol = {});
void write_matrix_file(const std::filesystem::path& path, const Eigen::MatrixXcd& m);

// Symmetry file: matrix fields plus "antiunitary": bool and optionally "max_probe_residual".
json symmetry_to_json(const SymmetryOp& op);
SymmetryOp symmetry_from_json(const json& j);

// Probe image file: {"dim": N, "probes": [{"label": "e1", "re": ..., "im": ...}, ...]}
// with labels from wigner_probes(N); order in the file is free.
json probe_images_to_json(Eigen::Index dim, const std::vector<Eigen::MatrixXcd>& images);
/// Images reordered to match wigner_probes(dim). Throws ParseError on missing or unknown labels.
std::vector<Eigen::MatrixXcd> probe_images_from_json(const json& j, Eigen::Index& dim);

struct DivergenceTable {
  std::string generator;
  DivergenceKind kind = DivergenceKind::Bregman;
  std::vector<std::string> labels;
  std::vector<std::vector<ExtendedReal>> values;
};

// {"generator": ..., "kind": ..., "labels": [...], "values": [[number | "inf", ...], ...]}
json table_to_json(const DivergenceTable& t);
/// Checks shape, zero diagonal, and that "inf" appears only for Bregman
/// generators with f'(0+) = -inf.
DivergenceTable table_from_json(const json& j);

}  // namespace qdiv::io
