#include "qdiv/io.hpp"

#include <fstream>
#include <map>

#include "qdiv/errors.hpp"

namespace qdiv::io {

using Eigen::Index;
using Eigen::MatrixXcd;

json matrix_to_json(const MatrixXcd& m) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array();
    json ir = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"dim", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

namespace {

void read_part(const json& part, Index dim, const char* name, MatrixXcd& m, bool imag) {
  if (!part.is_array() || static_cast<Index>(part.size()) != dim)
    throw ParseError(std::string("'") + name + "' must be an array of " + std::to_string(dim) + " rows");
  for (Index i = 0; i < dim; ++i) {
    const json& row = part[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim)
      throw ParseError(std::string("'") + name + "' row " + std::to_string(i) + " must have " + std::to_string(dim) +
                       " entries");
    for (Index j = 0; j < dim; ++j) {
      const json& x = row[static_cast<std::size_t>(j)];
      if (!x.is_number()) throw ParseError(std::string("'") + name + "' entries must be numbers");
      if (imag) m(i, j).imag(x.get<double>());
      else m(i, j).real(x.get<double>());
    }
  }
}

}  // namespace

MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("matrix must be a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw ParseError("'dim' must be a positive integer");
  const auto dim = static_cast<Index>(j["dim"].get<long long>());
  if (!j.contains("re")) throw ParseError("missing 're'");
  MatrixXcd m = MatrixXcd::Zero(dim, dim);
  read_part(j["re"], dim, "re", m, false);
  if (j.contains("im")) read_part(j["im"], dim, "im", m, true);
  return m;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

MatrixXcd read_matrix_file(const std::filesystem::path& path) { return matrix_from_json(read_json_file(path)); }

DensityState read_state_file(const std::filesystem::path& path, const Tolerances& tol) {
  return DensityState(read_matrix_file(path), tol);
}

void write_matrix_file(const std::filesystem::path& path, const MatrixXcd& m) { write_json_file(path, matrix_to_json(m)); }

json symmetry_to_json(const SymmetryOp& op) {
  json j = matrix_to_json(op.matrix());
  j["antiunitary"] = op.antiunitary();
  return j;
}

SymmetryOp symmetry_from_json(const json& j) {
  MatrixXcd u = matrix_from_json(j);
  if (!j.contains("antiunitary") || !j["antiunitary"].is_boolean()) throw ParseError("'antiunitary' must be a boolean");
  return SymmetryOp(std::move(u), j["antiunitary"].get<bool>());
}

json probe_images_to_json(Index dim, const std::vector<MatrixXcd>& images) {
  const auto probes = wigner_probes(dim);
  if (images.size() != probes.size()) throw ParameterError("probe image count does not match the probe set");
  json list = json::array();
  for (std::size_t k = 0; k < probes.size(); ++k) {
    json entry = matrix_to_json(images[k]);
    entry.erase("dim");
    entry["label"] = probes[k].label;
    list.push_back(std::move(entry));
  }
  return json{{"dim", dim}, {"probes", std::move(list)}};
}

std::vector<MatrixXcd> probe_images_from_json(const json& j, Index& dim) {
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw ParseError("probe file needs a positive integer 'dim'");
  dim = static_cast<Index>(j["dim"].get<long long>());
  if (!j.contains("probes") || !j["probes"].is_array()) throw ParseError("probe file needs a 'probes' array");
  const auto probes = wigner_probes(dim);
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < probes.size(); ++k) index[probes[k].label] = k;

  std::vector<MatrixXcd> images(probes.size());
  std::vector<bool> seen(probes.size(), false);
  for (const json& entry : j["probes"]) {
    if (!entry.is_object() || !entry.contains("label") || !entry["label"].is_string())
      throw ParseError("each probe needs a string 'label'");
    const auto label = entry["label"].get<std::string>();
    auto it = index.find(label);
    if (it == index.end()) throw ParseError("unknown probe label '" + label + "'");
    if (seen[it->second]) throw ParseError("duplicate probe label '" + label + "'");
    json m = entry;
    m["dim"] = dim;
    images[it->second] = matrix_from_json(m);
    seen[it->second] = true;
  }
  for (std::size_t k = 0; k < probes.size(); ++k)
    if (!seen[k]) throw ParseError("missing image for probe '" + probes[k].label + "'");
  return images;
}

json table_to_json(const DivergenceTable& t) {
  json values = json::array();
  for (const auto& row : t.values) {
    json r = json::array();
    for (const auto& v : row) {
      if (v.is_infinite()) r.push_back("inf");
      else r.push_back(v.value());
    }
    values.push_back(std::move(r));
  }
  return json{{"generator", t.generator}, {"kind", to_string(t.kind)}, {"labels", t.labels}, {"values", std::move(values)}};
}

DivergenceTable table_from_json(const json& j) {
  DivergenceTable t;
  try {
    t.generator = j.at("generator").get<std::string>();
    t.kind = parse_divergence_kind(j.at("kind").get<std::string>());
    t.labels = j.at("labels").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("divergence table: ") + e.what());
  } catch (const ParameterError& e) {
    throw ParseError(e.what());
  }
  bool inf_allowed = false;
  try {
    inf_allowed = t.kind == DivergenceKind::Bregman && !catalog(t.generator).zero_derivative().is_finite();
  } catch (const ParameterError& e) {
    throw ParseError(e.what());
  }
  const json& values = j.contains("values") ? j["values"] : json();
  if (!values.is_array() || values.size() != t.labels.size()) throw ParseError("table must be square over its labels");
  for (std::size_t i = 0; i < values.size(); ++i) {
    const json& row = values[i];
    if (!row.is_array() || row.size() != t.labels.size()) throw ParseError("table must be square over its labels");
    std::vector<ExtendedReal> r;
    for (std::size_t k = 0; k < row.size(); ++k) {
      const json& x = row[k];
      if (x.is_string() && x.get<std::string>() == "inf") {
        if (!inf_allowed) throw ParseError("'inf' is only valid for Bregman generators with f'(0+) = -inf");
        if (i == k) throw ParseError("diagonal entries must be 0");
        r.push_back(ExtendedReal::infinity());
      } else if (x.is_number()) {
        if (x.get<double>() < 0.0) throw ParseError("table entries must be nonnegative");
        if (i == k && x.get<double>() != 0.0) throw ParseError("diagonal entries must be 0");
        r.push_back(ExtendedReal::finite(x.get<double>(), 0.0));
      } else {
        throw ParseError("table entries must be numbers or \"inf\"");
      }
    }
    t.values.push_back(std::move(r));
  }
  return t;
}

}  // namespace qdiv::io
