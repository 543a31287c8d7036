#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "helpers.hpp"
#include "qdiv/errors.hpp"
#include "qdiv/io.hpp"
#include "qdiv/random.hpp"

using namespace qdiv;
using io::json;
using Eigen::MatrixXcd;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "qdiv_test_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("matrix files round-trip bit for bit") {
  Rng rng(1);
  for (int k = 0; k < 20; ++k) {
    const MatrixXcd m = random_state(2 + k % 5, 1 + k % 2, rng).matrix();
    const auto path = scratch("m.json");
    io::write_matrix_file(path, m);
    const MatrixXcd back = io::read_matrix_file(path);
    REQUIRE(back.rows() == m.rows());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      CHECK(back.data()[i].real() == m.data()[i].real());
      CHECK(back.data()[i].imag() == m.data()[i].imag());
    }
  }
}

TEST_CASE("matrix parsing errors") {
  CHECK_THROWS_AS(io::matrix_from_json(json::array()), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(json{{"dim", 0}, {"re", json::array()}}), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(json{{"dim", 2}}), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"dim":2,"re":[[1,0]]})")), ParseError);
  CHECK_THROWS_AS(io::matrix_from_json(json::parse(R"({"dim":2,"re":[[1,0],[0,"x"]]})")), ParseError);
  const MatrixXcd real_only = io::matrix_from_json(json::parse(R"({"dim":2,"re":[[1,0],[0,0]]})"));
  CHECK(max_abs_entry(real_only - test::diag({1, 0})) == 0.0);

  const auto bad = scratch("bad.json");
  { std::ofstream(bad) << "{not json"; }
  CHECK_THROWS_AS(io::read_json_file(bad), ParseError);
  CHECK_THROWS_AS(io::read_json_file(scratch("missing.json")), ParseError);
}

TEST_CASE("state files are validated") {
  const auto path = scratch("s.json");
  io::write_matrix_file(path, test::diag({0.5, 0.6}));
  CHECK_THROWS_AS(io::read_state_file(path), ValidationError);
  io::write_matrix_file(path, test::diag({0.5, 0.5}));
  CHECK(io::read_state_file(path).rank() == 2);
}

TEST_CASE("symmetry round trip") {
  Rng rng(2);
  const SymmetryOp op(random_unitary(3, rng), true);
  const SymmetryOp back = io::symmetry_from_json(io::symmetry_to_json(op));
  CHECK(back.antiunitary());
  CHECK(max_abs_entry(back.matrix() - op.matrix()) == 0.0);
  json j = io::symmetry_to_json(op);
  j.erase("antiunitary");
  CHECK_THROWS_AS(io::symmetry_from_json(j), ParseError);
}

TEST_CASE("probe image files") {
  Rng rng(3);
  const SymmetryOp v(random_unitary(3, rng), false);
  std::vector<MatrixXcd> images;
  for (const auto& p : wigner_probes(3)) images.push_back(v.apply(p.projection.matrix()));
  json j = io::probe_images_to_json(3, images);
  std::reverse(j["probes"].begin(), j["probes"].end());
  Eigen::Index dim = 0;
  const auto back = io::probe_images_from_json(j, dim);
  CHECK(dim == 3);
  for (std::size_t k = 0; k < images.size(); ++k) CHECK(max_abs_entry(back[k] - images[k]) == 0.0);

  json missing = j;
  missing["probes"].erase(0);
  CHECK_THROWS_AS(io::probe_images_from_json(missing, dim), ParseError);
  json duplicate = j;
  duplicate["probes"].push_back(j["probes"][0]);
  CHECK_THROWS_AS(io::probe_images_from_json(duplicate, dim), ParseError);
  json unknown = j;
  unknown["probes"][0]["label"] = "e9";
  CHECK_THROWS_AS(io::probe_images_from_json(unknown, dim), ParseError);
}

TEST_CASE("divergence tables") {
  io::DivergenceTable t{"xlogx", DivergenceKind::Bregman, {"a", "b"},
                        {{ExtendedReal::finite(0.0), ExtendedReal::infinity()},
                         {ExtendedReal::finite(0.25), ExtendedReal::finite(0.0)}}};
  const json j = io::table_to_json(t);
  CHECK(j["values"][0][1] == "inf");
  const auto back = io::table_from_json(j);
  CHECK(back.values[0][1].is_infinite());
  CHECK(back.values[1][0].value() == 0.25);

  json jensen_inf = j;
  jensen_inf["kind"] = "jensen";
  CHECK_THROWS_AS(io::table_from_json(jensen_inf), ParseError);
  json finite_class_inf = j;
  finite_class_inf["generator"] = "quadratic";
  CHECK_THROWS_AS(io::table_from_json(finite_class_inf), ParseError);
  json diagonal = j;
  diagonal["values"][0][0] = 0.1;
  CHECK_THROWS_AS(io::table_from_json(diagonal), ParseError);
  json negative = j;
  negative["values"][1][0] = -0.1;
  CHECK_THROWS_AS(io::table_from_json(negative), ParseError);
  json ragged = j;
  ragged["values"][1].erase(1);
  CHECK_THROWS_AS(io::table_from_json(ragged), ParseError);
  json unknown_gen = j;
  unknown_gen["generator"] = "cube";
  CHECK_THROWS_AS(io::table_from_json(unknown_gen), ParseError);
}
