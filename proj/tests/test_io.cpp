#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "qproj/io.hpp"
#include "qproj/verify.hpp"

using namespace qproj;

TEST_CASE("quartic model parsing") {
  const Json doc = Json::parse(R"({"constraint":{"kind":"quartic","N":32,"snap_level":1}})");
  const ModelSpec model = parse_model(doc);
  CHECK(model.kind == ModelSpec::Kind::Quartic);
  CHECK(model.fock_dim == 32);
  CHECK(model.snap.mode == SnapPolicy::Mode::SnapToLevel);
  CHECK(model.snap.level == 1);
  const OperatorMatrix op = build_model_operator(model);
  CHECK(op.dim() == 32);
}

TEST_CASE("mixed model parsing") {
  const Json doc =
      Json::parse(R"({"kind":"mixed","grid":{"q_min":-12.0,"q_max":12.0,"points":401}})");
  const ModelSpec model = parse_model(doc);
  CHECK(model.kind == ModelSpec::Kind::Mixed);
  CHECK(model.grid.points == 401);
  const OperatorMatrix op = build_model_operator(model);
  CHECK(op.dim() == 399);
}

TEST_CASE("expression model parsing") {
  const Json doc = Json::parse(
      R"({"kind":"expression","N":24,"terms":[{"coeff":1.0,"p":2,"q":0},{"coeff":0.5,"p":0,"q":2}]})");
  const ModelSpec model = parse_model(doc);
  const OperatorMatrix op = build_model_operator(model);
  CHECK(op.hermitian());
  CHECK(op.dim() == 24);
}

TEST_CASE("schema violations carry anchored messages") {
  CHECK_THROWS_AS(parse_model(Json::parse(R"({"constraint":{"kind":"cubic"}})")), SchemaError);
  CHECK_THROWS_AS(parse_model(Json::parse(R"({"constraint":{}})")), SchemaError);
  CHECK_THROWS_AS(parse_model(Json::parse(R"({"kind":"mixed","grid":{"q_min":1,"q_max":-1,"points":64}})")),
                  SchemaError);
  CHECK_THROWS_AS(parse_model(Json::parse(R"({"kind":"expression","terms":[]})")), SchemaError);
  CHECK_THROWS_AS(parse_model(Json::parse("[1,2,3]")), SchemaError);
}

TEST_CASE("csv output is fixed-format") {
  CsvWriter csv({"a", "b"});
  csv.add_row({1.0, 0.045647262536381381});
  csv.add_row({-2.5e-11, 3.0});
  const std::string text = csv.str();
  CHECK(text == "a,b\n1,0.045647262536381378\n-2.5000000000000001e-11,3\n");
  CHECK_THROWS_AS(csv.add_row({1.0}), std::invalid_argument);
}

TEST_CASE("matrix csv export lists stored entries") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = Complex(0.5, -0.25);
  m(1, 0) = Complex(0.5, 0.25);
  const OperatorMatrix op = OperatorMatrix::dense(m, BasisSpec::fock(2));
  const std::string path = "/tmp/qproj_test_matrix.csv";
  write_matrix_csv(op, path);
  std::ifstream in(path);
  std::string header, line1, line2;
  std::getline(in, header);
  std::getline(in, line1);
  std::getline(in, line2);
  CHECK(header == "row,col,re,im");
  CHECK(line1 == "0,1,0.5,-0.25");
  CHECK(line2 == "1,0,0.5,0.25");
  std::remove(path.c_str());
}

TEST_CASE("report serializers") {
  GapReport gap;
  gap.delta_cap = 2.0;
  gap.zero_multiplicity = 1;
  gap.zero_tolerance = 1e-8;
  gap.spectrum_excerpt = {0.0, 2.0};
  const Json gj = to_json(gap);
  CHECK(gj["Delta"] == 2.0);
  CHECK(gj["spectrum_excerpt"].size() == 2);

  BoundReport bound;
  bound.L = 10.0;
  bound.measured_norm = 0.04;
  bound.bound = 0.05;
  bound.saturation_ratio = 0.8;
  CHECK(to_json(bound)["saturation_ratio"] == 0.8);

  RankOneReport rank;
  rank.delta_values = {0.2, 0.1};
  rank.sigma_ratio = {0.01, 0.0025};
  rank.fitted_slope = 2.0;
  rank.rank = 4;
  const Json rj = to_json(rank);
  CHECK(rj["fitted_slope"] == 2.0);
  CHECK(rj["sigma_ratio"][1] == 0.0025);
}

TEST_CASE("suite reports serialize with tolerances attached") {
  SuiteReport report;
  report.suite = "demo";
  report.checks.push_back({"check", true, 0.5, 1.0, "detail"});
  const Json doc = to_json(report);
  CHECK(doc["suite"] == "demo");
  CHECK(doc["all_passed"] == true);
  CHECK(doc["checks"][0]["measured"] == 0.5);
  CHECK(doc["checks"][0]["tolerance"] == 1.0);
}

TEST_CASE("unknown suite name is rejected") {
  CHECK_THROWS_AS(run_suite("nonsense"), std::invalid_argument);
}
