#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "cantor/error.hpp"
#include "cantor/generate.hpp"
#include "cantor/io.hpp"

using namespace cantor;
using io::json;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "cantor_io_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

int reject_kind(const json& j) {
  try {
    io::metric_from_json(j);
  } catch (const Error& e) {
    return static_cast<int>(e.kind());
  }
  return -1;
}

}  // namespace

TEST_CASE("rational metrics round-trip exactly through files") {
  GeneratorParams p;
  p.seed = 9;
  for (auto kind : {GeneratorKind::mu, GeneratorKind::middle_lambda, GeneratorKind::random}) {
    const RationalMetric d = generate<Rational>(kind, 4, p);
    const auto path = scratch("m.json");
    io::write_json(path, io::metric_to_json(d));
    const io::AnyMetric back = io::load_metric(path);
    REQUIRE(std::holds_alternative<RationalMetric>(back));
    CHECK(std::get<RationalMetric>(back) == d);
    CHECK(std::get<RationalMetric>(back).line_coordinates() == d.line_coordinates());
  }
}

TEST_CASE("double metrics round-trip bit for bit") {
  const DoubleMetric d = generate<double>(GeneratorKind::middle_lambda, 5);
  const json j = json::parse(io::metric_to_json(d).dump());
  CHECK(std::get<DoubleMetric>(io::metric_from_json(j)) == d);
}

TEST_CASE("the file layout is a strict upper triangle") {
  const json j = io::metric_to_json(generate<Rational>(GeneratorKind::mu, 2));
  CHECK(j["depth"] == 2);
  CHECK(j["mode"] == "rational");
  CHECK(j["dist"] == json::array({"1/4", "1/2", "1/2", "1/2", "1/2", "1/4"}));
}

TEST_CASE("readers accept full matrices and reject bad input") {
  json full = {{"depth", 1}, {"mode", "rational"}, {"dist", {{0, "1/2"}, {"1/2", 0}}}};
  CHECK(std::get<RationalMetric>(io::metric_from_json(full))(0, 1) == Rational(1, 2));

  const int invalid = static_cast<int>(ErrorKind::invalid_argument);
  json asym = full;
  asym["dist"] = {{0, "1/2"}, {"1/3", 0}};
  CHECK(reject_kind(asym) == invalid);
  json diag = full;
  diag["dist"] = {{"1/5", "1/2"}, {"1/2", 0}};
  CHECK(reject_kind(diag) == invalid);
  CHECK(reject_kind({{"depth", 1}, {"mode", "rational"}, {"dist", {"-1/2"}}}) == invalid);
  CHECK(reject_kind({{"depth", 1}, {"mode", "rational"}, {"dist", {0}}}) == invalid);
  CHECK(reject_kind({{"depth", 2}, {"mode", "rational"}, {"dist", {"1/2"}}}) == invalid);
  CHECK(reject_kind({{"depth", 1}, {"mode", "float"}, {"dist", {"1/2"}}}) == invalid);
  CHECK(reject_kind({{"mode", "rational"}, {"dist", {"1/2"}}}) == invalid);
  CHECK(reject_kind({{"depth", 1}, {"mode", "rational"}, {"dist", {"x"}}}) == invalid);
}

TEST_CASE("missing files are I/O errors and garbage is invalid input") {
  try {
    io::load_metric(scratch("does-not-exist.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
  std::ofstream(scratch("garbage.json")) << "{ not json";
  try {
    io::load_metric(scratch("garbage.json"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("decimal entries are read exactly in rational mode") {
  const json j = {{"depth", 1}, {"mode", "rational"}, {"dist", {0.1}}};
  CHECK(std::get<RationalMetric>(io::metric_from_json(j))(0, 1) == Rational(1, 10));
}

TEST_CASE("modes convert") {
  const io::AnyMetric any = generate<Rational>(GeneratorKind::middle_lambda, 3);
  const DoubleMetric d = io::metric_as<double>(any);
  CHECK(d(0, 1) == to_double(Rational(2, 27)));
  const RationalMetric back = io::metric_as<Rational>(io::AnyMetric(d));
  CHECK(back(0, 4) == Rational(d(0, 4)));  // doubles convert exactly
}

TEST_CASE("molecules, operators and functions round-trip") {
  Molecule<Rational> mol;
  mol.weights = {{0, Rational(1, 2)}, {3, Rational(-1, 2)}};
  CHECK(io::molecule_from_json<Rational>(io::molecule_to_json(mol)).weights == mol.weights);
  CHECK_THROWS_AS(io::molecule_from_json<Rational>(json{{"weights", {{"-1", 1}}}}), Error);

  const ExtOperator<Rational> op = build_Tn(generate<Rational>(GeneratorKind::mu, 3), 2);
  const ExtOperator<Rational> op2 = io::operator_from_json<Rational>(io::operator_to_json(op));
  CHECK(op2.net == op.net);
  CHECK(op2.rows == op.rows);

  LipFn<Rational> f{{0, Rational(1, 3), Rational(-2, 5)}, 0};
  CHECK(io::lipfn_from_json<Rational>(io::lipfn_to_json(f)) == f);
}

TEST_CASE("surgery plans round-trip with inline and file replacements") {
  SurgeryPlan<Rational> plan;
  plan.partition = cylinder_partition(1);
  plan.epsilon = Rational(3, 5);
  plan.delta = Rational(1, 4);
  plan.replacements.assign(2, generate<Rational>(GeneratorKind::mu, 1).dist());
  json j = io::plan_to_json(plan);
  CHECK(j["pieces"] == json::array({json::array({"0"}), json::array({"1"})}));
  io::write_json(scratch("rep.json"), j["replacements"][1]);
  j["replacements"][1] = {{"file", "rep.json"}};
  const SurgeryPlan<Rational> back = io::plan_from_json<Rational>(j, scratch("rep.json").parent_path());
  CHECK(back.epsilon == plan.epsilon);
  CHECK(back.delta == plan.delta);
  CHECK(back.partition.target == plan.partition.target);
  CHECK(back.partition.pieces == plan.partition.pieces);
  CHECK(back.replacements == plan.replacements);
}
