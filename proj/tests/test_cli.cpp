#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cantor/cli.hpp"
#include "cantor/generate.hpp"
#include "cantor/io.hpp"

using namespace cantor;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cantor_run(std::vector<std::string> args) {
  args.insert(args.begin(), "cantor");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "cantor_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Data lines of a CSV table, without the comment header.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto& row = rows.emplace_back();
    std::string cell;
    std::istringstream cells(line);
    while (std::getline(cells, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.push_back("");
  }
  return rows;
}

}  // namespace

TEST_CASE("gen writes a metric file that loads back exactly") {
  const fs::path file = scratch() / "mu3.json";
  const Result r = cantor_run({"gen", "--kind", "mu", "--depth", "3", "--out", file.string()});
  CHECK(r.code == 0);
  const io::AnyMetric d = io::load_metric(file);
  REQUIRE(std::holds_alternative<RationalMetric>(d));
  CHECK(std::get<RationalMetric>(d).size() == 8);
  CHECK(std::get<RationalMetric>(d) == generate<Rational>(GeneratorKind::mu, 3));
  CHECK(io::read_json(file)["meta"]["version"] == "cantor " CANTOR_VERSION);
}

TEST_CASE("gen validates its parameters") {
  for (const char* lambda : {"0", "1", "1.5", "0.333..."}) {
    const Result r = cantor_run({"gen", "--kind", "middle-lambda", "--depth", "3", "--lambda", lambda});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());
  }
  CHECK(cantor_run({"gen", "--kind", "nonsense", "--depth", "3"}).code == 2);
  CHECK(cantor_run({"gen", "--depth", "3"}).code == 2);
  CHECK(cantor_run({"gen", "--kind", "random", "--depth", "3"}).code == 2);
  CHECK(cantor_run({"frobnicate"}).code == 2);
  CHECK(cantor_run({"--help"}).code == 0);
}

TEST_CASE("push reports and honours exit codes") {
  const fs::path in = scratch() / "m6.json";
  REQUIRE(cantor_run({"gen", "--kind", "middle-lambda", "--depth", "6", "--out", in.string()}).code == 0);
  const fs::path out = scratch() / "m6_pushed.json";
  const Result r = cantor_run({"push", "--in", in.string(), "--epsilon", "0.3", "--out", out.string()});
  REQUIRE(r.code == 0);
  const io::json rep = io::json::parse(r.out);
  CHECK(rep["n"] == 2);
  CHECK(parse_rational(rep["chi_after"].get<std::string>()) < Rational(3, 2));
  CHECK(parse_rational(rep["sup_distance"].get<std::string>()) < Rational(3, 10));
  CHECK(fs::exists(out));

  const fs::path mu = scratch() / "mu4.json";
  REQUIRE(cantor_run({"gen", "--kind", "mu", "--depth", "4", "--out", mu.string()}).code == 0);
  const Result m = cantor_run({"push", "--in", mu.string(), "--epsilon", "0.3"});
  REQUIRE(m.code == 0);
  CHECK(io::json::parse(m.out)["chi_after"] == "1");
  const Result tiny = cantor_run({"push", "--in", mu.string(), "--epsilon", "1e-9"});
  CHECK(tiny.code == 3);
  CHECK(cantor_run({"push", "--in", (scratch() / "missing.json").string(), "--epsilon", "0.3"}).code == 1);
}

TEST_CASE("survey is deterministic and always succeeds") {
  const fs::path a = scratch() / "survey_a.csv";
  const fs::path b = scratch() / "survey_b.csv";
  const fs::path j = scratch() / "survey.json";
  const std::vector<std::string> base = {"survey", "--depth", "6", "--trials", "100", "--seed", "11"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> v = base;
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  REQUIRE(cantor_run(with({"--out", a.string(), "--json", j.string()})).code == 0);
  REQUIRE(cantor_run(with({"--out", b.string()})).code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto rows = csv_rows(slurp(a));
  REQUIRE(rows.size() == 102);
  CHECK(rows[0] == std::vector<std::string>{"trial", "seed", "chi_min_before", "best_n", "in_Un_before", "push_ok",
                                            "n", "chi_after", "sup_distance"});
  const auto& summary = rows.back();
  CHECK(summary[0] == "summary");
  CHECK(std::stod(summary[5]) == 1.0);
  CHECK(std::stod(summary[2]) > 1.0);
  const io::json mirror = io::read_json(j);
  CHECK(mirror["rows"].size() == 101);
  CHECK(mirror["summary"]["push_success_rate"] == 1.0);
}

TEST_CASE("report tables") {
  const fs::path mu8 = scratch() / "mu8.json";
  REQUIRE(cantor_run({"gen", "--kind", "mu", "--depth", "8", "--out", mu8.string()}).code == 0);
  const Result chi = cantor_run({"report", "--what", "chi-table", "--in", mu8.string()});
  REQUIRE(chi.code == 0);
  const auto rows = csv_rows(chi.out);
  REQUIRE(rows.size() == 8);
  for (std::size_t n = 1; n <= 7; ++n) CHECK(std::stod(rows[n][1]) == 1.0);

  const Result fn = cantor_run({"report", "--what", "freenorm", "--in", mu8.string(), "--dipole", "3,200"});
  REQUIRE(fn.code == 0);
  CHECK(std::stod(csv_rows(fn.out).back()[2]) == 0.5);

  const fs::path mol = scratch() / "mol.json";
  io::write_json(mol, io::json{{"weights", {{"0", "1"}, {"1", "-1"}}}});
  const Result fm = cantor_run({"report", "--what", "freenorm", "--in", mu8.string(), "--molecule", mol.string()});
  REQUIRE(fm.code == 0);
  CHECK(std::stod(csv_rows(fm.out).back()[2]) == 1.0 / 256);

  const Result dims = cantor_run({"report", "--what", "dims"});
  REQUIRE(dims.code == 0);
  const auto drows = csv_rows(dims.out);
  REQUIRE(drows.size() == 4);
  for (std::size_t i = 1; i < drows.size(); ++i) CHECK(std::stod(drows[i][3]) <= 0.05);

  const Result def = cantor_run({"report", "--what", "defect", "--in", mu8.string(), "--n", "3"});
  REQUIRE(def.code == 0);
  CHECK(std::stod(csv_rows(def.out).back()[1]) == 0.0);

  const Result dist = cantor_run({"report", "--what", "distortion", "--in", mu8.string(), "--points", "0,1,2"});
  REQUIRE(dist.code == 0);
  CHECK(csv_rows(dist.out)[1][0] == "line_distortion");

  CHECK(cantor_run({"report", "--what", "chi-table"}).code == 2);
  CHECK(cantor_run({"report", "--what", "distortion", "--in", mu8.string()}).code == 2);
}

TEST_CASE("relative output paths honour CANTOR_OUT_DIR") {
  const fs::path dir = scratch() / "outdir";
  fs::create_directories(dir);
  ::setenv("CANTOR_OUT_DIR", dir.c_str(), 1);
  const Result r = cantor_run({"gen", "--kind", "mu", "--depth", "2", "--out", "mu2.json"});
  ::unsetenv("CANTOR_OUT_DIR");
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "mu2.json"));
}
