#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <string>

#include "qcspan/csv.hpp"
#include "qcspan/gallery.hpp"
#include "qcspan/grid_json.hpp"
#include "support/worked_fixtures.hpp"
#include "support/random_grids.hpp"
#include "support/test_util.hpp"

using namespace qcspan;

namespace {

const std::string kFixtures = QCSPAN_FIXTURES;
const std::string kCli = QCSPAN_CLI_BIN;

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("qcspan_test_" + tag);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("grid json round trip") {
  testsupport::Rng rng(5150);
  for (int iter = 0; iter < 20; ++iter) {
    const GridFunction G = testsupport::random_quasi_copula(rng, 5);
    REQUIRE(grid_from_json(grid_to_json(G)) == G);
    REQUIRE(grid_from_json(grid_to_json(G, /*as_mass=*/true)) == G);
  }
}

TEST_CASE("fixture files parse to the worked-example grids") {
  REQUIRE(load_grid(kFixtures + "/example_A.json") == fixtures::example_A());
  REQUIRE(load_grid(kFixtures + "/ones2x2_mass.json") == fixtures::ones_2x2());
  REQUIRE(load_grid(kFixtures + "/pi_2x2.json") == product_grid(Mesh::equidistant(2)));
  REQUIRE(load_grid(kFixtures + "/c1_2x2_mass.json") == fixtures::sandwich_breaker_low());
}

TEST_CASE("grid json rejects non-canonical documents") {
  json ok = grid_to_json(product_grid(Mesh::equidistant(2)));

  json extra = ok;
  extra["comment"] = "hi";
  REQUIRE_ERRC(grid_from_json(extra), Errc::MalformedJson);

  json both = ok;
  both["mass"] = json::array();
  REQUIRE_ERRC(grid_from_json(both), Errc::MalformedJson);

  json neither = ok;
  neither.erase("values");
  REQUIRE_ERRC(grid_from_json(neither), Errc::MalformedJson);

  json numeric = ok;
  numeric["values"][0][0] = 0;
  REQUIRE_ERRC(grid_from_json(numeric), Errc::MalformedJson);

  json bad_rat = ok;
  bad_rat["values"][0][0] = "1.5";
  REQUIRE_ERRC(grid_from_json(bad_rat), Errc::BadRational);

  json div_zero = ok;
  div_zero["values"][0][0] = "1/0";
  REQUIRE_ERRC(grid_from_json(div_zero), Errc::BadRational);

  REQUIRE_ERRC(load_grid(kFixtures + "/bad_mesh.json"), Errc::MeshInvalid);
  REQUIRE_ERRC(load_grid(kFixtures + "/no_such_file.json"), Errc::IoError);

  json ragged = ok;
  ragged["values"] = json::array({json::array({"0", "0", "0"}), json::array({"0", "1"})});
  REQUIRE_ERRC(grid_from_json(ragged), Errc::MalformedJson);
}

TEST_CASE("csv emission") {
  REQUIRE(csv_to_string({"a", "b"}, {}) == "a,b\n");
  REQUIRE(csv_to_string({"a"}, {{"x,y"}, {"q\"q"}}) == "a\n\"x,y\"\n\"q\"\"q\"\n");
  REQUIRE(format_decimal(0.5) == "0.5");
  REQUIRE(format_decimal(4.0 / 3.0) == "1.33333333333");

  const auto dir = temp_dir("csv");
  emit_csv((dir / "t.csv").string(), {"h"}, {{"1"}});
  REQUIRE(read_text_file((dir / "t.csv").string()) == "h\n1\n");
}

TEST_CASE("cli dominate reproduces the worked example") {
  const CliResult res = run_cli("dominate " + kFixtures + "/example_A.json");
  REQUIRE(res.exit_code == 0);
  const json doc = json::parse(res.out);
  REQUIRE(doc.at("alpha") == "32");
  REQUIRE(grid_from_json(doc.at("lower")) == fixtures::example_lower());
  REQUIRE(grid_from_json(doc.at("upper")) == fixtures::example_upper());
  const GridFunction witness = grid_from_json(doc.at("witness"));
  REQUIRE(validate(witness).is_copula());
}

TEST_CASE("cli norm on gallery q1") {
  const CliResult res = run_cli("norm gallery:q1");
  REQUIRE(res.exit_code == 0);
  const json doc = json::parse(res.out);
  REQUIRE(doc.at("norm") == "3");
  REQUIRE(doc.at("s") == "2");
  REQUIRE(doc.at("t") == "1");
  REQUIRE(validate(grid_from_json(doc.at("B"))).is_copula());
}

TEST_CASE("cli decompose against the default base") {
  const CliResult res = run_cli("decompose gallery:q1");
  REQUIRE(res.exit_code == 0);
  const json doc = json::parse(res.out);
  REQUIRE(doc.at("alpha1") == "3");
  REQUIRE(doc.at("alpha2") == "-2");
}

TEST_CASE("cli validate exit codes") {
  REQUIRE(run_cli("validate " + kFixtures + "/pi_2x2.json").exit_code == 0);
  // grounded and 2-increasing but without uniform marginals: exit 1
  const CliResult res = run_cli("validate " + kFixtures + "/example_A.json");
  REQUIRE(res.exit_code == 1);
  const json doc = json::parse(res.out);
  REQUIRE(doc.at("is_two_increasing") == true);
  REQUIRE(doc.at("has_uniform_marginals") == false);
  REQUIRE(run_cli("validate " + kFixtures + "/no_such_file.json").exit_code == 2);
  REQUIRE(run_cli("validate " + kFixtures + "/bad_mesh.json").exit_code == 2);
  REQUIRE(run_cli("frobnicate x").exit_code == 2);
}

TEST_CASE("cli probe writes csv and verdict") {
  const auto dir = temp_dir("probe");
  const CliResult res = run_cli("probe gallery:counterexample --family aligned --depth 4 --out " +
                                dir.string());
  REQUIRE(res.exit_code == 0);
  const json verdict = json::parse(read_text_file((dir / "verdict.json").string()));
  REQUIRE(verdict.at("verdict") == "LikelyNotInSpan");
  REQUIRE(verdict.at("heuristic") == true);
  const std::string csv = read_text_file((dir / "probe.csv").string());
  REQUIRE(csv.rfind("level,max_gap,alpha_n,family\n", 0) == 0);
  REQUIRE(csv.find("aligned") != std::string::npos);
}

TEST_CASE("cli approximate writes manifest and stage errors") {
  const auto dir = temp_dir("approx");
  const CliResult res =
      run_cli("approximate gallery:q1 --stages 3 --out " + dir.string());
  REQUIRE(res.exit_code == 0);
  const json manifest = json::parse(read_text_file((dir / "series_manifest.json").string()));
  REQUIRE(manifest.at("stages") == 3);
  REQUIRE(manifest.at("head").size() == 2);
  REQUIRE(manifest.at("terms").size() > 0);
  const std::string csv = read_text_file((dir / "stage_errors.csv").string());
  REQUIRE(csv.rfind("stage,bound,measured_sup_error\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 stages
}

TEST_CASE("cli gallery emission is deterministic") {
  const CliResult a = run_cli("gallery emit q1");
  const CliResult b = run_cli("gallery emit q1");
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out == b.out);
  REQUIRE(grid_from_json(json::parse(a.out)) == fixtures::q1());

  const CliResult mass = run_cli("gallery emit q2 --as mass");
  REQUIRE(grid_from_json(json::parse(mass.out)) == fixtures::q2());

  const CliResult list = run_cli("gallery list");
  REQUIRE(list.exit_code == 0);
  REQUIRE(list.out.find("counterexample") != std::string::npos);

  REQUIRE(run_cli("gallery emit pi").exit_code == 2);  // needs --mesh
  REQUIRE(run_cli("gallery emit pi --mesh 3").exit_code == 0);
}

TEST_CASE("cli artifacts are byte-identical across runs") {
  const auto dir_a = temp_dir("det_a"), dir_b = temp_dir("det_b");
  REQUIRE(run_cli("probe gallery:q1 --family aligned --depth 4 --out " + dir_a.string())
              .exit_code == 0);
  REQUIRE(run_cli("probe gallery:q1 --family aligned --depth 4 --out " + dir_b.string())
              .exit_code == 0);
  REQUIRE(read_text_file((dir_a / "probe.csv").string()) ==
          read_text_file((dir_b / "probe.csv").string()));
  REQUIRE(read_text_file((dir_a / "verdict.json").string()) ==
          read_text_file((dir_b / "verdict.json").string()));

  REQUIRE(run_cli("approximate " + kFixtures + "/pi_2x2.json --stages 2 --out " +
                  dir_a.string()).exit_code == 0);
  REQUIRE(run_cli("approximate " + kFixtures + "/pi_2x2.json --stages 2 --out " +
                  dir_b.string()).exit_code == 0);
  REQUIRE(read_text_file((dir_a / "series_manifest.json").string()) ==
          read_text_file((dir_b / "series_manifest.json").string()));
  REQUIRE(read_text_file((dir_a / "stage_errors.csv").string()) ==
          read_text_file((dir_b / "stage_errors.csv").string()));
}

TEST_CASE("cli gallery heatmap csv") {
  const auto dir = temp_dir("heatmap");
  const std::string csv_path = (dir / "q1_mass.csv").string();
  REQUIRE(run_cli("gallery emit q1 --csv " + csv_path).exit_code == 0);
  const std::string csv = read_text_file(csv_path);
  REQUIRE(csv.rfind("i,j,x_lo,x_hi,y_lo,y_hi,mass\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 10);  // header + 9 cells
  REQUIRE(csv.find("-1/3") != std::string::npos);
}
