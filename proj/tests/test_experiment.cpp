#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"
#include "heatlab/experiment.hpp"

using namespace heatlab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("heatlab_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kGraphs = std::string(HEATLAB_FIXTURES) + "/graphs/";

std::string axioms_config(const std::string& name) {
  return R"({"name": ")" + name + R"(", "kind": "axioms", "graph": ")" + kGraphs + R"(p5.graph", "s": 0.5, "t": 0.5})";
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_experiment(R"({"kind": "axioms", "name": "a", "seed": 9, "graph": "x.graph"})", "/base");
  CHECK(cfg.kind == ExperimentKind::Axioms);
  CHECK(cfg.seed == 9);
  CHECK(cfg.output == "a");
  CHECK(cfg.base_dir == fs::path("/base"));
  CHECK_CODE(parse_experiment("{", "."), ErrorCode::ConfigError);
  CHECK_CODE(parse_experiment(R"({"kind": "nope"})", "."), ErrorCode::ConfigError);
  CHECK_CODE(parse_experiment(R"({"name": "missing kind"})", "."), ErrorCode::ConfigError);
  CHECK_CODE(parse_experiment(R"({"kind": "axioms", "tolerances": {"mass": -1}})", "."), ErrorCode::ConfigError);
  CHECK_CODE(load_experiment("/no/such/config.json"), ErrorCode::InputError);
}

TEST_CASE("graph-limit on the two vertex fixture") {
  const auto out = scratch("graph_limit");
  const auto r = run_file(fs::path(HEATLAB_FIXTURES) / "acceptance/graph_limit_two_vertex.json", {.out_dir = out});
  CHECK(r.status == ExitStatus::Pass);
  REQUIRE(r.artifacts.size() == 2);
  const std::string csv = slurp(r.artifacts[0]);
  CHECK(csv.rfind("t,scaled_trace,target,abs_error,gt_rhs\n", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::size_t rows = 0;
  bool has_check_point = false;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.rfind("0.0009765625,", 0) == 0) has_check_point = true;
  }
  CHECK(rows == 21);
  CHECK(has_check_point);
}

TEST_CASE("axioms run and missing fields") {
  const auto out = scratch("axioms");
  const auto ok = run(parse_experiment(axioms_config("ax"), out), {.out_dir = out});
  CHECK(ok.status == ExitStatus::Pass);
  CHECK(ok.checks.size() == 5);

  const auto missing = run(parse_experiment(R"({"kind": "axioms", "name": "m"})", out), {.out_dir = out});
  CHECK(missing.status == ExitStatus::InputError);
  CHECK(missing.message.find("ConfigError") != std::string::npos);
}

TEST_CASE("malformed graph file is a config error") {
  const auto out = scratch("malformed");
  const auto r = run(parse_experiment(R"({"kind": "axioms", "name": "bad", "graph": ")" + kGraphs + R"(malformed.graph"})", out),
                     {.out_dir = out});
  CHECK(r.status == ExitStatus::InputError);
  CHECK(r.message.rfind("ConfigError", 0) == 0);
}

TEST_CASE("failed assertion names the check") {
  const auto out = scratch("assert");
  const std::string doc = R"({"kind": "graph-limit", "name": "tight", "graph": ")" + kGraphs +
                          R"(two_vertex.graph", "potential": [0, 1], "t_grid": [1.0, 0.5], "tolerances": {"relative_error": 1e-9}})";
  const auto r = run(parse_experiment(doc, out), {.out_dir = out});
  CHECK(r.status == ExitStatus::AssertionFailed);
  CHECK(r.message.find("relative_error") != std::string::npos);
}

TEST_CASE("suite aggregation") {
  SUBCASE("empty directory") {
    const auto dir = scratch("suite_empty");
    const auto s = run_suite(dir, {.out_dir = dir / "out"});
    CHECK(s.results.empty());
    CHECK(s.status == ExitStatus::Pass);
  }
  SUBCASE("one failure among five") {
    const auto dir = scratch("suite_mixed");
    for (int i = 0; i < 4; ++i) write(dir / ("ok" + std::to_string(i) + ".json"), axioms_config("ok" + std::to_string(i)));
    write(dir / "zz_fail.json", R"({"kind": "admissibility", "name": "zz_fail",
      "profile": {"m": 2, "A": 1, "rule": "zero"}, "expect": "admissible"})");
    const auto s = run_suite(dir, {.out_dir = dir / "out", .threads = 3});
    CHECK(s.passed == 4);
    CHECK(s.failed == 1);
    CHECK(s.status == ExitStatus::AssertionFailed);
    const std::string summary = slurp(dir / "out" / "summary.csv");
    CHECK(summary.find("zz_fail,1,") != std::string::npos);
  }
  SUBCASE("config error does not stop siblings") {
    const auto dir = scratch("suite_error");
    write(dir / "a.json", "{ broken");
    write(dir / "b.json", axioms_config("b"));
    const auto s = run_suite(dir, {.out_dir = dir / "out"});
    CHECK(s.passed == 1);
    CHECK(s.status == ExitStatus::InputError);
  }
  SUBCASE("missing directory") {
    CHECK(run_suite("/no/such/dir").status == ExitStatus::InputError);
  }
}

TEST_CASE("monte carlo artifacts are deterministic") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const std::string doc = R"({"kind": "fk-crosscheck", "name": "fk", "seed": 5, "graph": ")" + kGraphs +
                          R"(two_vertex.graph", "potential": [0.5, 0], "t": 0.8, "samples": 5000})";
  const auto cfg = parse_experiment(doc, a);
  run(cfg, {.out_dir = a, .threads = 1});
  run(cfg, {.out_dir = b, .threads = 4});
  CHECK(slurp(a / "fk.csv") == slurp(b / "fk.csv"));
  CHECK(slurp(a / "fk.json") == slurp(b / "fk.json"));
  const auto c = scratch("det_c");
  run(cfg, {.out_dir = c, .override_seed = true, .seed = 6});
  CHECK(slurp(a / "fk.csv") != slurp(c / "fk.csv"));
}

TEST_CASE("growth profile documents") {
  const auto p = parse_growth_profile(R"({"m": 3, "A": 1, "rule": "quadratic:1", "k_max": 100})");
  CHECK(p.m == 3);
  CHECK(p.k_max == 100);
  CHECK(parse_growth_profile(R"({"m": 1, "A": 0, "table": [1, 0.5, 0.25]})").k_max == 4);
  CHECK_CODE(parse_growth_profile(R"({"m": 1, "rule": "cubic"})"), ErrorCode::ConfigError);
  CHECK_CODE(parse_growth_profile("[]"), ErrorCode::ConfigError);
  const auto csv = admissibility_csv(ricci_admissibility(parse_growth_profile(R"({"m": 1, "A": 0, "rule": "power:3", "k_max": 5})")));
  CHECK(csv.rfind("k,partial_sum,doubling_partial_sum\n2,", 0) == 0);
}
