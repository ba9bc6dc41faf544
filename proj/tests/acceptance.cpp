// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "heatlab/errors.hpp"
#include "heatlab/experiment.hpp"
#include "heatlab/graph.hpp"
#include "heatlab/graph_io.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/rng.hpp"
#include "heatlab/schrodinger.hpp"

using namespace heatlab;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = HEATLAB_FIXTURES;
const fs::path kAcceptance = kFixtures / "acceptance";

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why) {
    passed = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
};

// Runs configs whose file name starts with `prefix` and folds their checks together.
Outcome run_configs(const std::string& prefix, const fs::path& out_dir) {
  Outcome o;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(kAcceptance)) {
    const auto name = e.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) o.fail("no configs match " + prefix);
  for (const auto& f : files) {
    const auto r = run_file(f, {.out_dir = out_dir});
    if (r.status != ExitStatus::Pass) o.fail(r.name + ": " + r.message);
  }
  if (o.passed) o.detail = std::to_string(files.size()) + " configs";
  return o;
}

std::vector<WeightedGraph> fixture_graphs() {
  std::vector<WeightedGraph> gs;
  for (const char* f : {"two_vertex.graph", "p5.graph", "k5.graph"}) {
    gs.push_back(validate(read_graph_file(kFixtures / "graphs" / f)));
  }
  gs.push_back(validate(generators::random_connected({.n = 20, .seed = 2024})));
  return gs;
}

Outcome golden_thompson_sweep() {
  Outcome o;
  double worst_gap = -INFINITY, worst_equality = 0.0;
  std::uint64_t state = 17;
  auto uniform = [&state] { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; };
  for (const auto& g : fixture_graphs()) {
    const auto ts = geometric_grid(2.0, 0.5, 10);
    for (double t : ts) {
      for (int j = 0; j < 10; ++j) {
        std::vector<double> w(g.size());
        for (double& v : w) v = -1.0 + 4.0 * uniform();
        const auto gt = golden_thompson_check(g, Potential(w), t);
        worst_gap = std::max(worst_gap, gt.lhs - gt.rhs);
        if (!gt.holds(1e-10)) o.fail(g.name() + " t=" + format_double(t));
      }
      const double c = -1.0 + 4.0 * uniform();
      const auto eq = golden_thompson_check(g, Potential::constant(g.size(), c), t);
      worst_equality = std::max(worst_equality, std::abs(eq.lhs - eq.rhs));
    }
  }
  if (worst_equality > 1e-12) o.fail("constant-w gap " + format_double(worst_equality));
  if (o.passed) {
    o.detail = "max lhs-rhs " + format_double(worst_gap) + ", constant-w gap " + format_double(worst_equality);
  }
  return o;
}

Outcome minimal_kernel_monotonicity() {
  Outcome o;
  const auto g = validate(generators::random_connected({.n = 10, .seed = 31}));
  // breadth-first order from vertex 0 gives connected nested levels
  std::vector<VertexId> order{0};
  std::vector<bool> seen(g.size(), false);
  seen[0] = true;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& e : g.neighbors(order[i])) {
      if (!seen[e.target]) {
        seen[e.target] = true;
        order.push_back(e.target);
      }
    }
  }
  std::vector<std::vector<VertexId>> levels;
  for (std::size_t size : {4u, 7u, 10u}) {
    std::vector<VertexId> level(order.begin(), order.begin() + size);
    std::sort(level.begin(), level.end());
    levels.push_back(level);
  }
  const Exhaustion ex(g, levels);
  double worst = 0.0;
  for (double t : {0.05, 0.5, 2.0}) {
    const auto full = heat_semigroup(g, t);
    for (VertexId x : levels[0]) {
      for (VertexId y : levels[0]) {
        const auto seq = minimal_heat_kernel(g, ex, t, x, y);
        if (!seq.nondecreasing) o.fail("not monotone at t=" + format_double(t));
        worst = std::max(worst, std::abs(seq.values.back() - full(x, y)));
      }
    }
  }
  if (worst > 1e-10) o.fail("final level differs by " + format_double(worst));
  if (o.passed) o.detail = "max |p_K3 - p| = " + format_double(worst);
  return o;
}

std::map<std::string, std::string> csv_contents(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    files[e.path().filename().string()] = s.str();
  }
  return files;
}

Outcome determinism(const fs::path& root) {
  Outcome o;
  const fs::path a = root / "run_a", b = root / "run_b";
  fs::remove_all(a);
  fs::remove_all(b);
  const auto sa = run_suite(kAcceptance, {.out_dir = a, .threads = 4});
  const auto sb = run_suite(kAcceptance, {.out_dir = b, .threads = 4});
  if (sa.status != ExitStatus::Pass || sb.status != ExitStatus::Pass) o.fail("suite did not pass");
  const auto ca = csv_contents(a), cb = csv_contents(b);
  if (ca.size() != cb.size() || ca.size() < 2) o.fail("artifact sets differ");
  for (const auto& [name, body] : ca) {
    auto it = cb.find(name);
    if (it == cb.end() || it->second != body) o.fail(name + " differs");
  }
  if (o.passed) o.detail = std::to_string(ca.size()) + " CSVs byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path out_root = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "heatlab_acceptance";
  fs::create_directories(out_root);

  struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "graph semiclassical limit", 5.0, [&] { return run_configs("graph_limit_", out_root / "c1"); }},
      {2, "heat kernel axioms", 1.0, [&] { return run_configs("axioms_", out_root / "c2"); }},
      {3, "Golden-Thompson sweep", 2.0, golden_thompson_sweep},
      {4, "Feynman-Kac bridge estimate", 30.0, [&] { return run_configs("fk_", out_root / "c4"); }},
      {5, "not feeling the boundary", 20.0, [&] { return run_configs("pnfb_", out_root / "c5"); }},
      {6, "torus semiclassical limit", 60.0, [&] { return run_configs("torus_", out_root / "c6"); }},
      {7, "Ricci summability verdicts", 1.0, [&] { return run_configs("admissibility_", out_root / "c7"); }},
      {8, "minimal kernel monotonicity", 1.0, minimal_kernel_monotonicity},
      {9, "determinism", 120.0, [&] { return determinism(out_root); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.fail(e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_seconds) o.fail("over time budget " + format_double(c.budget_seconds) + " s");
    if (!o.passed) ++failures;
    std::printf("%s criterion %d: %s (%.2f s) %s\n", o.passed ? "PASS" : "FAIL", c.id, c.title, secs,
                o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
