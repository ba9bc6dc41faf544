#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heatlab/errors.hpp"
#include "heatlab/experiment.hpp"
#include "heatlab/graph.hpp"
#include "heatlab/graph_io.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/path_sampler.hpp"
#include "heatlab/potential_class.hpp"
#include "heatlab/report.hpp"
#include "heatlab/schrodinger.hpp"

namespace fs = std::filesystem;
using namespace heatlab;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::size_t threads = 1;
  std::string out = ".";
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

int print_result(const RunResult& r) {
  for (const auto& c : r.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << r.name << ": " << c.name << " (" << c.detail << ")\n";
  }
  if (r.status != ExitStatus::Pass) std::cerr << r.name << ": " << r.message << '\n';
  return static_cast<int>(r.status);
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ZeroKernel:
    case ErrorCode::NTruncationExceeded:
    case ErrorCode::EigensolverNoConvergence:
    case ErrorCode::TruncationNotConverged:
    case ErrorCode::AssertionFailed:
      return 1;
    default:
      return 2;
  }
}

RunOptions run_options(const Globals& g) {
  RunOptions o;
  o.out_dir = g.out;
  o.threads = g.threads;
  o.override_seed = g.seed_given;
  o.seed = g.seed;
  return o;
}

int cmd_verify_kernel(const std::string& graph_path, double s, double t, const std::string& dump) {
  const auto g = validate(read_graph_file(graph_path));
  const auto ps = heat_semigroup(g, s);
  const auto pt = heat_semigroup(g, t);
  const auto pst = heat_semigroup(g, s + t);
  const auto r = verify_axioms(ps, pt, pst);
  std::cout << "metric,value\n"
            << "chapman_kolmogorov," << format_double(r.chapman_kolmogorov_defect) << '\n'
            << "symmetry," << format_double(r.symmetry_defect) << '\n'
            << "mass_excess," << format_double(r.mass_excess) << '\n'
            << "min_mass," << format_double(r.min_mass) << '\n'
            << "pointwise_bound_excess," << format_double(r.pointwise_bound_excess) << '\n'
            << "min_entry," << format_double(r.min_entry) << '\n'
            << "truncation_error_bound," << format_double(pt.truncation_error_bound) << '\n';
  if (!dump.empty()) {
    std::ofstream out(dump, std::ios::binary);
    if (fs::path(dump).extension() == ".csv") {
      write_kernel_csv(out, pt);
    } else {
      write_kernel_binary(out, pt);
    }
    if (!out) throw Error(ErrorCode::InputError, "cannot write " + dump);
  }
  const bool ok = r.chapman_kolmogorov_defect <= 1e-10 && r.passes(1e-12);
  return ok ? 0 : 1;
}

int cmd_sample_paths(const Globals& gl, const std::string& graph_path, double t, std::size_t samples,
                     const std::string& mode, const std::string& start, const std::string& end,
                     const std::string& subset, const std::string& potential) {
  const auto g = validate(read_graph_file(graph_path));
  const VertexId x = start.empty() ? 0 : g.find(start);
  const VertexId y = end.empty() ? x : g.find(end);
  const SamplerOptions so{.threads = gl.threads};
  McEstimate est;
  double reference = std::numeric_limits<double>::quiet_NaN();
  std::string quantity;
  if (mode == "free") {
    quantity = "free_jump_count";
    est = monte_carlo_mean(samples, gl.seed, 0, gl.threads, [&](Rng& rng) {
      return static_cast<double>(sample_free_path(g, x, t, rng).jumps.size());
    });
  } else if (mode == "bridge") {
    const BridgeSampler sampler(g, y, t);
    quantity = "bridge_jump_count";
    est = monte_carlo_mean(samples, gl.seed, 0, gl.threads, [&](Rng& rng) {
      return static_cast<double>(sampler.sample(x, rng).jumps.size());
    });
  } else if (mode == "fk-trace") {
    std::vector<double> values;
    for (const auto& v : split_list(potential)) values.push_back(std::stod(v));
    const Potential w = values.empty() ? Potential::constant(g.size(), 0.0) : Potential(values);
    if (w.size() != g.size()) throw Error(ErrorCode::InputError, "potential length does not match the graph");
    quantity = "fk_trace";
    est = feynman_kac_trace_mc(g, w, t, samples, gl.seed, so);
    reference = trace_semigroup(g, w, t);
  } else if (mode == "pnfb") {
    std::vector<VertexId> k;
    for (const auto& label : split_list(subset)) k.push_back(g.find(label));
    quantity = "pnfb";
    est = pnfb_probability(g, x, k, t, samples, gl.seed, so);
    reference = pnfb_exact_ratio(g, x, k, t);
  } else {
    throw Error(ErrorCode::InputError, "unknown mode '" + mode + "'");
  }
  std::ostringstream row;
  row << "quantity,mean,std_error,n_samples,seed,reference\n"
      << quantity << ',' << format_double(est.mean) << ',' << format_double(est.std_error) << ','
      << est.n_samples << ',' << est.seed << ',' << (std::isnan(reference) ? std::string() : format_double(reference)) << '\n';
  std::cout << row.str();
  return 0;
}

int cmd_admissibility(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputError, "cannot open profile " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto profile = parse_growth_profile(buffer.str());
  const auto report = ricci_admissibility(profile);
  std::cout << "verdict," << to_string(report.series.verdict) << '\n'
            << "doubling_verdict," << to_string(report.doubling.verdict) << '\n'
            << "reason," << report.series.reason << '\n'
            << admissibility_csv(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heatlab: heat kernels, Schrodinger traces and semiclassical limits"};
  app.require_subcommand(1);
  Globals gl;
  auto* seed_opt = app.add_option("--seed", gl.seed, "master seed (overrides config seeds)");
  app.add_option("--threads", gl.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", gl.out, "output directory");

  std::string config;
  auto* run_cmd = app.add_subcommand("run", "run one experiment config");
  run_cmd->add_option("config", config, "experiment JSON")->required();

  std::string suite_dir;
  auto* suite_cmd = app.add_subcommand("suite", "run every config in a directory");
  suite_cmd->add_option("directory", suite_dir, "config directory")->required();

  std::string graph_path, dump;
  double s = 0.5, t = 0.5;
  auto* verify_cmd = app.add_subcommand("verify-kernel", "check heat kernel axioms on a graph");
  verify_cmd->add_option("--graph", graph_path, "graph file")->required();
  verify_cmd->add_option("--s", s, "first time")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--t", t, "second time")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--dump", dump, "write p(t,.,.) as .csv or binary");

  std::size_t samples = 10000;
  std::string mode = "fk-trace", start, end, subset, potential;
  double sample_t = 1.0;
  auto* sample_cmd = app.add_subcommand("sample-paths", "Monte Carlo path estimates");
  sample_cmd->add_option("--graph", graph_path, "graph file")->required();
  sample_cmd->add_option("--t", sample_t, "horizon")->required();
  sample_cmd->add_option("--samples", samples, "sample count");
  sample_cmd->add_option("--mode", mode, "free | bridge | fk-trace | pnfb")
      ->check(CLI::IsMember({"free", "bridge", "fk-trace", "pnfb"}));
  sample_cmd->add_option("--start", start, "start vertex label");
  sample_cmd->add_option("--end", end, "bridge endpoint label (default: start)");
  sample_cmd->add_option("--subset", subset, "comma-separated labels of K (pnfb)");
  sample_cmd->add_option("--potential", potential, "comma-separated potential values (fk-trace)");

  std::string profile;
  auto* adm_cmd = app.add_subcommand("check-admissibility", "Ricci summability verdict for a growth profile");
  adm_cmd->add_option("profile", profile, "profile JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  gl.seed_given = seed_opt->count() > 0;

  try {
    if (*run_cmd) return print_result(run_file(config, run_options(gl)));
    if (*suite_cmd) {
      const auto summary = run_suite(suite_dir, run_options(gl));
      for (const auto& r : summary.results) print_result(r);
      std::cout << summary.passed << " passed, " << summary.failed << " failed\n";
      return static_cast<int>(summary.status);
    }
    if (*verify_cmd) return cmd_verify_kernel(graph_path, s, t, dump);
    if (*sample_cmd) {
      return cmd_sample_paths(gl, graph_path, sample_t, samples, mode, start, end, subset, potential);
    }
    if (*adm_cmd) return cmd_admissibility(profile);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "InputError: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
