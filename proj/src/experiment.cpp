#include "heatlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "heatlab/errors.hpp"
#include "heatlab/graph.hpp"
#include "heatlab/graph_io.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/parallel.hpp"
#include "heatlab/path_sampler.hpp"
#include "heatlab/potential_class.hpp"
#include "heatlab/report.hpp"
#include "heatlab/rng.hpp"
#include "heatlab/schrodinger.hpp"
#include "heatlab/torus.hpp"

namespace heatlab {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

ExperimentKind parse_kind(const std::string& kind) {
  if (kind == "graph-limit") return ExperimentKind::GraphLimit;
  if (kind == "torus-limit") return ExperimentKind::TorusLimit;
  if (kind == "fk-crosscheck") return ExperimentKind::FkCrosscheck;
  if (kind == "pnfb") return ExperimentKind::Pnfb;
  if (kind == "axioms") return ExperimentKind::Axioms;
  if (kind == "admissibility") return ExperimentKind::Admissibility;
  throw Error(ErrorCode::ConfigError, "unknown experiment kind '" + kind + "'");
}

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::GraphLimit: return "graph-limit";
    case ExperimentKind::TorusLimit: return "torus-limit";
    case ExperimentKind::FkCrosscheck: return "fk-crosscheck";
    case ExperimentKind::Pnfb: return "pnfb";
    case ExperimentKind::Axioms: return "axioms";
    case ExperimentKind::Admissibility: return "admissibility";
  }
  return "unknown";
}

const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorCode::ConfigError, std::string("missing field '") + key + "'");
  return doc.at(key);
}

double tolerance(const json& doc, const char* key, double fallback) {
  if (!doc.contains("tolerances") || !doc["tolerances"].contains(key)) return fallback;
  const double v = doc["tolerances"][key].get<double>();
  if (!(v > 0.0)) throw Error(ErrorCode::ConfigError, std::string("tolerance '") + key + "' must be positive");
  return v;
}

WeightedGraph load_graph(const json& node, const fs::path& base) {
  if (node.is_string()) return validate(read_graph_file(base / node.get<std::string>()));
  const std::string gen = require(node, "generator").get<std::string>();
  RawGraph raw;
  if (gen == "path") {
    raw = generators::path(require(node, "n").get<std::size_t>(), node.value("b", 1.0), node.value("mu", 1.0));
  } else if (gen == "complete") {
    raw = generators::complete(require(node, "n").get<std::size_t>(), node.value("b", 1.0), node.value("mu", 1.0));
  } else if (gen == "two-vertex") {
    raw = generators::two_vertex(node.value("b", 1.0), node.value("mu1", 1.0), node.value("mu2", 1.0));
  } else if (gen == "random-connected") {
    generators::RandomGraphSpec spec;
    spec.n = require(node, "n").get<std::size_t>();
    spec.seed = node.value("seed", std::uint64_t{1});
    spec.extra_edge_probability = node.value("extra_edge_probability", spec.extra_edge_probability);
    if (node.contains("b_range")) {
      spec.b_min = node["b_range"][0].get<double>();
      spec.b_max = node["b_range"][1].get<double>();
    }
    if (node.contains("mu_range")) {
      spec.mu_min = node["mu_range"][0].get<double>();
      spec.mu_max = node["mu_range"][1].get<double>();
    }
    raw = generators::random_connected(spec);
  } else {
    throw Error(ErrorCode::ConfigError, "unknown graph generator '" + gen + "'");
  }
  return validate(raw);
}

Potential load_potential(const json& doc, const WeightedGraph& g) {
  if (!doc.contains("potential")) return Potential::constant(g.size(), 0.0);
  const json& node = doc["potential"];
  if (node.is_array()) {
    auto values = node.get<std::vector<double>>();
    if (values.size() != g.size()) {
      throw Error(ErrorCode::ConfigError, "potential lists " + std::to_string(values.size()) +
                                              " values for " + std::to_string(g.size()) + " vertices");
    }
    return Potential(std::move(values));
  }
  if (node.contains("constant")) return Potential::constant(g.size(), node["constant"].get<double>());
  if (node.contains("uniform")) {
    const double lo = node["uniform"][0].get<double>();
    const double hi = node["uniform"][1].get<double>();
    std::uint64_t state = node.value("seed", std::uint64_t{1});
    std::vector<double> values(g.size());
    for (double& v : values) v = lo + (hi - lo) * static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    return Potential(std::move(values));
  }
  if (node.contains("by_label")) {
    std::vector<double> values(g.size(), 0.0);
    for (const auto& [label, v] : node["by_label"].items()) values[g.find(label)] = v.get<double>();
    return Potential(std::move(values));
  }
  throw Error(ErrorCode::ConfigError, "unrecognized potential specification");
}

std::vector<double> load_grid(const json& doc) {
  if (!doc.contains("t_grid")) return geometric_grid();
  const json& node = doc["t_grid"];
  std::vector<double> grid;
  if (node.is_array()) {
    grid = node.get<std::vector<double>>();
  } else {
    grid = geometric_grid(node.value("t0", 1.0), node.value("factor", 0.5), node.value("count", std::size_t{20}));
  }
  if (grid.empty()) throw Error(ErrorCode::ConfigError, "t_grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] < grid[i - 1]))) {
      throw Error(ErrorCode::ConfigError, "t_grid must be positive and strictly decreasing");
    }
  }
  return grid;
}

std::size_t grid_index(const std::vector<double>& grid, const json& doc) {
  if (!doc.contains("tolerances") || !doc["tolerances"].contains("check_t")) return grid.size() - 1;
  const double t = doc["tolerances"]["check_t"].get<double>();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - t) <= 1e-12 * t) return i;
  throw Error(ErrorCode::ConfigError, "check_t = " + format_double(t) + " is not a grid point");
}

std::string fmt(double v) { return format_double(v); }

Check make_check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

json checks_json(const std::vector<Check>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return arr;
}

json safe_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct Outcome {
  std::vector<Check> checks;
  std::string csv;
  json report;
};

Outcome run_graph_limit(const json& doc, const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto g = load_graph(require(doc, "graph"), cfg.base_dir);
  const auto w = load_potential(doc, g);
  const auto grid = load_grid(doc);
  const double rel_tol = tolerance(doc, "relative_error", 0.01);
  const std::size_t at = grid_index(grid, doc);
  const auto tail = static_cast<std::size_t>(tolerance(doc, "monotone_tail", 5));
  const double gt_tol = tolerance(doc, "golden_thompson", 1e-10);

  const auto report = semiclassical_scan(g, w, AsymptoticControlPair::for_graph(g), grid,
                                         {.relative_tolerance = rel_tol, .threads = opts.threads});
  Outcome out;
  const double rel = report.abs_errors[at] / std::abs(report.target);
  out.checks.push_back(make_check("relative_error", rel <= rel_tol,
                                  "|scaled - target| / target = " + fmt(rel) + " at t = " + fmt(grid[at]) +
                                      " (limit " + fmt(rel_tol) + ")"));
  out.checks.push_back(make_check("error_tail_nonincreasing", report.errors_nonincreasing_tail(tail),
                                  "last " + std::to_string(tail) + " errors"));
  out.checks.push_back(make_check("golden_thompson", report.max_gt_violation() <= gt_tol,
                                  "max(trace - rhs) = " + fmt(report.max_gt_violation())));
  std::ostringstream csv;
  write_csv(csv, report);
  out.csv = csv.str();
  out.report = json::parse(to_json(report));
  return out;
}

Outcome run_torus_limit(const json& doc, const ExperimentConfig&, const RunOptions& opts) {
  const json& t = require(doc, "torus");
  const auto dim = require(t, "dim").get<std::size_t>();
  auto lengths = t.contains("lengths") ? t["lengths"].get<std::vector<double>>()
                                       : std::vector<double>(dim, 2.0 * std::numbers::pi);
  const int truncation = t.value("truncation", dim == 1 ? 64 : 24);
  const std::string potential_spec = t.value("potential", std::string("zero"));
  TorusModel model(dim, std::move(lengths), truncation, TorusPotential::parse(potential_spec, dim));
  const auto grid = load_grid(doc);
  const std::size_t at = grid_index(grid, doc);
  const double rel_tol = tolerance(doc, "relative_error", 0.01);

  TorusScanOptions so;
  so.relative_tolerance = rel_tol;
  so.threads = opts.threads;
  if (doc.contains("scaling")) {
    const std::string s = doc["scaling"].get<std::string>();
    if (s == "4pi") {
      so.scaling_base = 4.0 * std::numbers::pi;
    } else if (s == "2pi") {
      so.scaling_base = 2.0 * std::numbers::pi;
    } else {
      throw Error(ErrorCode::ConfigError, "scaling must be \"4pi\" or \"2pi\"");
    }
  }
  const auto scan = torus_semiclassical_scan(model, grid, so);
  Outcome out;
  const double rel = scan.report.abs_errors[at] / std::abs(scan.report.target);
  out.checks.push_back(make_check("relative_error", rel <= rel_tol,
                                  "|scaled - target| / target = " + fmt(rel) + " at t = " + fmt(grid[at]) +
                                      " (limit " + fmt(rel_tol) + ")"));
  if (doc.contains("expected_target")) {
    const double expected = doc["expected_target"].get<double>();
    const double target_tol = tolerance(doc, "target", 1e-4);
    const double dev = std::abs(scan.report.target - expected) / std::abs(expected);
    out.checks.push_back(make_check("target", dev <= target_tol,
                                    "target " + fmt(scan.report.target) + " vs " + fmt(expected)));
  }
  out.checks.push_back(make_check("golden_thompson", scan.report.max_gt_violation() <= 1e-10,
                                  "max(trace - rhs) = " + fmt(scan.report.max_gt_violation())));
  std::ostringstream csv;
  write_csv(csv, scan.report);
  out.csv = csv.str();
  out.report = json::parse(to_json(scan.report));
  json changes = json::array();
  for (double c : scan.truncation_changes) changes.push_back(safe_number(c));
  out.report["truncation_changes"] = changes;
  out.report["truncation"] = truncation;
  out.report["potential"] = potential_spec;
  return out;
}

Outcome run_fk(const json& doc, const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto g = load_graph(require(doc, "graph"), cfg.base_dir);
  const auto w = load_potential(doc, g);
  const double t = require(doc, "t").get<double>();
  const auto samples = require(doc, "samples").get<std::size_t>();
  const double sigma = tolerance(doc, "sigma", 3.0);
  const double max_rel_se = tolerance(doc, "max_relative_se", 0.01);

  const auto est = feynman_kac_trace_mc(g, w, t, samples, cfg.seed, {.threads = opts.threads});
  const double exact = trace_semigroup(g, w, t);
  Outcome out;
  const double dev = std::abs(est.mean - exact);
  out.checks.push_back(make_check("within_sigma", dev <= sigma * est.std_error,
                                  "|mc - exact| = " + fmt(dev) + ", " + fmt(sigma) + " SE = " +
                                      fmt(sigma * est.std_error)));
  out.checks.push_back(make_check("relative_standard_error", est.std_error <= max_rel_se * exact,
                                  "SE / exact = " + fmt(est.std_error / exact)));
  out.csv = "quantity,mean,std_error,n_samples,seed,reference\nfk_trace," + fmt(est.mean) + "," +
            fmt(est.std_error) + "," + std::to_string(est.n_samples) + "," + std::to_string(est.seed) + "," +
            fmt(exact) + "\n";
  out.report = {{"estimate", est.mean}, {"std_error", est.std_error}, {"n_samples", est.n_samples},
                {"exact_trace", exact}, {"t", t}};
  return out;
}

Outcome run_pnfb(const json& doc, const ExperimentConfig& cfg, const RunOptions& opts) {
  const auto g = load_graph(require(doc, "graph"), cfg.base_dir);
  const VertexId x = g.find(require(doc, "start").get<std::string>());
  std::vector<VertexId> subset;
  for (const auto& label : require(doc, "subset")) subset.push_back(g.find(label.get<std::string>()));
  const auto times = require(doc, "t_values").get<std::vector<double>>();
  const auto samples = require(doc, "samples").get<std::size_t>();
  const double sigma = tolerance(doc, "sigma", 3.0);
  const double final_min = tolerance(doc, "final_min", 0.99);
  const bool crn = doc.value("common_random_numbers", false);
  if (times.empty()) throw Error(ErrorCode::ConfigError, "t_values is empty");

  Outcome out;
  std::ostringstream csv;
  csv << "t,mean,std_error,n_samples,seed,exact_ratio,no_jump_bound\n";
  json rows = json::array();
  std::vector<McEstimate> estimates;
  bool bound_ok = true, exact_ok = true;
  std::string bound_detail, exact_detail;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const auto est = pnfb_probability(g, x, subset, t, samples, cfg.seed, {.threads = opts.threads}, crn ? 0 : i);
    const double exact = pnfb_exact_ratio(g, x, subset, t);
    const double bound = no_jump_lower_bound(g, x, t);
    estimates.push_back(est);
    // resolution floor of an n-sample proportion
    const double resolution = 1.0 / static_cast<double>(est.n_samples);
    if (est.mean < bound - sigma * est.std_error - resolution) {
      bound_ok = false;
      bound_detail += " t=" + fmt(t);
    }
    if (std::abs(est.mean - exact) > sigma * est.std_error + resolution) {
      exact_ok = false;
      exact_detail += " t=" + fmt(t);
    }
    csv << fmt(t) << ',' << fmt(est.mean) << ',' << fmt(est.std_error) << ',' << est.n_samples << ','
        << est.seed << ',' << fmt(exact) << ',' << fmt(bound) << '\n';
    rows.push_back({{"t", t}, {"mean", est.mean}, {"std_error", est.std_error}, {"exact_ratio", exact},
                    {"no_jump_bound", bound}});
  }
  bool monotone = true;
  for (std::size_t i = 1; i < estimates.size(); ++i)
    if (estimates[i].mean < estimates[i - 1].mean) monotone = false;
  out.checks.push_back(make_check("nondecreasing", monotone, "estimates along decreasing t"));
  out.checks.push_back(make_check("final_estimate", estimates.back().mean >= final_min,
                                  "final = " + fmt(estimates.back().mean) + " (min " + fmt(final_min) + ")"));
  out.checks.push_back(make_check("no_jump_bound", bound_ok, bound_ok ? "all t" : "violated at" + bound_detail));
  out.checks.push_back(make_check("exact_ratio", exact_ok, exact_ok ? "all t" : "outside band at" + exact_detail));
  out.csv = csv.str();
  out.report = {{"rows", rows}};
  return out;
}

Outcome run_axioms(const json& doc, const ExperimentConfig& cfg, const RunOptions&) {
  const auto g = load_graph(require(doc, "graph"), cfg.base_dir);
  const double s = doc.value("s", 0.5);
  const double t = doc.value("t", 0.5);
  const double ck_tol = tolerance(doc, "chapman_kolmogorov", 1e-10);
  const double sym_tol = tolerance(doc, "symmetry", 1e-12);
  const double mass_tol = tolerance(doc, "mass", 1e-12);
  const double bound_tol = tolerance(doc, "pointwise_bound", 1e-12);
  const auto ps = heat_semigroup(g, s);
  const auto pt = heat_semigroup(g, t);
  const auto pst = heat_semigroup(g, s + t);
  const auto r = verify_axioms(ps, pt, pst);
  const double presym = std::max({ps.presymmetrization_defect, pt.presymmetrization_defect,
                                  pst.presymmetrization_defect});

  Outcome out;
  out.checks.push_back(make_check("chapman_kolmogorov", r.chapman_kolmogorov_defect <= ck_tol,
                                  fmt(r.chapman_kolmogorov_defect)));
  out.checks.push_back(make_check("symmetry", std::max(r.symmetry_defect, presym) <= sym_tol,
                                  "stored " + fmt(r.symmetry_defect) + ", before symmetrization " + fmt(presym)));
  out.checks.push_back(make_check("mass", r.mass_excess <= mass_tol && r.min_mass >= 1.0 - mass_tol,
                                  "mass in [" + fmt(r.min_mass) + ", " + fmt(1.0 + r.mass_excess) + "]"));
  out.checks.push_back(make_check("pointwise_bound", r.pointwise_bound_excess <= bound_tol,
                                  "max p - 1/mu = " + fmt(r.pointwise_bound_excess)));
  out.checks.push_back(make_check("positivity", r.min_entry > 0.0, "min p = " + fmt(r.min_entry)));
  std::ostringstream csv;
  csv << "metric,value,tolerance\n"
      << "chapman_kolmogorov," << fmt(r.chapman_kolmogorov_defect) << ',' << fmt(ck_tol) << '\n'
      << "symmetry," << fmt(r.symmetry_defect) << ',' << fmt(sym_tol) << '\n'
      << "presymmetrization," << fmt(presym) << ',' << fmt(sym_tol) << '\n'
      << "mass_excess," << fmt(r.mass_excess) << ',' << fmt(mass_tol) << '\n'
      << "min_mass," << fmt(r.min_mass) << ',' << fmt(mass_tol) << '\n'
      << "pointwise_bound_excess," << fmt(r.pointwise_bound_excess) << ',' << fmt(bound_tol) << '\n'
      << "min_entry," << fmt(r.min_entry) << ",0\n";
  out.csv = csv.str();
  out.report = {{"chapman_kolmogorov_defect", r.chapman_kolmogorov_defect},
                {"symmetry_defect", r.symmetry_defect},
                {"presymmetrization_defect", presym},
                {"mass_excess", r.mass_excess},
                {"min_mass", r.min_mass},
                {"pointwise_bound_excess", r.pointwise_bound_excess},
                {"min_entry", r.min_entry},
                {"s", s},
                {"t", t}};
  return out;
}

GrowthProfile profile_from_json(const json& p, std::size_t k_max_override = 0) {
  const auto m = require(p, "m").get<std::size_t>();
  const double a = p.value("A", 0.0);
  std::size_t k_max = k_max_override ? k_max_override : p.value("k_max", std::size_t{200});
  if (p.contains("table")) return GrowthProfile::table(m, a, p["table"].get<std::vector<double>>());
  const std::string rule = require(p, "rule").get<std::string>();
  const auto colon = rule.find(':');
  const std::string head = rule.substr(0, colon);
  double arg = 0.0;
  if (colon != std::string::npos) {
    try {
      arg = std::stod(rule.substr(colon + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "bad profile rule '" + rule + "'");
    }
  }
  if (head == "zero") return GrowthProfile::zero_potential(m, a, k_max);
  if (head == "quadratic") return GrowthProfile::quadratic(m, a, arg, k_max);
  if (head == "linear") return GrowthProfile::linear(m, a, arg, k_max);
  if (head == "power") return GrowthProfile::power(m, a, arg, k_max);
  throw Error(ErrorCode::ConfigError, "unknown profile rule '" + rule + "'");
}

json admissibility_json(const AdmissibilityReport& r);


Outcome run_admissibility(const json& doc, const ExperimentConfig&, const RunOptions&) {
  const json& p = require(doc, "profile");
  const auto profile = profile_from_json(p);
  const auto report = ricci_admissibility(profile);
  Outcome out;
  if (doc.contains("expect")) {
    const std::string expect = doc["expect"].get<std::string>();
    out.checks.push_back(make_check("verdict", to_string(report.series.verdict) == expect,
                                    to_string(report.series.verdict) + " (expected " + expect + ")"));
  }
  if (!p.contains("table")) {
    const auto doubled = ricci_admissibility(profile_from_json(p, 2 * profile.k_max));
    out.checks.push_back(make_check("stable_under_doubling", doubled.series.verdict == report.series.verdict,
                                    to_string(report.series.verdict) + " at k_max, " +
                                        to_string(doubled.series.verdict) + " at 2 k_max"));
  }
  out.csv = admissibility_csv(report);
  out.report = admissibility_json(report);
  return out;
}

json admissibility_json(const AdmissibilityReport& r) {
  auto one = [](const SeriesVerdict& v) {
    return json{{"verdict", to_string(v.verdict)},
                {"reason", v.reason},
                {"window_ratio", safe_number(v.window_ratio)},
                {"window_slope", safe_number(v.window_slope)},
                {"tail_bound", safe_number(v.tail_bound)},
                {"final_partial_sum", safe_number(v.partial_sums.empty() ? 0.0 : v.partial_sums.back())}};
  };
  return {{"series", one(r.series)}, {"doubling", one(r.doubling)}};
}

}  // namespace

GrowthProfile parse_growth_profile(const std::string& document, std::size_t k_max_override) {
  try {
    return profile_from_json(json::parse(document), k_max_override);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("bad profile document: ") + e.what());
  }
}

std::string admissibility_csv(const AdmissibilityReport& r) {
  std::ostringstream csv;
  csv << "k,partial_sum,doubling_partial_sum\n";
  for (std::size_t i = 0; i < r.series.partial_sums.size(); ++i) {
    csv << (i + 2) << ',' << fmt(r.series.partial_sums[i]) << ',' << fmt(r.doubling.partial_sums[i]) << '\n';
  }
  return csv.str();
}

ExperimentConfig parse_experiment(const std::string& document, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, "config must be an object");
  ExperimentConfig cfg;
  try {
    cfg.kind = parse_kind(require(doc, "kind").get<std::string>());
    cfg.name = doc.value("name", kind_name(cfg.kind));
    cfg.seed = doc.value("seed", std::uint64_t{1});
    cfg.output = doc.value("output", cfg.name);
    if (doc.contains("tolerances")) {
      for (const auto& [key, v] : doc["tolerances"].items()) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) {
          throw Error(ErrorCode::ConfigError, "tolerance '" + key + "' must be a positive number");
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, e.what());
  }
  cfg.base_dir = base_dir;
  cfg.document = document;
  return cfg;
}

ExperimentConfig load_experiment(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InputError, "cannot open config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment(buffer.str(), path.parent_path());
}

RunResult run(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  result.name = config.name;
  ExperimentConfig cfg = config;
  if (options.override_seed) cfg.seed = options.seed;
  Outcome outcome;
  try {
    const json doc = json::parse(cfg.document);
    switch (cfg.kind) {
      case ExperimentKind::GraphLimit: outcome = run_graph_limit(doc, cfg, options); break;
      case ExperimentKind::TorusLimit: outcome = run_torus_limit(doc, cfg, options); break;
      case ExperimentKind::FkCrosscheck: outcome = run_fk(doc, cfg, options); break;
      case ExperimentKind::Pnfb: outcome = run_pnfb(doc, cfg, options); break;
      case ExperimentKind::Axioms: outcome = run_axioms(doc, cfg, options); break;
      case ExperimentKind::Admissibility: outcome = run_admissibility(doc, cfg, options); break;
    }
  } catch (const json::exception& e) {
    result.status = ExitStatus::InputError;
    result.message = std::string("ConfigError: ") + e.what();
    return result;
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::ConfigError:
      case ErrorCode::InputError:
      case ErrorCode::AsymmetricWeights:
      case ErrorCode::NegativeWeight:
      case ErrorCode::SelfLoop:
      case ErrorCode::NonpositiveMeasure:
      case ErrorCode::NonsummableWeights:
      case ErrorCode::UnknownVertex:
      case ErrorCode::InvalidArgument:
      case ErrorCode::NonpositiveTime:
      case ErrorCode::EmptyGrid:
      case ErrorCode::VertexNotInK:
      case ErrorCode::DisconnectedGraph:
        result.status = ExitStatus::InputError;
        result.message = e.code() == ErrorCode::ConfigError ? e.what() : std::string("ConfigError: ") + e.what();
        break;
      default:
        result.status = ExitStatus::AssertionFailed;
        result.message = e.what();
    }
    return result;
  }

  result.checks = std::move(outcome.checks);
  for (const auto& c : result.checks) {
    if (!c.passed) {
      result.status = ExitStatus::AssertionFailed;
      result.message = "AssertionFailed: " + c.name + ": " + c.detail;
      break;
    }
  }

  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  const fs::path csv_path = options.out_dir / (cfg.output + ".csv");
  const fs::path json_path = options.out_dir / (cfg.output + ".json");
  std::ofstream csv(csv_path, std::ios::binary);
  csv << outcome.csv;
  json doc;
  doc["name"] = cfg.name;
  doc["kind"] = kind_name(cfg.kind);
  doc["seed"] = cfg.seed;
  doc["status"] = static_cast<int>(result.status);
  doc["checks"] = checks_json(result.checks);
  doc["report"] = outcome.report;
  std::ofstream js(json_path, std::ios::binary);
  js << doc.dump(2) << '\n';
  if (!csv || !js) {
    result.status = ExitStatus::InputError;
    result.message = "InputError: cannot write artifacts to " + options.out_dir.string();
    return result;
  }
  result.artifacts = {csv_path, json_path};
  return result;
}

RunResult run_file(const fs::path& path, const RunOptions& options) {
  try {
    return run(load_experiment(path), options);
  } catch (const Error& e) {
    RunResult r;
    r.name = path.stem().string();
    r.status = ExitStatus::InputError;
    r.message = e.what();
    return r;
  }
}

SuiteSummary run_suite(const fs::path& directory, const RunOptions& options) {
  SuiteSummary summary;
  std::vector<fs::path> configs;
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    RunResult r;
    r.name = directory.string();
    r.status = ExitStatus::InputError;
    r.message = "InputError: not a directory: " + directory.string();
    summary.results.push_back(r);
    summary.failed = 1;
    summary.status = ExitStatus::InputError;
    return summary;
  }
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());

  summary.results.resize(configs.size());
  RunOptions inner = options;
  inner.threads = 1;
  parallel_for(configs.size(), options.threads,
               [&](std::size_t i) { summary.results[i] = run_file(configs[i], inner); });

  std::ostringstream table;
  table << "name,status,message\n";
  for (const auto& r : summary.results) {
    if (r.status == ExitStatus::Pass) {
      ++summary.passed;
    } else {
      ++summary.failed;
      summary.status = std::max(summary.status, r.status);
    }
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    table << r.name << ',' << static_cast<int>(r.status) << ',' << msg << '\n';
  }
  fs::create_directories(options.out_dir, ec);
  std::ofstream(options.out_dir / "summary.csv", std::ios::binary) << table.str();
  return summary;
}

}  // namespace heatlab
