#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "heatlab/potential_class.hpp"

namespace heatlab {

enum class ExperimentKind { GraphLimit, TorusLimit, FkCrosscheck, Pnfb, Axioms, Admissibility };

/// Parsed experiment document. `document` keeps the kind-specific fields;
/// relative paths inside it resolve against `base_dir`.
struct ExperimentConfig {
  std::string name;
  ExperimentKind kind = ExperimentKind::GraphLimit;
  std::uint64_t seed = 1;
  std::string output;
  std::filesystem::path base_dir;
  std::string document;
};

/// Throws ConfigError (unparseable, unknown kind, missing field) or InputError.
ExperimentConfig load_experiment(const std::filesystem::path& path);
ExperimentConfig parse_experiment(const std::string& document, const std::filesystem::path& base_dir);

enum class ExitStatus : int { Pass = 0, AssertionFailed = 1, InputError = 2 };

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct RunResult {
  std::string name;
  ExitStatus status = ExitStatus::Pass;
  std::vector<Check> checks;
  std::vector<std::filesystem::path> artifacts;
  /// First failing check, or the error message for input/config failures.
  std::string message;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::size_t threads = 1;
  /// Replaces the config's seed when set.
  bool override_seed = false;
  std::uint64_t seed = 0;
};

/// Runs one experiment and writes <output>.csv and <output>.json into out_dir.
/// Never throws for config, input, or assertion failures; they set `status`.
RunResult run(const ExperimentConfig& config, const RunOptions& options = {});
RunResult run_file(const std::filesystem::path& path, const RunOptions& options = {});

struct SuiteSummary {
  std::vector<RunResult> results;
  std::size_t passed = 0;
  std::size_t failed = 0;
  ExitStatus status = ExitStatus::Pass;
};

/// Runs every *.json config in `directory` (sorted by file name) in parallel
/// across configs; one failure never aborts the others. Writes summary.csv.
SuiteSummary run_suite(const std::filesystem::path& directory, const RunOptions& options = {});

/// Profile document: {"m", "A", "rule": "zero" | "quadratic:a" | "linear:a" |
/// "power:p", "k_max"} or {"m", "A", "table": [c_2, c_3, ...]}.
/// A nonzero k_max_override replaces the document's k_max. Throws ConfigError.
GrowthProfile parse_growth_profile(const std::string& document, std::size_t k_max_override = 0);

/// Columns k, partial_sum, doubling_partial_sum.
std::string admissibility_csv(const AdmissibilityReport& report);

}  // namespace heatlab
