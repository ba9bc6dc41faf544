#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace heatlab {

/// Shortest round-trippable decimal ("%.17g"); locale independent.
std::string format_double(double v);

/// Scaled semiclassical traces Psi(t) tr exp(-t H(w/t)) along a decreasing
/// time grid, against an independently computed limit.
struct ConvergenceReport {
  std::string label;
  std::vector<double> t_grid;
  std::vector<double> scaled_traces;
  double target = 0.0;
  std::vector<double> abs_errors;
  /// Scaled Golden-Thompson right-hand sides, one per grid point.
  std::vector<double> gt_bounds;
  double tolerance = 0.0;
  bool converged = false;

  double final_relative_error() const;
  /// Log-log slopes of consecutive errors; NaN where an error vanishes.
  std::vector<double> empirical_rates() const;
  /// True when the last `count` errors never increase.
  bool errors_nonincreasing_tail(std::size_t count) const;
  /// Largest trace - gt_bound (negative when every bound holds strictly).
  double max_gt_violation() const;
};

/// Columns: t,scaled_trace,target,abs_error,gt_rhs
void write_csv(std::ostream& out, const ConvergenceReport& report);
std::string to_json(const ConvergenceReport& report);

}  // namespace heatlab
