#include "heatlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include <json.hpp>

namespace heatlab {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double ConvergenceReport::final_relative_error() const {
  if (abs_errors.empty()) return std::numeric_limits<double>::quiet_NaN();
  return abs_errors.back() / std::abs(target);
}

std::vector<double> ConvergenceReport::empirical_rates() const {
  std::vector<double> rates;
  for (std::size_t i = 1; i < abs_errors.size(); ++i) {
    const double e0 = abs_errors[i - 1], e1 = abs_errors[i];
    if (e0 > 0 && e1 > 0) {
      rates.push_back(std::log(e1 / e0) / std::log(t_grid[i] / t_grid[i - 1]));
    } else {
      rates.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return rates;
}

bool ConvergenceReport::errors_nonincreasing_tail(std::size_t count) const {
  if (abs_errors.size() < 2) return true;
  const std::size_t start = abs_errors.size() > count ? abs_errors.size() - count : 0;
  for (std::size_t i = start + 1; i < abs_errors.size(); ++i)
    if (abs_errors[i] > abs_errors[i - 1]) return false;
  return true;
}

double ConvergenceReport::max_gt_violation() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gt_bounds.size(); ++i)
    worst = std::max(worst, scaled_traces[i] - gt_bounds[i]);
  return worst;
}

void write_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "t,scaled_trace,target,abs_error,gt_rhs\n";
  for (std::size_t i = 0; i < report.t_grid.size(); ++i) {
    out << format_double(report.t_grid[i]) << ',' << format_double(report.scaled_traces[i]) << ','
        << format_double(report.target) << ',' << format_double(report.abs_errors[i]) << ','
        << format_double(report.gt_bounds[i]) << '\n';
  }
}

std::string to_json(const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  j["label"] = report.label;
  j["t_grid"] = report.t_grid;
  j["scaled_traces"] = report.scaled_traces;
  j["target"] = report.target;
  j["abs_errors"] = report.abs_errors;
  j["gt_bounds"] = report.gt_bounds;
  nlohmann::ordered_json rates = nlohmann::ordered_json::array();
  for (double r : report.empirical_rates()) {
    if (std::isfinite(r)) {
      rates.push_back(r);
    } else {
      rates.push_back(nullptr);
    }
  }
  j["empirical_rates"] = rates;
  j["tolerance"] = report.tolerance;
  j["final_relative_error"] = report.final_relative_error();
  j["verdict"] = report.converged ? "converged" : "not-converged";
  return j.dump(2);
}

}  // namespace heatlab
