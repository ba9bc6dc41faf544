#include "heatlab/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heatlab/errors.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/parallel.hpp"

namespace heatlab {

namespace {

void require_matching(const WeightedGraph& g, const Potential& w) {
  if (w.size() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "potential has " + std::to_string(w.size()) +
                                                " values for " + std::to_string(g.size()) +
                                                " vertices");
  }
}

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
}

// t H + diag(w), i.e. t H(w/t), in symmetric form.
Matrix scaled_operator(const Matrix& sym_generator, const Potential& w, double t) {
  Matrix m = t * sym_generator;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += w(i);
  return m;
}

}  // namespace

Potential::Potential(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::InvalidArgument, "potential is not finite at vertex " + std::to_string(i));
    }
  }
}

Potential Potential::constant(std::size_t n, double c) { return Potential(std::vector<double>(n, c)); }

std::vector<double> Potential::positive_part() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return std::max(v, 0.0); });
  return out;
}

std::vector<double> Potential::negative_part() const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), [](double v) { return std::max(-v, 0.0); });
  return out;
}

double Potential::min() const {
  return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end());
}

double Potential::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Potential Potential::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return Potential(std::move(out));
}

AsymptoticControlPair AsymptoticControlPair::for_graph(const WeightedGraph& g) {
  AsymptoticControlPair pair;
  pair.psi = [](double) { return 1.0; };
  pair.rho2.resize(g.size());
  for (VertexId x = 0; x < g.size(); ++x) pair.rho2[x] = 1.0 / g.mu(x);
  pair.diagonal_limit = pair.rho2;
  // p(t,x,x) <= 1/mu(x) for all t.
  pair.phi_bound = [](double) { return 1.0; };
  return pair;
}

SchrodingerOperator schrodinger_operator(const WeightedGraph& g, const Potential& w) {
  require_matching(g, w);
  SchrodingerOperator op{symmetric_generator(g)};
  for (std::size_t i = 0; i < g.size(); ++i) op.symmetric(i, i) += w(i);
  return op;
}

std::vector<double> schrodinger_spectrum(const WeightedGraph& g, const Potential& w) {
  return symmetric_eigenvalues(schrodinger_operator(g, w).symmetric);
}

double trace_semigroup(const WeightedGraph& g, const Potential& w, double t) {
  require_positive_time(t);
  const auto spectrum = schrodinger_spectrum(g, w);
  return exp_trace(spectrum, t);
}

std::vector<double> geometric_grid(double t0, double factor, std::size_t count) {
  std::vector<double> grid;
  grid.reserve(count);
  double t = t0;
  for (std::size_t k = 0; k < count; ++k) {
    grid.push_back(t);
    t *= factor;
  }
  return grid;
}

ConvergenceReport semiclassical_scan(const WeightedGraph& g, const Potential& w,
                                     const AsymptoticControlPair& pair, std::span<const double> t_grid,
                                     const ScanOptions& options) {
  require_matching(g, w);
  if (t_grid.empty()) throw Error(ErrorCode::EmptyGrid, "semiclassical scan needs at least one t");
  for (double t : t_grid) require_positive_time(t);
  if (pair.diagonal_limit.size() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "control pair diagonal limit has wrong size");
  }

  ConvergenceReport report;
  report.label = g.name();
  report.t_grid.assign(t_grid.begin(), t_grid.end());
  report.tolerance = options.relative_tolerance;

  // target by direct summation
  double target = 0.0;
  for (VertexId x = 0; x < g.size(); ++x) target += std::exp(-w(x)) * pair.diagonal_limit[x] * g.mu(x);
  report.target = target;

  const Matrix sym = symmetric_generator(g);
  const std::size_t n = t_grid.size();
  report.scaled_traces.resize(n);
  report.abs_errors.resize(n);
  report.gt_bounds.resize(n);
  parallel_for(n, options.threads, [&](std::size_t k) {
    const double t = t_grid[k];
    const double psi = pair.psi(t);
    const auto eig = symmetric_eigenvalues(scaled_operator(sym, w, t));
    const double scaled = psi * exp_trace(eig, 1.0);
    const auto kernel = heat_semigroup(g, t, {.require_connected = false});
    double rhs = 0.0;
    for (VertexId x = 0; x < g.size(); ++x) rhs += kernel(x, x) * std::exp(-w(x)) * g.mu(x);
    report.scaled_traces[k] = scaled;
    report.abs_errors[k] = std::abs(scaled - target);
    report.gt_bounds[k] = psi * rhs;
  });
  report.converged = report.abs_errors.back() <= options.relative_tolerance * std::abs(target);
  return report;
}

GoldenThompson golden_thompson_check(const WeightedGraph& g, const Potential& w, double t) {
  require_matching(g, w);
  GoldenThompson out;
  out.lhs = trace_semigroup(g, w, t);
  const auto kernel = heat_semigroup(g, t, {.require_connected = false});
  // Add smallest terms first so the equality case for constant w is tight.
  std::vector<double> terms;
  for (VertexId x = 0; x < g.size(); ++x) terms.push_back(kernel(x, x) * std::exp(-t * w(x)) * g.mu(x));
  std::sort(terms.begin(), terms.end());
  for (double v : terms) out.rhs += v;
  return out;
}

}  // namespace heatlab
