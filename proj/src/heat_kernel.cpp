#include "heatlab/heat_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "heatlab/errors.hpp"

namespace heatlab {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  }
}

// Generator H restricted to `subset` (killed outside), non-symmetric form.
Matrix killed_generator(const WeightedGraph& g, std::span<const VertexId> subset) {
  const std::size_t m = subset.size();
  std::vector<std::size_t> position(g.size(), m);
  for (std::size_t i = 0; i < m; ++i) position.at(subset[i]) = i;
  Matrix h(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const VertexId x = subset[i];
    h(i, i) = weighted_degree(g, x);
    for (const Edge& e : g.neighbors(x)) {
      const std::size_t j = position[e.target];
      if (j != m) h(i, j) = -e.weight / g.mu(x);
    }
  }
  return h;
}

}  // namespace

Matrix uniformized_transition(const Matrix& generator, double rate) {
  const std::size_t n = generator.rows();
  Matrix r = Matrix::identity(n);
  if (rate == 0.0) return r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r(i, j) -= generator(i, j) / rate;
  return r;
}

std::vector<double> poisson_log_pmf(double mean, std::size_t max_n) {
  std::vector<double> out(max_n + 1);
  if (mean == 0.0) {
    std::fill(out.begin(), out.end(), -INFINITY);
    out[0] = 0.0;
    return out;
  }
  const double log_mean = std::log(mean);
  for (std::size_t n = 0; n <= max_n; ++n) {
    const double dn = static_cast<double>(n);
    out[n] = -mean + dn * log_mean - std::lgamma(dn + 1.0);
  }
  return out;
}

UniformizedExponential uniformized_exponential(const Matrix& generator, double t,
                                               const UniformizationOptions& options) {
  require_positive_time(t);
  const std::size_t n = generator.rows();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, generator(i, i));
  double rate = options.rate > 0.0 ? options.rate : max_diag;
  if (rate < max_diag) {
    throw Error(ErrorCode::InvalidArgument, "uniformization rate " + std::to_string(rate) +
                                                " below max weighted degree " +
                                                std::to_string(max_diag));
  }

  UniformizedExponential out;
  out.rate = rate;
  const double mean = rate * t;
  if (mean == 0.0) {
    out.value = Matrix::identity(n);
    out.terms = 1;
    out.tail_bound = 0.0;
    return out;
  }

  const Matrix r = uniformized_transition(generator, rate);
  const double log_mean = std::log(mean);
  auto log_weight = [&](std::size_t k) {
    const double dk = static_cast<double>(k);
    return -mean + dk * log_mean - std::lgamma(dk + 1.0);
  };

  Matrix power = Matrix::identity(n);
  Matrix acc = Matrix::identity(n);
  acc *= std::exp(log_weight(0));
  std::size_t k = 0;
  double tail = 1.0;
  while (true) {
    // Once k + 1 exceeds the mean, successive weights shrink at least by
    // mean / (k + 2), which yields a geometric bound on the remaining mass.
    if (static_cast<double>(k + 2) > mean) {
      const double ratio = mean / static_cast<double>(k + 2);
      tail = std::exp(log_weight(k + 1)) / (1.0 - ratio);
      if (tail <= options.tail_tolerance) break;
    }
    ++k;
    power = power * r;
    const double w = std::exp(log_weight(k));
    if (w > 0.0) {
      auto a = acc.data();
      auto p = power.data();
      for (std::size_t i = 0; i < a.size(); ++i) a[i] += w * p[i];
    }
  }
  out.value = std::move(acc);
  out.terms = k + 1;
  out.tail_bound = tail;
  return out;
}

HeatKernelTable heat_semigroup(const WeightedGraph& g, double t, const UniformizationOptions& options) {
  require_positive_time(t);
  if (options.require_connected && !g.connected()) {
    throw Error(ErrorCode::DisconnectedGraph, "graph '" + g.name() + "' has " +
                                                  std::to_string(g.component_count()) +
                                                  " components; kernel positivity cannot be certified");
  }
  const auto exp_th = uniformized_exponential(generator_matrix(g), t, options);
  const std::size_t n = g.size();

  HeatKernelTable table;
  table.t = t;
  table.mu_ref.assign(g.measure().begin(), g.measure().end());
  table.labels.reserve(n);
  for (VertexId x = 0; x < n; ++x) table.labels.push_back(g.label(x));
  table.graph_hash = g.hash();
  table.uniformization_rate = exp_th.rate;
  table.truncation_error_bound = exp_th.tail_bound;
  table.poisson_terms = exp_th.terms;

  Matrix p(n, n);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) p(x, y) = exp_th.value(x, y) / g.mu(y);
  double defect = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      defect = std::max(defect, std::abs(p(x, y) - p(y, x)));
      const double avg = 0.5 * (p(x, y) + p(y, x));
      p(x, y) = p(y, x) = avg;
    }
  }
  table.presymmetrization_defect = defect;
  table.values = std::move(p);
  return table;
}

Exhaustion::Exhaustion(const WeightedGraph& ambient, std::vector<std::vector<VertexId>> levels)
    : levels_(std::move(levels)) {
  if (levels_.empty()) throw Error(ErrorCode::InvalidArgument, "exhaustion needs at least one level");
  for (auto& level : levels_) {
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
    for (VertexId x : level) {
      if (x >= ambient.size()) {
        throw Error(ErrorCode::UnknownVertex, "exhaustion names vertex index " + std::to_string(x));
      }
    }
  }
  for (std::size_t i = 1; i < levels_.size(); ++i) {
    if (!std::includes(levels_[i].begin(), levels_[i].end(), levels_[i - 1].begin(),
                       levels_[i - 1].end())) {
      throw Error(ErrorCode::InvalidArgument,
                  "exhaustion level " + std::to_string(i + 1) + " does not contain level " +
                      std::to_string(i));
    }
  }
}

bool Exhaustion::contains(std::size_t level, VertexId x) const {
  const auto& l = levels_.at(level);
  return std::binary_search(l.begin(), l.end(), x);
}

Matrix killed_heat_kernel(const WeightedGraph& g, std::span<const VertexId> subset, double t,
                          const UniformizationOptions& options) {
  require_positive_time(t);
  UniformizationOptions opts = options;
  // The killed generator's diagonal is bounded by the ambient max degree.
  if (opts.rate == 0.0) opts.rate = max_weighted_degree(g);
  const auto e = uniformized_exponential(killed_generator(g, subset), t, opts);
  const std::size_t m = subset.size();
  Matrix p(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) p(i, j) = e.value(i, j) / g.mu(subset[j]);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const double avg = 0.5 * (p(i, j) + p(j, i));
      p(i, j) = p(j, i) = avg;
    }
  }
  return p;
}

MinimalKernelSequence minimal_heat_kernel(const WeightedGraph& g, const Exhaustion& exhaustion,
                                          double t, VertexId x, VertexId y,
                                          const UniformizationOptions& options) {
  require_positive_time(t);
  for (VertexId v : {x, y}) {
    if (!exhaustion.contains(0, v)) {
      throw Error(ErrorCode::VertexOutsideExhaustion,
                  "vertex " + (v < g.size() ? g.label(v) : std::to_string(v)) + " not in K_1");
    }
  }
  // A common rate across levels keeps the Poisson mixtures comparable.
  UniformizationOptions opts = options;
  if (opts.rate == 0.0) opts.rate = max_weighted_degree(g);

  MinimalKernelSequence out;
  for (std::size_t n = 0; n < exhaustion.depth(); ++n) {
    const auto level = exhaustion.level(n);
    const auto p = killed_heat_kernel(g, level, t, opts);
    const auto ix = static_cast<std::size_t>(std::lower_bound(level.begin(), level.end(), x) - level.begin());
    const auto iy = static_cast<std::size_t>(std::lower_bound(level.begin(), level.end(), y) - level.begin());
    out.values.push_back(p(ix, iy));
  }
  for (std::size_t i = 1; i < out.values.size(); ++i)
    if (out.values[i] < out.values[i - 1]) out.nondecreasing = false;
  if (out.values.size() >= 2) out.last_gap = out.values.back() - out.values[out.values.size() - 2];
  return out;
}

bool AxiomReport::passes(double tolerance) const {
  return chapman_kolmogorov_defect <= tolerance && symmetry_defect <= tolerance &&
         mass_excess <= tolerance && pointwise_bound_excess <= tolerance && min_entry >= 0.0;
}

AxiomReport verify_axioms(const HeatKernelTable& s_table, const HeatKernelTable& t_table,
                          const HeatKernelTable& sum_table) {
  if (s_table.graph_hash != t_table.graph_hash || s_table.graph_hash != sum_table.graph_hash ||
      s_table.size() != sum_table.size() || t_table.size() != sum_table.size()) {
    throw Error(ErrorCode::GraphMismatch, "kernel tables were built on different graphs");
  }
  const double expected = s_table.t + t_table.t;
  if (std::abs(sum_table.t - expected) > 1e-12 * expected) {
    throw Error(ErrorCode::GraphMismatch, "table times do not add up: " + std::to_string(s_table.t) +
                                              " + " + std::to_string(t_table.t) +
                                              " != " + std::to_string(sum_table.t));
  }
  const std::size_t n = sum_table.size();
  const auto& mu = sum_table.mu_ref;

  AxiomReport report;
  report.min_mass = INFINITY;
  report.mass_excess = -INFINITY;
  report.pointwise_bound_excess = -INFINITY;
  report.min_entry = INFINITY;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      double conv = 0.0;
      for (std::size_t z = 0; z < n; ++z) conv += s_table(x, z) * t_table(z, y) * mu[z];
      report.chapman_kolmogorov_defect =
          std::max(report.chapman_kolmogorov_defect, std::abs(sum_table(x, y) - conv));
    }
  }
  for (const HeatKernelTable* table : {&s_table, &t_table, &sum_table}) {
    for (std::size_t x = 0; x < n; ++x) {
      double mass = 0.0;
      for (std::size_t y = 0; y < n; ++y) {
        const double v = (*table)(x, y);
        mass += v * mu[y];
        report.symmetry_defect = std::max(report.symmetry_defect, std::abs(v - (*table)(y, x)));
        report.pointwise_bound_excess = std::max(report.pointwise_bound_excess, v - 1.0 / mu[x]);
        report.min_entry = std::min(report.min_entry, v);
      }
      report.mass_excess = std::max(report.mass_excess, mass - 1.0);
      report.min_mass = std::min(report.min_mass, mass);
    }
  }
  return report;
}

std::vector<std::pair<double, double>> on_diagonal_scan(const WeightedGraph& g, VertexId x,
                                                        std::span<const double> t_grid) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    require_positive_time(t_grid[i]);
    if (i > 0 && !(t_grid[i] < t_grid[i - 1])) {
      throw Error(ErrorCode::InvalidArgument, "time grid must be strictly decreasing");
    }
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto table = heat_semigroup(g, t, {.require_connected = false});
    out.emplace_back(t, table(x, x) * g.mu(x));
  }
  return out;
}

std::shared_ptr<const HeatKernelTable> KernelCache::get(const WeightedGraph& g, double t) {
  const std::pair<std::uint64_t, double> key{g.hash(), t};
  {
    std::lock_guard lock(mutex_);
    if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  }
  auto table = std::make_shared<const HeatKernelTable>(heat_semigroup(g, t, options_));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = tables_.emplace(key, std::move(table));
  if (inserted) ++misses_;
  return it->second;
}

std::size_t KernelCache::size() const {
  std::lock_guard lock(mutex_);
  return tables_.size();
}

std::size_t KernelCache::misses() const {
  std::lock_guard lock(mutex_);
  return misses_;
}

}  // namespace heatlab
