#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "heatlab/graph.hpp"
#include "heatlab/linalg.hpp"

namespace heatlab {

struct UniformizationOptions {
  /// Poisson tail mass at which the series is cut; bounds the operator-norm error.
  double tail_tolerance = 1e-14;
  /// Uniformization rate; 0 selects max_x Deg(x). Must dominate every degree.
  double rate = 0.0;
  bool require_connected = true;
};

/// exp(-tH) computed as a Poisson mixture of powers of a (sub)stochastic matrix.
struct UniformizedExponential {
  Matrix value;
  double rate = 0.0;
  std::size_t terms = 0;
  /// Upper bound on the neglected Poisson mass (and on the infinity-norm error).
  double tail_bound = 0.0;
};

/// R = I - H/rate for a generator H with nonnegative off-diagonal and
/// row sums >= 0. Nonnegative and (sub)stochastic when rate >= max diagonal.
Matrix uniformized_transition(const Matrix& generator, double rate);

/// Poisson(mean) log-probabilities for n = 0..max_n, computed without underflow.
std::vector<double> poisson_log_pmf(double mean, std::size_t max_n);

/// exp(-t * generator) by uniformization. `generator` must have nonpositive
/// off-diagonal entries and nonnegative row sums (a possibly killed Markov generator).
UniformizedExponential uniformized_exponential(const Matrix& generator, double t,
                                               const UniformizationOptions& options = {});

/// p(t, ., .) on a finite graph with p(t,x,y) = [exp(-tH)]_{xy} / mu(y).
struct HeatKernelTable {
  double t = 0.0;
  Matrix values;
  std::vector<double> mu_ref;
  std::vector<std::string> labels;
  std::uint64_t graph_hash = 0;
  double uniformization_rate = 0.0;
  double truncation_error_bound = 0.0;
  std::size_t poisson_terms = 0;
  /// max |p(t,x,y) - p(t,y,x)| before the stored table was symmetrized.
  double presymmetrization_defect = 0.0;

  std::size_t size() const noexcept { return values.rows(); }
  double operator()(VertexId x, VertexId y) const { return values(x, y); }
};

/// Throws NonpositiveTime, DisconnectedGraph (when options.require_connected).
HeatKernelTable heat_semigroup(const WeightedGraph& g, double t,
                               const UniformizationOptions& options = {});

/// Nested vertex subsets K_1 within K_2 within ... of an ambient graph.
class Exhaustion {
 public:
  /// Throws InvalidArgument if the sets are not nested or name unknown vertices.
  Exhaustion(const WeightedGraph& ambient, std::vector<std::vector<VertexId>> levels);

  std::size_t depth() const noexcept { return levels_.size(); }
  std::span<const VertexId> level(std::size_t i) const { return levels_.at(i); }
  bool contains(std::size_t level, VertexId x) const;

 private:
  std::vector<std::vector<VertexId>> levels_;
};

struct MinimalKernelSequence {
  /// p_{K_n}(t, x, y) for n = 1..depth.
  std::vector<double> values;
  /// values[last] - values[last - 1]; 0 for a single level.
  double last_gap = 0.0;
  bool nondecreasing = true;
};

/// Dirichlet heat kernels of the exhaustion levels (killing at the boundary:
/// the truncated generator keeps each interior vertex's full weighted degree).
/// Throws VertexOutsideExhaustion when x or y is missing from K_1.
MinimalKernelSequence minimal_heat_kernel(const WeightedGraph& g, const Exhaustion& exhaustion,
                                          double t, VertexId x, VertexId y,
                                          const UniformizationOptions& options = {});

/// Dirichlet kernel p_K(t, x, y) for a single subset, indexed like `subset`.
Matrix killed_heat_kernel(const WeightedGraph& g, std::span<const VertexId> subset, double t,
                          const UniformizationOptions& options = {});

struct AxiomReport {
  double chapman_kolmogorov_defect = 0.0;
  double symmetry_defect = 0.0;
  /// max_x sum_z p(t,x,z) mu(z) - 1 over all three tables.
  double mass_excess = 0.0;
  /// min_x sum_z p(t,x,z) mu(z) over all three tables.
  double min_mass = 0.0;
  /// max p(t,x,y) - 1/mu(x).
  double pointwise_bound_excess = 0.0;
  double min_entry = 0.0;

  bool passes(double tolerance = 1e-10) const;
};

/// Compares p(s+t) with p(s) * p(t) in the mu-weighted product. Throws GraphMismatch
/// when tables come from different graphs or times do not add up.
AxiomReport verify_axioms(const HeatKernelTable& s_table, const HeatKernelTable& t_table,
                          const HeatKernelTable& sum_table);

/// (t, p(t,x,x) mu(x)) along a strictly decreasing positive grid.
std::vector<std::pair<double, double>> on_diagonal_scan(const WeightedGraph& g, VertexId x,
                                                        std::span<const double> t_grid);

/// Thread-safe get-or-compute cache keyed by (graph hash, t).
class KernelCache {
 public:
  explicit KernelCache(UniformizationOptions options = {}) : options_(options) {}

  std::shared_ptr<const HeatKernelTable> get(const WeightedGraph& g, double t);
  std::size_t size() const;
  std::size_t misses() const;

 private:
  UniformizationOptions options_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::uint64_t, double>, std::shared_ptr<const HeatKernelTable>> tables_;
  std::size_t misses_ = 0;
};

// Export formats. CSV: header "x,<labels>", then one row per x led by its label.
// Binary: 16-byte header {char magic[4] = "HKT1", uint32 n, float64 t}, then
// n*n little-endian float64 values in row-major order.
void write_kernel_csv(std::ostream& out, const HeatKernelTable& table);
void write_kernel_binary(std::ostream& out, const HeatKernelTable& table);
/// Returns t and the n x n values; throws InputError on a malformed stream.
std::pair<double, Matrix> read_kernel_binary(std::istream& in);

}  // namespace heatlab
