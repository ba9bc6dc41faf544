#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "heatlab/linalg.hpp"

namespace heatlab {

using VertexId = std::size_t;

struct Edge {
  VertexId target;
  double weight;
};

/// Unchecked graph data as it comes from a file or a builder. Weights are
/// directed entries b(from, to); an undirected edge is two entries.
struct RawGraph {
  struct Entry {
    VertexId from;
    VertexId to;
    double weight;
  };

  std::string name;
  std::vector<std::string> labels;
  std::vector<double> mu;
  std::vector<Entry> entries;

  VertexId add_vertex(std::string label, double measure);
  void add_edge(VertexId x, VertexId y, double b);
  void add_entry(VertexId from, VertexId to, double b);
};

/// Weighted graph (X, b, mu): a finite vertex set with a positive measure and
/// symmetric nonnegative edge weights vanishing on the diagonal. Immutable once
/// built; construct through validate().
class WeightedGraph {
 public:
  std::size_t size() const noexcept { return mu_.size(); }
  const std::string& name() const noexcept { return name_; }
  const std::string& label(VertexId x) const;
  double mu(VertexId x) const;
  std::span<const double> measure() const noexcept { return mu_; }
  std::span<const Edge> neighbors(VertexId x) const;
  /// b(x, y); zero when x and y are not adjacent.
  double weight(VertexId x, VertexId y) const;
  std::size_t edge_count() const noexcept;
  /// Content hash over measure and weights; labels and name are ignored.
  std::uint64_t hash() const noexcept { return hash_; }
  std::size_t component_count() const noexcept { return component_count_; }
  bool connected() const noexcept { return component_count_ <= 1; }

  /// Lookup by label; throws UnknownVertex.
  VertexId find(const std::string& label) const;

  friend WeightedGraph validate(const RawGraph& raw);

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::vector<double> mu_;
  std::vector<std::vector<Edge>> adjacency_;
  std::uint64_t hash_ = 0;
  std::size_t component_count_ = 0;
};

/// Checks the weighted-graph axioms and freezes the data. Weights for the same
/// ordered pair listed more than once are summed. Throws AsymmetricWeights,
/// NegativeWeight, SelfLoop, NonpositiveMeasure, NonsummableWeights or
/// UnknownVertex naming the offending vertex or pair.
WeightedGraph validate(const RawGraph& raw);

/// Delta_{b,mu} f(x) = -(1/mu(x)) sum_y b(x,y) (f(x) - f(y)). Nonpositive operator.
double laplacian_apply(const WeightedGraph& g, std::span<const double> f, VertexId x);

/// Deg(x) = (1/mu(x)) sum_y b(x,y).
double weighted_degree(const WeightedGraph& g, VertexId x);
double max_weighted_degree(const WeightedGraph& g);

/// Vertex partition into connected components, each sorted, ordered by smallest member.
std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g);

/// H = -Delta as a dense (non-symmetric) matrix: H f = -Delta f.
Matrix generator_matrix(const WeightedGraph& g);

/// D^{1/2} H D^{-1/2} with D = diag(mu): the symmetric matrix isospectral to H.
Matrix symmetric_generator(const WeightedGraph& g);

/// Generator restricted to `subset` with Dirichlet (killing) boundary: rows and
/// columns outside the subset are dropped but diagonal entries keep the full
/// weighted degree. Returned in the symmetrized form, indexed by subset order.
Matrix killed_symmetric_generator(const WeightedGraph& g, std::span<const VertexId> subset);

namespace generators {

RawGraph single_vertex(double mu);
RawGraph two_vertex(double b, double mu1, double mu2);
RawGraph path(std::size_t n, double b = 1.0, double mu = 1.0);
RawGraph complete(std::size_t n, double b = 1.0, double mu = 1.0);
RawGraph star(std::span<const double> spoke_weights, double center_mu = 1.0);

struct RandomGraphSpec {
  std::size_t n = 20;
  std::uint64_t seed = 1;
  double extra_edge_probability = 0.15;
  double b_min = 0.5, b_max = 2.0;
  double mu_min = 0.5, mu_max = 2.0;
};

/// Random spanning tree plus independent extra edges. Uses a portable
/// splitmix64 stream so the same spec yields the same graph on every platform.
RawGraph random_connected(const RandomGraphSpec& spec);

}  // namespace generators

}  // namespace heatlab
