#include "heatlab/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "heatlab/errors.hpp"
#include "heatlab/rng.hpp"

namespace heatlab {

namespace {

std::string pair_name(const std::vector<std::string>& labels, VertexId x, VertexId y) {
  return "(" + labels[x] + ", " + labels[y] + ")";
}

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffU;
    h *= 0x100000001b3ULL;
  }
}

}  // namespace

VertexId RawGraph::add_vertex(std::string label, double measure) {
  labels.push_back(std::move(label));
  mu.push_back(measure);
  return mu.size() - 1;
}

void RawGraph::add_edge(VertexId x, VertexId y, double b) {
  entries.push_back({x, y, b});
  entries.push_back({y, x, b});
}

void RawGraph::add_entry(VertexId from, VertexId to, double b) { entries.push_back({from, to, b}); }

const std::string& WeightedGraph::label(VertexId x) const {
  if (x >= size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  return labels_[x];
}

double WeightedGraph::mu(VertexId x) const {
  if (x >= size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  return mu_[x];
}

std::span<const Edge> WeightedGraph::neighbors(VertexId x) const {
  if (x >= size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  return adjacency_[x];
}

double WeightedGraph::weight(VertexId x, VertexId y) const {
  for (const Edge& e : neighbors(x))
    if (e.target == y) return e.weight;
  if (y >= size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(y));
  return 0.0;
}

std::size_t WeightedGraph::edge_count() const noexcept {
  std::size_t n = 0;
  for (const auto& adj : adjacency_) n += adj.size();
  return n / 2;
}

VertexId WeightedGraph::find(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw Error(ErrorCode::UnknownVertex, "no vertex labelled '" + label + "'");
  return static_cast<VertexId>(it - labels_.begin());
}

WeightedGraph validate(const RawGraph& raw) {
  const std::size_t n = raw.mu.size();
  std::vector<std::string> labels = raw.labels;
  if (labels.size() > n) {
    throw Error(ErrorCode::InvalidArgument, "more labels than vertices");
  }
  for (std::size_t i = labels.size(); i < n; ++i) labels.push_back(std::to_string(i));

  for (VertexId x = 0; x < n; ++x) {
    if (!(raw.mu[x] > 0.0) || !std::isfinite(raw.mu[x])) {
      throw Error(ErrorCode::NonpositiveMeasure,
                  "mu(" + labels[x] + ") = " + std::to_string(raw.mu[x]));
    }
  }

  std::map<std::pair<VertexId, VertexId>, double> weights;
  for (const auto& entry : raw.entries) {
    if (entry.from >= n || entry.to >= n) {
      throw Error(ErrorCode::UnknownVertex, "edge endpoint index " +
                                                std::to_string(std::max(entry.from, entry.to)) +
                                                " outside vertex set of size " + std::to_string(n));
    }
    if (std::isnan(entry.weight) || entry.weight < 0.0) {
      throw Error(ErrorCode::NegativeWeight, "b" + pair_name(labels, entry.from, entry.to) + " = " +
                                                 std::to_string(entry.weight));
    }
    if (entry.from == entry.to && entry.weight != 0.0) {
      throw Error(ErrorCode::SelfLoop, "b" + pair_name(labels, entry.from, entry.to) + " = " +
                                           std::to_string(entry.weight));
    }
    weights[{entry.from, entry.to}] += entry.weight;
  }

  for (const auto& [key, w] : weights) {
    auto it = weights.find({key.second, key.first});
    const double reverse = it == weights.end() ? 0.0 : it->second;
    if (reverse != w) {
      throw Error(ErrorCode::AsymmetricWeights, "b" + pair_name(labels, key.first, key.second) +
                                                    " = " + std::to_string(w) + " but b" +
                                                    pair_name(labels, key.second, key.first) +
                                                    " = " + std::to_string(reverse));
    }
  }

  WeightedGraph g;
  g.name_ = raw.name;
  g.labels_ = std::move(labels);
  g.mu_ = raw.mu;
  g.adjacency_.resize(n);
  for (const auto& [key, w] : weights) {
    if (w > 0.0) g.adjacency_[key.first].push_back({key.second, w});
  }
  for (VertexId x = 0; x < n; ++x) {
    double sum = 0.0;
    for (const Edge& e : g.adjacency_[x]) sum += e.weight;
    if (!std::isfinite(sum)) {
      throw Error(ErrorCode::NonsummableWeights, "sum_y b(" + g.labels_[x] + ", y) is not finite");
    }
  }

  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv_mix(h, n);
  for (VertexId x = 0; x < n; ++x) {
    fnv_mix(h, std::bit_cast<std::uint64_t>(g.mu_[x]));
    for (const Edge& e : g.adjacency_[x]) {
      fnv_mix(h, e.target);
      fnv_mix(h, std::bit_cast<std::uint64_t>(e.weight));
    }
    fnv_mix(h, ~0ULL);
  }
  g.hash_ = h;
  g.component_count_ = connected_components(g).size();
  return g;
}

double laplacian_apply(const WeightedGraph& g, std::span<const double> f, VertexId x) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
  if (f.size() != g.size()) {
    throw Error(ErrorCode::InvalidArgument, "vertex function has " + std::to_string(f.size()) +
                                                " values for " + std::to_string(g.size()) +
                                                " vertices");
  }
  double s = 0.0;
  for (const Edge& e : g.neighbors(x)) s += e.weight * (f[x] - f[e.target]);
  return -s / g.mu(x);
}

double weighted_degree(const WeightedGraph& g, VertexId x) {
  double s = 0.0;
  for (const Edge& e : g.neighbors(x)) s += e.weight;
  return s / g.mu(x);
}

double max_weighted_degree(const WeightedGraph& g) {
  double m = 0.0;
  for (VertexId x = 0; x < g.size(); ++x) m = std::max(m, weighted_degree(g, x));
  return m;
}

std::vector<std::vector<VertexId>> connected_components(const WeightedGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::size_t> comp(n, n);
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    const std::size_t id = out.size();
    out.emplace_back();
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      out[id].push_back(x);
      for (const Edge& e : g.neighbors(x)) {
        if (comp[e.target] == n) {
          comp[e.target] = id;
          stack.push_back(e.target);
        }
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

Matrix generator_matrix(const WeightedGraph& g) {
  const std::size_t n = g.size();
  Matrix h(n, n);
  for (VertexId x = 0; x < n; ++x) {
    const double inv_mu = 1.0 / g.mu(x);
    for (const Edge& e : g.neighbors(x)) {
      h(x, x) += e.weight * inv_mu;
      h(x, e.target) -= e.weight * inv_mu;
    }
  }
  return h;
}

Matrix symmetric_generator(const WeightedGraph& g) {
  std::vector<VertexId> all(g.size());
  std::iota(all.begin(), all.end(), VertexId{0});
  return killed_symmetric_generator(g, all);
}

Matrix killed_symmetric_generator(const WeightedGraph& g, std::span<const VertexId> subset) {
  const std::size_t m = subset.size();
  std::vector<std::size_t> position(g.size(), m);
  for (std::size_t i = 0; i < m; ++i) {
    if (subset[i] >= g.size()) {
      throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(subset[i]));
    }
    position[subset[i]] = i;
  }
  Matrix s(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const VertexId x = subset[i];
    s(i, i) = weighted_degree(g, x);
    for (const Edge& e : g.neighbors(x)) {
      const std::size_t j = position[e.target];
      if (j == m) continue;
      s(i, j) = -e.weight / std::sqrt(g.mu(x) * g.mu(e.target));
    }
  }
  return s;
}

namespace generators {

RawGraph single_vertex(double mu) {
  RawGraph raw;
  raw.name = "single";
  raw.add_vertex("0", mu);
  return raw;
}

RawGraph two_vertex(double b, double mu1, double mu2) {
  RawGraph raw;
  raw.name = "two-vertex";
  raw.add_vertex("1", mu1);
  raw.add_vertex("2", mu2);
  raw.add_edge(0, 1, b);
  return raw;
}

RawGraph path(std::size_t n, double b, double mu) {
  RawGraph raw;
  raw.name = "P" + std::to_string(n);
  for (std::size_t i = 0; i < n; ++i) raw.add_vertex(std::to_string(i), mu);
  for (std::size_t i = 0; i + 1 < n; ++i) raw.add_edge(i, i + 1, b);
  return raw;
}

RawGraph complete(std::size_t n, double b, double mu) {
  RawGraph raw;
  raw.name = "K" + std::to_string(n);
  for (std::size_t i = 0; i < n; ++i) raw.add_vertex(std::to_string(i), mu);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) raw.add_edge(i, j, b);
  return raw;
}

RawGraph star(std::span<const double> spoke_weights, double center_mu) {
  RawGraph raw;
  raw.name = "star" + std::to_string(spoke_weights.size());
  raw.add_vertex("center", center_mu);
  for (std::size_t i = 0; i < spoke_weights.size(); ++i) {
    raw.add_vertex("leaf" + std::to_string(i), 1.0);
    raw.add_edge(0, i + 1, spoke_weights[i]);
  }
  return raw;
}

RawGraph random_connected(const RandomGraphSpec& spec) {
  std::uint64_t state = spec.seed;
  auto uniform = [&state] { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; };
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * uniform(); };

  RawGraph raw;
  raw.name = "random" + std::to_string(spec.n) + "-seed" + std::to_string(spec.seed);
  for (std::size_t i = 0; i < spec.n; ++i) {
    raw.add_vertex(std::to_string(i), between(spec.mu_min, spec.mu_max));
  }
  std::vector<std::vector<bool>> linked(spec.n, std::vector<bool>(spec.n, false));
  for (std::size_t i = 1; i < spec.n; ++i) {
    const auto parent = static_cast<std::size_t>(uniform() * static_cast<double>(i));
    raw.add_edge(parent, i, between(spec.b_min, spec.b_max));
    linked[parent][i] = linked[i][parent] = true;
  }
  for (std::size_t i = 0; i < spec.n; ++i) {
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      const bool extra = uniform() < spec.extra_edge_probability;
      const double b = between(spec.b_min, spec.b_max);
      if (extra && !linked[i][j]) raw.add_edge(i, j, b);
    }
  }
  return raw;
}

}  // namespace generators

}  // namespace heatlab
