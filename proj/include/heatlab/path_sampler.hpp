#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "heatlab/graph.hpp"
#include "heatlab/linalg.hpp"
#include "heatlab/rng.hpp"
#include "heatlab/schrodinger.hpp"

namespace heatlab {

struct JumpRecord {
  double time;
  VertexId target;
};

/// Pure-jump cadlag path on [0, horizon]: the value at s is the target of the
/// last jump at or before s, or `start` if there is none.
struct JumpPath {
  VertexId start = 0;
  std::vector<JumpRecord> jumps;
  double horizon = 0.0;
  bool exploded = false;

  VertexId at(double s) const;
  /// gamma(horizon-), the state just before the horizon.
  VertexId final_state() const;
  /// int_0^horizon w(gamma(s)) ds, summed exactly over holding intervals.
  double integrate(std::span<const double> w) const;
  /// Time spent at v inside [a, b].
  double occupation(VertexId v, double a, double b) const;
  /// True when gamma(s) is in the set for every s in [0, horizon).
  bool stays_in(const std::vector<bool>& member) const;
  /// Jump times strictly increasing inside (0, horizon), consecutive targets distinct.
  bool well_formed() const;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Samples are drawn in chunks of this size; chunk c of stream a uses
/// derive_stream_seed(seed, a, c). Results are independent of thread count.
inline constexpr std::size_t kSampleChunk = 4096;

/// Mean and standard error of `draw(rng)` over n samples using the stream
/// family `stream`. Chunks are combined in index order.
McEstimate monte_carlo_mean(std::size_t n_samples, std::uint64_t seed, std::uint64_t stream,
                            std::size_t threads, const std::function<double(Rng&)>& draw);

/// Minimal jump process from x: Exponential(Deg(z)) holding times, jumps to y
/// with probability b(z,y) / sum_y' b(z,y').
JumpPath sample_free_path(const WeightedGraph& g, VertexId x, double t, Rng& rng);

/// Exact bridge sampler for the pinned measure P^{x,y}_t via uniformization,
/// prepared for a fixed endpoint y and horizon t and reusable for any start.
class BridgeSampler {
 public:
  /// Throws NonpositiveTime, UnknownVertex.
  BridgeSampler(const WeightedGraph& g, VertexId endpoint, double t);

  /// Throws ZeroKernel when y is unreachable from x, NTruncationExceeded when
  /// the jump-count cap would discard non-negligible endpoint mass.
  JumpPath sample(VertexId x, Rng& rng) const;

  /// [exp(-tH)]_{x,y} = p(t,x,y) mu(y), from the same truncated series.
  double transition_probability(VertexId x) const;
  std::size_t jump_cap() const noexcept { return max_jumps_; }
  double rate() const noexcept { return rate_; }
  VertexId endpoint() const noexcept { return endpoint_; }
  double horizon() const noexcept { return t_; }

 private:
  const WeightedGraph* graph_;
  VertexId endpoint_;
  double t_;
  double rate_;
  std::size_t max_jumps_;
  Matrix transition_;                      // R = I - H / rate
  std::vector<std::vector<double>> to_endpoint_;  // to_endpoint_[j][z] = R^j[z, y]
  std::vector<double> log_poisson_;
  std::vector<std::vector<double>> count_cdf_;    // per start vertex, over 0..max_jumps
  std::vector<double> normalizer_;
  std::vector<double> truncated_mass_;
};

/// N_max = ceil(rate t + 12 sqrt(rate t) + 30).
std::size_t bridge_jump_cap(double rate, double t);

JumpPath sample_bridge(const WeightedGraph& g, VertexId x, VertexId y, double t, Rng& rng);

struct SamplerOptions {
  std::size_t threads = 1;
};

/// sum_x mu(x) p(t,x,x) E^{x,x}[exp(-int_0^t w)] with n_samples bridges per
/// vertex. Throws InvalidArgument when n_samples < 100.
McEstimate feynman_kac_trace_mc(const WeightedGraph& g, const Potential& w, double t,
                                std::size_t n_samples, std::uint64_t seed,
                                const SamplerOptions& options = {});

/// Bridge estimate of P^{x,x}_t{gamma stays in K on [0,t)}. Throws VertexNotInK.
/// `stream` selects the random stream family (pass the same value at several t
/// for common random numbers).
McEstimate pnfb_probability(const WeightedGraph& g, VertexId x, std::span<const VertexId> subset,
                            double t, std::size_t n_samples, std::uint64_t seed,
                            const SamplerOptions& options = {}, std::uint64_t stream = 0);

/// exp(-t Deg(x)) / (p(t,x,x) mu(x)); a lower bound for the stay-in-K probability.
double no_jump_lower_bound(const WeightedGraph& g, VertexId x, double t);

/// p_K(t,x,x) / p(t,x,x) from Dirichlet-truncated and full kernels: the exact
/// value estimated by pnfb_probability.
double pnfb_exact_ratio(const WeightedGraph& g, VertexId x, std::span<const VertexId> subset, double t);

}  // namespace heatlab
