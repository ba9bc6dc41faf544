#include "heatlab/path_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heatlab/errors.hpp"
#include "heatlab/heat_kernel.hpp"
#include "heatlab/parallel.hpp"

namespace heatlab {

namespace {

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
}

void require_vertex(const WeightedGraph& g, VertexId x) {
  if (x >= g.size()) throw Error(ErrorCode::UnknownVertex, "vertex index " + std::to_string(x));
}

struct ChunkMoments {
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
};

}  // namespace

VertexId JumpPath::at(double s) const {
  VertexId v = start;
  for (const auto& j : jumps) {
    if (j.time > s) break;
    v = j.target;
  }
  return v;
}

VertexId JumpPath::final_state() const { return jumps.empty() ? start : jumps.back().target; }

double JumpPath::integrate(std::span<const double> w) const {
  double total = 0.0;
  double from = 0.0;
  VertexId v = start;
  for (const auto& j : jumps) {
    total += w[v] * (j.time - from);
    from = j.time;
    v = j.target;
  }
  return total + w[v] * (horizon - from);
}

double JumpPath::occupation(VertexId target, double a, double b) const {
  double total = 0.0;
  double from = 0.0;
  VertexId v = start;
  auto add = [&](double lo, double hi) {
    if (v == target) total += std::max(0.0, std::min(hi, b) - std::max(lo, a));
  };
  for (const auto& j : jumps) {
    add(from, j.time);
    from = j.time;
    v = j.target;
  }
  add(from, horizon);
  return total;
}

bool JumpPath::stays_in(const std::vector<bool>& member) const {
  if (!member[start]) return false;
  for (const auto& j : jumps)
    if (!member[j.target]) return false;
  return true;
}

bool JumpPath::well_formed() const {
  double prev = 0.0;
  VertexId v = start;
  for (const auto& j : jumps) {
    if (!(j.time > prev) || !(j.time < horizon) || j.target == v) return false;
    prev = j.time;
    v = j.target;
  }
  return true;
}

McEstimate monte_carlo_mean(std::size_t n_samples, std::uint64_t seed, std::uint64_t stream,
                            std::size_t threads, const std::function<double(Rng&)>& draw) {
  const std::size_t chunks = (n_samples + kSampleChunk - 1) / kSampleChunk;
  std::vector<ChunkMoments> moments(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng(derive_stream_seed(seed, stream, c));
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(n_samples, begin + kSampleChunk);
    ChunkMoments m;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = draw(rng);
      ++m.count;
      const double delta = v - m.mean;
      m.mean += delta / static_cast<double>(m.count);
      m.m2 += delta * (v - m.mean);
    }
    moments[c] = m;
  });

  ChunkMoments total;
  for (const auto& m : moments) {
    if (m.count == 0) continue;
    const auto n_a = static_cast<double>(total.count);
    const auto n_b = static_cast<double>(m.count);
    const double delta = m.mean - total.mean;
    const double n = n_a + n_b;
    total.mean += delta * n_b / n;
    total.m2 += m.m2 + delta * delta * n_a * n_b / n;
    total.count += m.count;
  }
  McEstimate est;
  est.mean = total.mean;
  est.n_samples = total.count;
  est.seed = seed;
  if (total.count > 1) {
    const double var = total.m2 / static_cast<double>(total.count - 1);
    est.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(total.count));
  }
  return est;
}

JumpPath sample_free_path(const WeightedGraph& g, VertexId x, double t, Rng& rng) {
  require_vertex(g, x);
  require_positive_time(t);
  JumpPath path;
  path.start = x;
  path.horizon = t;
  VertexId z = x;
  double s = 0.0;
  while (true) {
    const auto nbrs = g.neighbors(z);
    double total = 0.0;
    for (const Edge& e : nbrs) total += e.weight;
    if (total == 0.0) break;
    s += rng.exponential(total / g.mu(z));
    if (s >= t) break;
    double u = rng.uniform() * total;
    VertexId next = nbrs.back().target;
    for (const Edge& e : nbrs) {
      if (u < e.weight) {
        next = e.target;
        break;
      }
      u -= e.weight;
    }
    path.jumps.push_back({s, next});
    z = next;
  }
  return path;
}

std::size_t bridge_jump_cap(double rate, double t) {
  const double mean = rate * t;
  return static_cast<std::size_t>(std::ceil(mean + 12.0 * std::sqrt(mean) + 30.0));
}

BridgeSampler::BridgeSampler(const WeightedGraph& g, VertexId endpoint, double t)
    : graph_(&g), endpoint_(endpoint), t_(t) {
  require_vertex(g, endpoint);
  require_positive_time(t);
  const std::size_t n = g.size();
  rate_ = max_weighted_degree(g);
  max_jumps_ = rate_ > 0.0 ? bridge_jump_cap(rate_, t) : 0;
  transition_ = uniformized_transition(generator_matrix(g), rate_);

  to_endpoint_.assign(max_jumps_ + 1, std::vector<double>(n, 0.0));
  to_endpoint_[0][endpoint] = 1.0;
  for (std::size_t j = 1; j <= max_jumps_; ++j) to_endpoint_[j] = transition_ * std::span<const double>(to_endpoint_[j - 1]);

  const double mean = rate_ * t;
  log_poisson_ = poisson_log_pmf(mean, max_jumps_);
  double tail = 0.0;
  if (mean > 0.0) {
    const double ratio = mean / static_cast<double>(max_jumps_ + 2);
    const double dn = static_cast<double>(max_jumps_ + 1);
    tail = std::exp(-mean + dn * std::log(mean) - std::lgamma(dn + 1.0)) / (1.0 - ratio);
  }

  count_cdf_.assign(n, {});
  normalizer_.assign(n, 0.0);
  truncated_mass_.assign(n, tail);
  for (VertexId x = 0; x < n; ++x) {
    auto& cdf = count_cdf_[x];
    cdf.resize(max_jumps_ + 1);
    double acc = 0.0;
    for (std::size_t k = 0; k <= max_jumps_; ++k) {
      acc += std::exp(log_poisson_[k]) * to_endpoint_[k][x];
      cdf[k] = acc;
    }
    normalizer_[x] = acc;
    if (acc > 0.0)
      for (double& c : cdf) c /= acc;
  }
}

double BridgeSampler::transition_probability(VertexId x) const { return normalizer_.at(x); }

JumpPath BridgeSampler::sample(VertexId x, Rng& rng) const {
  const WeightedGraph& g = *graph_;
  require_vertex(g, x);
  if (!(normalizer_[x] > 0.0)) {
    throw Error(ErrorCode::ZeroKernel, "p(t, " + g.label(x) + ", " + g.label(endpoint_) + ") = 0");
  }
  if (truncated_mass_[x] > 1e-12 * normalizer_[x]) {
    throw Error(ErrorCode::NTruncationExceeded,
                "jump cap " + std::to_string(max_jumps_) + " drops relative endpoint mass " +
                    std::to_string(truncated_mass_[x] / normalizer_[x]));
  }

  const auto& cdf = count_cdf_[x];
  const double u = rng.uniform();
  const auto jumps = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  const std::size_t count = std::min(jumps, max_jumps_);

  std::vector<double> times(count);
  for (double& s : times) s = rng.uniform_open() * t_;
  std::sort(times.begin(), times.end());

  JumpPath path;
  path.start = x;
  path.horizon = t_;
  VertexId z = x;
  for (std::size_t k = 1; k <= count; ++k) {
    const auto& ahead = to_endpoint_[count - k];
    const double stay = transition_(z, z) * ahead[z];
    double total = stay;
    for (const Edge& e : g.neighbors(z)) total += transition_(z, e.target) * ahead[e.target];
    double v = rng.uniform() * total;
    VertexId next = z;
    if (v >= stay) {
      v -= stay;
      for (const Edge& e : g.neighbors(z)) {
        const double wgt = transition_(z, e.target) * ahead[e.target];
        if (wgt <= 0.0) continue;
        next = e.target;
        if (v < wgt) break;
        v -= wgt;
      }
    }
    if (next != z) {
      // Ties between sorted uniforms have probability ~2^-52; keep times strictly increasing.
      double s = times[k - 1];
      if (!path.jumps.empty() && s <= path.jumps.back().time) s = std::nextafter(path.jumps.back().time, t_);
      path.jumps.push_back({s, next});
      z = next;
    }
  }
  return path;
}

JumpPath sample_bridge(const WeightedGraph& g, VertexId x, VertexId y, double t, Rng& rng) {
  const BridgeSampler sampler(g, y, t);
  return sampler.sample(x, rng);
}

McEstimate feynman_kac_trace_mc(const WeightedGraph& g, const Potential& w, double t,
                                std::size_t n_samples, std::uint64_t seed, const SamplerOptions& options) {
  require_positive_time(t);
  if (n_samples < 100) {
    throw Error(ErrorCode::InvalidArgument, "feynman_kac_trace_mc needs at least 100 samples per vertex");
  }
  if (w.size() != g.size()) throw Error(ErrorCode::InvalidArgument, "potential size mismatch");

  McEstimate out;
  out.seed = seed;
  double variance = 0.0;
  for (VertexId x = 0; x < g.size(); ++x) {
    const BridgeSampler sampler(g, x, t);
    const double weight = sampler.transition_probability(x);  // mu(x) p(t,x,x)
    const auto est = monte_carlo_mean(n_samples, seed, x, options.threads, [&](Rng& rng) {
      return std::exp(-sampler.sample(x, rng).integrate(w.values()));
    });
    out.mean += weight * est.mean;
    variance += weight * weight * est.std_error * est.std_error;
    out.n_samples += est.n_samples;
  }
  out.std_error = std::sqrt(variance);
  return out;
}

McEstimate pnfb_probability(const WeightedGraph& g, VertexId x, std::span<const VertexId> subset,
                            double t, std::size_t n_samples, std::uint64_t seed,
                            const SamplerOptions& options, std::uint64_t stream) {
  require_vertex(g, x);
  std::vector<bool> member(g.size(), false);
  for (VertexId v : subset) {
    require_vertex(g, v);
    member[v] = true;
  }
  if (!member[x]) throw Error(ErrorCode::VertexNotInK, "start vertex " + g.label(x) + " is not in K");
  const BridgeSampler sampler(g, x, t);
  return monte_carlo_mean(n_samples, seed, stream, options.threads,
                          [&](Rng& rng) { return sampler.sample(x, rng).stays_in(member) ? 1.0 : 0.0; });
}

double no_jump_lower_bound(const WeightedGraph& g, VertexId x, double t) {
  require_vertex(g, x);
  const auto kernel = heat_semigroup(g, t, {.require_connected = false});
  return std::exp(-t * weighted_degree(g, x)) / (kernel(x, x) * g.mu(x));
}

double pnfb_exact_ratio(const WeightedGraph& g, VertexId x, std::span<const VertexId> subset, double t) {
  require_vertex(g, x);
  std::vector<VertexId> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  if (it == sorted.end() || *it != x) throw Error(ErrorCode::VertexNotInK, "start vertex " + g.label(x) + " is not in K");
  const auto i = static_cast<std::size_t>(it - sorted.begin());
  UniformizationOptions opts{.rate = max_weighted_degree(g), .require_connected = false};
  const auto killed = killed_heat_kernel(g, sorted, t, opts);
  const auto full = heat_semigroup(g, t, opts);
  return killed(i, i) / full(x, x);
}

}  // namespace heatlab
