#include "heatlab/potential_class.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "heatlab/errors.hpp"
#include "heatlab/heat_kernel.hpp"

namespace heatlab {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        const auto dj = static_cast<double>(j);
        p0 = ((2.0 * dj - 1.0) * z * p1 - (dj - 1.0) * p2) / dj;
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

double kato_modulus(const WeightedGraph& g, const Potential& w, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
  if (w.size() != g.size()) throw Error(ErrorCode::InvalidArgument, "potential size mismatch");
  const std::size_t n = g.size();
  if (w.max_abs() == 0.0) return 0.0;

  const auto rule = gauss_legendre(32, 0.0, t);
  std::vector<double> integral(n, 0.0);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const auto kernel = heat_semigroup(g, rule.nodes[q], {.require_connected = false});
    for (VertexId x = 0; x < n; ++x) {
      double s = 0.0;
      for (VertexId y = 0; y < n; ++y) s += kernel(x, y) * std::abs(w(y)) * g.mu(y);
      integral[x] += rule.weights[q] * s;
    }
  }
  return *std::max_element(integral.begin(), integral.end());
}

double infinitesimal_class_witness(const WeightedGraph& g, const Potential& w, double epsilon) {
  if (!(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be nonnegative");
  if (w.size() != g.size()) throw Error(ErrorCode::InvalidArgument, "potential size mismatch");
  if (g.size() == 0) return 0.0;
  Matrix pencil = symmetric_generator(g);
  pencil *= -epsilon;
  for (VertexId x = 0; x < g.size(); ++x) pencil(x, x) += std::abs(w(x));
  const auto eig = symmetric_eigenvalues(pencil);
  return std::max(0.0, eig.back());
}

namespace {

constexpr double kTailTolerance = 1e-9;
constexpr double kPowerMargin = 0.05;

GrowthProfile make_profile(std::size_t m, double a, std::size_t k_max, std::string description,
                           std::function<double(std::size_t)> log_c) {
  GrowthProfile p;
  p.m = m;
  p.ricci_bound = a;
  p.k_max = k_max;
  p.description = std::move(description);
  p.log_c = std::move(log_c);
  return p;
}

SeriesVerdict judge(const std::vector<double>& log_terms, std::size_t first_k) {
  SeriesVerdict v;
  const std::size_t count = log_terms.size();
  double running = 0.0;
  for (double l : log_terms) {
    running += std::exp(l);
    v.partial_sums.push_back(running);
  }
  v.tail_bound = std::numeric_limits<double>::infinity();
  if (count < 3) {
    v.reason = "too few terms";
    return v;
  }
  const std::size_t window = std::min(count, std::max<std::size_t>(5, count / 4));
  const std::size_t start = count - window;
  const double last = log_terms.back();
  const auto k_of = [&](std::size_t i) { return static_cast<double>(first_k + i); };

  if (std::all_of(log_terms.begin() + static_cast<std::ptrdiff_t>(start), log_terms.end(),
                  [](double l) { return l == -std::numeric_limits<double>::infinity(); })) {
    v.verdict = Admissibility::Admissible;
    v.tail_bound = 0.0;
    v.reason = "terms vanish over the window";
    return v;
  }

  double max_log_ratio = -std::numeric_limits<double>::infinity();
  double max_slope = -std::numeric_limits<double>::infinity();
  double min_log = std::numeric_limits<double>::infinity();
  for (std::size_t i = start; i < count; ++i) {
    min_log = std::min(min_log, log_terms[i]);
    if (i + 1 < count) {
      const double d = log_terms[i + 1] - log_terms[i];
      max_log_ratio = std::max(max_log_ratio, d);
      max_slope = std::max(max_slope, d / std::log(k_of(i + 1) / k_of(i)));
    }
  }
  v.window_ratio = std::exp(max_log_ratio);
  v.window_slope = max_slope;

  if (v.window_ratio < 1.0) {
    const double q = v.window_ratio;
    const double tail = std::exp(last) * q / (1.0 - q);
    if (tail < kTailTolerance) {
      v.verdict = Admissibility::Admissible;
      v.tail_bound = tail;
      v.reason = "geometric decay over the window";
      return v;
    }
  }
  if (max_slope < -(1.0 + kPowerMargin)) {
    const double p = -max_slope;
    v.verdict = Admissibility::Admissible;
    v.tail_bound = std::exp(last) * k_of(count - 1) / (p - 1.0);
    v.reason = "power-law decay steeper than k^-" + std::to_string(1.0 + kPowerMargin);
    return v;
  }
  if (min_log >= log_terms[start] - 1e-12 * std::abs(log_terms[start])) {
    v.verdict = Admissibility::Inadmissible;
    v.reason = "terms bounded below by the first window term";
    return v;
  }
  v.reason = "no certified decay or divergence over the window";
  return v;
}

}  // namespace

GrowthProfile GrowthProfile::zero_potential(std::size_t m, double a, std::size_t k_max) {
  return make_profile(m, a, k_max, "zero", [](std::size_t) { return 0.0; });
}

GrowthProfile GrowthProfile::quadratic(std::size_t m, double a, double coefficient, std::size_t k_max) {
  return make_profile(m, a, k_max, "quadratic:" + std::to_string(coefficient), [coefficient](std::size_t k) {
    const double d = static_cast<double>(k) - 1.0;
    return -coefficient * d * d;
  });
}

GrowthProfile GrowthProfile::linear(std::size_t m, double a, double coefficient, std::size_t k_max) {
  return make_profile(m, a, k_max, "linear:" + std::to_string(coefficient), [coefficient](std::size_t k) {
    return -coefficient * (static_cast<double>(k) - 1.0);
  });
}

GrowthProfile GrowthProfile::power(std::size_t m, double a, double p, std::size_t k_max) {
  return make_profile(m, a, k_max, "power:" + std::to_string(p),
                      [p](std::size_t k) { return -p * std::log(static_cast<double>(k)); });
}

GrowthProfile GrowthProfile::table(std::size_t m, double a, std::vector<double> c) {
  for (double v : c) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, "profile table entries must be positive");
  }
  const std::size_t k_max = c.size() + 1;
  return make_profile(m, a, k_max, "table", [c = std::move(c)](std::size_t k) { return std::log(c.at(k - 2)); });
}

std::string to_string(Admissibility a) {
  switch (a) {
    case Admissibility::Admissible: return "admissible";
    case Admissibility::Inadmissible: return "inadmissible";
    case Admissibility::Undecided: return "undecided";
  }
  return "undecided";
}

AdmissibilityReport ricci_admissibility(const GrowthProfile& profile) {
  if (profile.m < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be >= 1");
  if (!(profile.ricci_bound >= 0.0)) throw Error(ErrorCode::InvalidArgument, "Ricci bound A must be >= 0");
  if (!profile.log_c) throw Error(ErrorCode::InvalidArgument, "growth profile has no c_k rule");
  const double rate = 2.0 * std::sqrt(static_cast<double>(profile.m - 1) * profile.ricci_bound);
  const auto m = static_cast<double>(profile.m);
  std::vector<double> series, doubling;
  for (std::size_t k = 2; k <= profile.k_max; ++k) {
    const auto dk = static_cast<double>(k);
    const double log_c = profile.log_c(k);
    series.push_back(log_c + m * std::log(dk) + rate * dk);
    doubling.push_back(log_c + m * std::log(2.0 * dk) + rate * dk);
  }
  return {judge(series, 2), judge(doubling, 2)};
}

}  // namespace heatlab
