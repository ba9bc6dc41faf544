#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "heatlab/graph.hpp"
#include "heatlab/linalg.hpp"
#include "heatlab/report.hpp"

namespace heatlab {

/// Real vertex potential w = w+ - w-.
class Potential {
 public:
  Potential() = default;
  explicit Potential(std::vector<double> values);
  static Potential constant(std::size_t n, double c);

  std::size_t size() const noexcept { return values_.size(); }
  double operator()(VertexId x) const { return values_.at(x); }
  std::span<const double> values() const noexcept { return values_; }
  /// max(w, 0) pointwise.
  std::vector<double> positive_part() const;
  /// max(-w, 0) pointwise.
  std::vector<double> negative_part() const;
  double min() const;
  double max_abs() const;
  /// Same potential divided by t (the semiclassical coupling w/t).
  Potential scaled(double factor) const;

 private:
  std::vector<double> values_;
};

/// Time scaling Psi and spatial envelope rho2 with the per-point diagonal
/// limit lim_{t->0} p(t,x,x) Psi(t) that the scan's target integrates.
struct AsymptoticControlPair {
  std::function<double(double)> psi;
  std::vector<double> rho2;
  std::vector<double> diagonal_limit;
  /// Optional witness phi with p(t,x,x) <= rho2(x) phi(t) for small t.
  std::function<double(double)> phi_bound;

  /// (Psi = 1, rho2 = 1/mu), valid on every weighted graph.
  static AsymptoticControlPair for_graph(const WeightedGraph& g);
};

/// H(w) = H + diag(w) in the symmetric similarity form D^{1/2} H(w) D^{-1/2}.
struct SchrodingerOperator {
  Matrix symmetric;
};

SchrodingerOperator schrodinger_operator(const WeightedGraph& g, const Potential& w);

/// Ascending eigenvalues of H(w).
std::vector<double> schrodinger_spectrum(const WeightedGraph& g, const Potential& w);

/// tr exp(-t H(w)) from the full eigendecomposition. Throws NonpositiveTime,
/// EigensolverNoConvergence.
double trace_semigroup(const WeightedGraph& g, const Potential& w, double t);

/// t_k = t0 * factor^k for k = 0..count-1.
std::vector<double> geometric_grid(double t0 = 1.0, double factor = 0.5, std::size_t count = 20);

struct ScanOptions {
  /// Relative error at the smallest grid point below which the scan converged.
  double relative_tolerance = 0.01;
  std::size_t threads = 1;
};

/// Psi(t) tr exp(-t H(w/t)) along the grid against
/// sum_x exp(-w(x)) diagonal_limit(x) mu(x). Throws EmptyGrid.
ConvergenceReport semiclassical_scan(const WeightedGraph& g, const Potential& w,
                                     const AsymptoticControlPair& pair, std::span<const double> t_grid,
                                     const ScanOptions& options = {});

struct GoldenThompson {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds(double tolerance = 1e-10) const { return lhs <= rhs + tolerance; }
};

/// lhs = tr exp(-t H(w)), rhs = sum_x p(t,x,x) exp(-t w(x)) mu(x) with the heat
/// kernel taken from uniformization (independent of the eigensolver).
GoldenThompson golden_thompson_check(const WeightedGraph& g, const Potential& w, double t);

}  // namespace heatlab
