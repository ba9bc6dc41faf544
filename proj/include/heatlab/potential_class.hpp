#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "heatlab/graph.hpp"
#include "heatlab/schrodinger.hpp"

namespace heatlab {

/// Nodes and weights of the n-point Gauss-Legendre rule on [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

/// sup_x int_0^t sum_y p(s,x,y) |w(y)| mu(y) ds with a 32-point Gauss-Legendre
/// rule in s. Throws NonpositiveTime.
double kato_modulus(const WeightedGraph& g, const Potential& w, double t);

/// Smallest C with <|w| f, f> <= eps Q(f, f) + C <f, f> for all f: the top
/// eigenvalue of diag(|w|) - eps H in the mu-inner product, floored at 0.
double infinitesimal_class_witness(const WeightedGraph& g, const Potential& w, double epsilon);

/// Growth data for the Ricci summability series
/// sum_{k>=2} c_k k^m exp(2k sqrt((m-1)A)), with c_k = exp(-inf of w on the k-th annulus).
struct GrowthProfile {
  std::size_t m = 1;
  double ricci_bound = 0.0;  // A in Ric >= -A
  /// k -> log c_k = -inf_{k-1 < d(x, x0) < k} w(x).
  std::function<double(std::size_t)> log_c;
  std::size_t k_max = 200;
  std::string description;

  /// c_k = 1 (w = 0).
  static GrowthProfile zero_potential(std::size_t m, double ricci_bound, std::size_t k_max = 200);
  /// w >= a d^2: c_k = exp(-a (k-1)^2).
  static GrowthProfile quadratic(std::size_t m, double ricci_bound, double a, std::size_t k_max = 200);
  /// w >= a d: c_k = exp(-a (k-1)).
  static GrowthProfile linear(std::size_t m, double ricci_bound, double a, std::size_t k_max = 200);
  /// c_k = k^{-p}.
  static GrowthProfile power(std::size_t m, double ricci_bound, double p, std::size_t k_max = 200);
  /// Explicit c_2, c_3, ...; k_max is the table end.
  static GrowthProfile table(std::size_t m, double ricci_bound, std::vector<double> c);
};

enum class Admissibility { Admissible, Inadmissible, Undecided };
std::string to_string(Admissibility a);

struct SeriesVerdict {
  Admissibility verdict = Admissibility::Undecided;
  /// Partial sums S_K for K = 2..k_max (may overflow to inf).
  std::vector<double> partial_sums;
  /// Largest consecutive term ratio over the decision window.
  double window_ratio = 0.0;
  /// Largest local power-law exponent d log a_k / d log k over the window.
  double window_slope = 0.0;
  /// Tail bound used for certification (inf when none applies).
  double tail_bound = 0.0;
  std::string reason;
};

struct AdmissibilityReport {
  /// sum c_k k^m e^{2kL}, L = sqrt((m-1)A).
  SeriesVerdict series;
  /// Doubling-constant form sum c_k (2k)^m e^{2Lk}.
  SeriesVerdict doubling;
};

/// Tri-state verdict. Admissible when the last window decays geometrically
/// with a certified ratio and tail < 1e-9, or follows a power law steeper than
/// k^{-(1+0.05)}; inadmissible when terms stay above the first window term.
AdmissibilityReport ricci_admissibility(const GrowthProfile& profile);

}  // namespace heatlab
