#pragma once

#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "heatlab/report.hpp"

namespace heatlab {

using Complex = std::complex<double>;

/// Real potential on the flat torus prod_i [0, L_i), given by a pointwise
/// evaluator, an explicit Fourier coefficient list, or both. Coefficients
/// follow w(x) = sum_k w_hat(k) exp(2 pi i sum_j k_j x_j / L_j).
class TorusPotential {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;

  struct Coefficient {
    std::vector<int> k;
    Complex value;
  };

  static TorusPotential zero();
  static TorusPotential constant(double c);
  /// sum_i (1 - cos(2 pi x_i / L_i)); on the unit-speed circle, 1 - cos(theta).
  static TorusPotential cosine_well();
  static TorusPotential from_evaluator(std::string name, Evaluator f);
  /// Coefficients are made exactly conjugate-symmetric by averaging each pair.
  static TorusPotential from_coefficients(std::string name, std::vector<Coefficient> coefficients);
  /// Parses "zero", "constant:<c>", "cosine-well", or a path to a coefficient
  /// file (lines "<k_1> ... <k_m> <re> <im>", '#' comments).
  static TorusPotential parse(const std::string& spec, std::size_t dim);

  const std::string& name() const noexcept { return name_; }
  bool has_evaluator() const noexcept { return static_cast<bool>(evaluator_); }
  /// Constant c when the potential is known to be constant.
  bool is_constant() const noexcept { return constant_; }

  double evaluate(std::span<const double> x, std::span<const double> lengths) const;

 private:
  friend class TorusModel;
  std::string name_;
  Evaluator evaluator_;
  std::vector<Coefficient> coefficients_;
  bool constant_ = false;
  double constant_value_ = 0.0;
  // Evaluator form that sees the side lengths (cosine well).
  std::function<double(std::span<const double>, std::span<const double>)> scaled_evaluator_;
};

/// Flat torus of dimension m with Fourier modes |k_i| <= truncation.
class TorusModel {
 public:
  /// Throws InvalidArgument unless m in {1, 2}, lengths positive, truncation >= 1.
  TorusModel(std::size_t dim, std::vector<double> lengths, int truncation,
             TorusPotential potential = TorusPotential::zero());

  std::size_t dim() const noexcept { return dim_; }
  std::span<const double> lengths() const noexcept { return lengths_; }
  int truncation() const noexcept { return truncation_; }
  const TorusPotential& potential() const noexcept { return potential_; }
  double volume() const;
  std::size_t basis_size() const;

  /// Same model with a different truncation (coefficients recomputed).
  TorusModel with_truncation(int truncation) const;

  /// Basis multi-index for position i (row-major over [-N, N]^m).
  std::vector<int> mode(std::size_t i) const;
  /// (2 pi k / L)^2 summed over axes.
  double mode_eigenvalue(std::span<const int> k) const;
  /// w_hat(k) for |k_i| <= 2N (zero beyond the supplied coefficients).
  Complex coefficient(std::span<const int> k) const;
  /// True when every needed coefficient is real and even in k.
  bool real_symmetric() const noexcept { return real_symmetric_; }
  bool diagonal() const noexcept { return diagonal_; }

 private:
  std::size_t coefficient_index(std::span<const int> k) const;
  void compute_coefficients();

  std::size_t dim_;
  std::vector<double> lengths_;
  int truncation_;
  TorusPotential potential_;
  std::vector<Complex> coefficients_;  // dense over [-2N, 2N]^m
  bool real_symmetric_ = true;
  bool diagonal_ = true;
};

/// Sorted eigenvalues of -Laplacian on the truncated Fourier basis.
std::vector<double> torus_eigenvalues(const TorusModel& model);

/// sum over all k in Z^m of exp(-t lambda_k) (no truncation), per-axis theta
/// sums cut once terms fall below 1e-16.
double exact_heat_trace(std::span<const double> lengths, double t);

/// Hermitian Galerkin matrix t * M with M[k,k'] = lambda_k delta + w_hat(k-k')/t,
/// i.e. t lambda_k delta + w_hat(k-k'); row-major, basis_size squared entries.
std::vector<Complex> assemble_galerkin_matrix(const TorusModel& model, double t);

struct GalerkinOptions {
  /// Compare against truncation 2N and throw TruncationNotConverged when the
  /// relative change exceeds `truncation_tolerance`.
  bool verify_truncation = true;
  double truncation_tolerance = 1e-6;
};

struct GalerkinTrace {
  double trace = 0.0;
  /// |trace(2N) - trace(N)| / trace(N); NaN when not computed.
  double truncation_change = 0.0;
};

/// tr exp(-t H(w/t)) on the truncated basis.
GalerkinTrace galerkin_schrodinger_trace(const TorusModel& model, double t, const GalerkinOptions& options = {});

/// int exp(-w) over the torus by the periodic trapezoid rule with `points` nodes per axis.
double torus_target(const TorusModel& model, std::size_t points = 0);

struct TorusScanOptions {
  /// Psi(t) = (scaling_base * t)^{m/2}. 4 pi matches the kernel of exp(t Laplacian);
  /// 2 pi is the probabilists' normalization.
  double scaling_base = 4.0 * 3.14159265358979323846;
  double relative_tolerance = 0.01;
  /// Strict scans throw when the truncation check fails; otherwise it is reported.
  bool strict_truncation = false;
  double truncation_tolerance = 1e-6;
  std::size_t threads = 1;
};

struct TorusScan {
  ConvergenceReport report;
  std::vector<double> truncation_changes;
};

TorusScan torus_semiclassical_scan(const TorusModel& model, std::span<const double> t_grid,
                                   const TorusScanOptions& options = {});

}  // namespace heatlab
