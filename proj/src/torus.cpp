#include "heatlab/torus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "heatlab/errors.hpp"
#include "heatlab/linalg.hpp"
#include "heatlab/parallel.hpp"

namespace heatlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxRefinedBasis = 1500;

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::NonpositiveTime, "t = " + std::to_string(t));
}

}  // namespace

TorusPotential TorusPotential::zero() { return constant(0.0); }

TorusPotential TorusPotential::constant(double c) {
  TorusPotential p;
  p.name_ = c == 0.0 ? "zero" : "constant:" + std::to_string(c);
  p.constant_ = true;
  p.constant_value_ = c;
  return p;
}

TorusPotential TorusPotential::cosine_well() {
  TorusPotential p;
  p.name_ = "cosine-well";
  p.scaled_evaluator_ = [](std::span<const double> x, std::span<const double> lengths) {
    double v = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) v += 1.0 - std::cos(kTwoPi * x[i] / lengths[i]);
    return v;
  };
  return p;
}

TorusPotential TorusPotential::from_evaluator(std::string name, Evaluator f) {
  TorusPotential p;
  p.name_ = std::move(name);
  p.evaluator_ = std::move(f);
  return p;
}

TorusPotential TorusPotential::from_coefficients(std::string name, std::vector<Coefficient> coefficients) {
  TorusPotential p;
  p.name_ = std::move(name);
  p.coefficients_ = std::move(coefficients);
  return p;
}

TorusPotential TorusPotential::parse(const std::string& spec, std::size_t dim) {
  if (spec == "zero") return zero();
  if (spec == "cosine-well") return cosine_well();
  if (spec.rfind("constant:", 0) == 0) {
    try {
      return constant(std::stod(spec.substr(9)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ConfigError, "bad constant potential '" + spec + "'");
    }
  }
  std::ifstream in(spec);
  if (!in) throw Error(ErrorCode::InputError, "cannot open potential coefficient file '" + spec + "'");
  std::vector<Coefficient> coefficients;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Coefficient c;
    c.k.resize(dim);
    double re = 0.0, im = 0.0;
    for (auto& k : c.k) ls >> k;
    ls >> re >> im;
    if (!ls) {
      throw Error(ErrorCode::InputError, spec + " line " + std::to_string(line_no) +
                                             ": expected " + std::to_string(dim) + " indices, re, im");
    }
    c.value = {re, im};
    coefficients.push_back(std::move(c));
  }
  return from_coefficients(spec, std::move(coefficients));
}

double TorusPotential::evaluate(std::span<const double> x, std::span<const double> lengths) const {
  if (constant_) return constant_value_;
  if (scaled_evaluator_) return scaled_evaluator_(x, lengths);
  if (evaluator_) return evaluator_(x);
  double v = 0.0;
  for (const auto& c : coefficients_) {
    double phase = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) phase += kTwoPi * c.k[i] * x[i] / lengths[i];
    v += (c.value * Complex(std::cos(phase), std::sin(phase))).real();
  }
  return v;
}

TorusModel::TorusModel(std::size_t dim, std::vector<double> lengths, int truncation, TorusPotential potential)
    : dim_(dim), lengths_(std::move(lengths)), truncation_(truncation), potential_(std::move(potential)) {
  if (dim_ != 1 && dim_ != 2) throw Error(ErrorCode::InvalidArgument, "torus dimension must be 1 or 2");
  if (lengths_.size() != dim_) throw Error(ErrorCode::InvalidArgument, "need one side length per axis");
  for (double l : lengths_) {
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidArgument, "side lengths must be positive");
  }
  if (truncation_ < 1) throw Error(ErrorCode::InvalidArgument, "truncation must be >= 1");
  compute_coefficients();
}

double TorusModel::volume() const {
  double v = 1.0;
  for (double l : lengths_) v *= l;
  return v;
}

std::size_t TorusModel::basis_size() const {
  const auto side = static_cast<std::size_t>(2 * truncation_ + 1);
  return dim_ == 1 ? side : side * side;
}

TorusModel TorusModel::with_truncation(int truncation) const {
  return TorusModel(dim_, lengths_, truncation, potential_);
}

std::vector<int> TorusModel::mode(std::size_t i) const {
  const auto side = static_cast<std::size_t>(2 * truncation_ + 1);
  if (dim_ == 1) return {static_cast<int>(i) - truncation_};
  return {static_cast<int>(i / side) - truncation_, static_cast<int>(i % side) - truncation_};
}

double TorusModel::mode_eigenvalue(std::span<const int> k) const {
  double v = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    const double f = kTwoPi * k[i] / lengths_[i];
    v += f * f;
  }
  return v;
}

std::size_t TorusModel::coefficient_index(std::span<const int> k) const {
  const int reach = 2 * truncation_;
  const auto side = static_cast<std::size_t>(2 * reach + 1);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dim_; ++i) idx = idx * side + static_cast<std::size_t>(k[i] + reach);
  return idx;
}

Complex TorusModel::coefficient(std::span<const int> k) const {
  const int reach = 2 * truncation_;
  for (std::size_t i = 0; i < dim_; ++i)
    if (k[i] < -reach || k[i] > reach) return 0.0;
  return coefficients_[coefficient_index(k)];
}

void TorusModel::compute_coefficients() {
  const int reach = 2 * truncation_;
  const auto side = static_cast<std::size_t>(2 * reach + 1);
  const std::size_t total = dim_ == 1 ? side : side * side;
  coefficients_.assign(total, 0.0);
  std::vector<int> zero_k(dim_, 0);

  const TorusPotential& p = potential_;
  if (p.constant_) {
    coefficients_[coefficient_index(zero_k)] = p.constant_value_;
  } else if (p.scaled_evaluator_ && p.name_ == "cosine-well") {
    // Closed form: w_hat(0) = m, w_hat(+-e_i) = -1/2.
    coefficients_[coefficient_index(zero_k)] = static_cast<double>(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (int s : {-1, 1}) {
        std::vector<int> k(dim_, 0);
        k[i] = s;
        coefficients_[coefficient_index(k)] = -0.5;
      }
    }
  } else if (p.evaluator_ || p.scaled_evaluator_) {
    // Direct quadrature on 4N+1 equispaced nodes per axis; exact for modes |k| <= 2N
    // of trigonometric polynomials of degree <= 2N.
    const std::size_t nodes = side;
    std::vector<std::vector<Complex>> twiddle(side, std::vector<Complex>(nodes));
    for (std::size_t ki = 0; ki < side; ++ki) {
      const int k = static_cast<int>(ki) - reach;
      for (std::size_t j = 0; j < nodes; ++j) {
        const double phase = -kTwoPi * k * static_cast<double>(j) / static_cast<double>(nodes);
        twiddle[ki][j] = {std::cos(phase), std::sin(phase)};
      }
    }
    std::vector<double> x(dim_);
    if (dim_ == 1) {
      std::vector<double> values(nodes);
      for (std::size_t j = 0; j < nodes; ++j) {
        x[0] = lengths_[0] * static_cast<double>(j) / static_cast<double>(nodes);
        values[j] = p.evaluate(x, lengths_);
      }
      for (std::size_t ki = 0; ki < side; ++ki) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < nodes; ++j) s += values[j] * twiddle[ki][j];
        coefficients_[ki] = s / static_cast<double>(nodes);
      }
    } else {
      std::vector<double> values(nodes * nodes);
      for (std::size_t j1 = 0; j1 < nodes; ++j1) {
        for (std::size_t j2 = 0; j2 < nodes; ++j2) {
          x[0] = lengths_[0] * static_cast<double>(j1) / static_cast<double>(nodes);
          x[1] = lengths_[1] * static_cast<double>(j2) / static_cast<double>(nodes);
          values[j1 * nodes + j2] = p.evaluate(x, lengths_);
        }
      }
      std::vector<Complex> partial(nodes * side);
      for (std::size_t j1 = 0; j1 < nodes; ++j1) {
        for (std::size_t k2 = 0; k2 < side; ++k2) {
          Complex s = 0.0;
          for (std::size_t j2 = 0; j2 < nodes; ++j2) s += values[j1 * nodes + j2] * twiddle[k2][j2];
          partial[j1 * side + k2] = s;
        }
      }
      for (std::size_t k1 = 0; k1 < side; ++k1) {
        for (std::size_t k2 = 0; k2 < side; ++k2) {
          Complex s = 0.0;
          for (std::size_t j1 = 0; j1 < nodes; ++j1) s += partial[j1 * side + k2] * twiddle[k1][j1];
          coefficients_[k1 * side + k2] = s / static_cast<double>(nodes * nodes);
        }
      }
    }
  } else {
    for (const auto& c : p.coefficients_) {
      if (c.k.size() != dim_) throw Error(ErrorCode::InvalidArgument, "coefficient index has wrong dimension");
      if (std::any_of(c.k.begin(), c.k.end(), [&](int k) { return k < -reach || k > reach; })) continue;
      coefficients_[coefficient_index(c.k)] += c.value;
    }
  }

  // Enforce w_hat(-k) = conj(w_hat(k)) bit-exactly so the Galerkin matrix is Hermitian.
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t mirror = total - 1 - i;
    if (mirror < i) break;
    const Complex avg = 0.5 * (coefficients_[i] + std::conj(coefficients_[mirror]));
    coefficients_[i] = avg;
    coefficients_[mirror] = std::conj(avg);
  }
  coefficients_[coefficient_index(zero_k)].imag(0.0);

  real_symmetric_ = true;
  diagonal_ = true;
  const std::size_t centre = coefficient_index(zero_k);
  for (std::size_t i = 0; i < total; ++i) {
    if (coefficients_[i].imag() != 0.0) real_symmetric_ = false;
    if (i != centre && coefficients_[i] != 0.0) diagonal_ = false;
  }
}

std::vector<double> torus_eigenvalues(const TorusModel& model) {
  std::vector<double> out;
  out.reserve(model.basis_size());
  for (std::size_t i = 0; i < model.basis_size(); ++i) out.push_back(model.mode_eigenvalue(model.mode(i)));
  std::sort(out.begin(), out.end());
  return out;
}

double exact_heat_trace(std::span<const double> lengths, double t) {
  require_positive_time(t);
  double product = 1.0;
  for (double l : lengths) {
    const double c = t * (kTwoPi / l) * (kTwoPi / l);
    std::vector<double> terms;
    for (long k = 1;; ++k) {
      const double term = std::exp(-c * static_cast<double>(k) * static_cast<double>(k));
      if (term < 1e-16) break;
      terms.push_back(term);
    }
    double s = 0.0;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) s += *it;
    product *= 1.0 + 2.0 * s;
  }
  return product;
}

std::vector<Complex> assemble_galerkin_matrix(const TorusModel& model, double t) {
  require_positive_time(t);
  const std::size_t n = model.basis_size();
  std::vector<Complex> m(n * n);
  std::vector<int> diff(model.dim());
  for (std::size_t i = 0; i < n; ++i) {
    const auto ki = model.mode(i);
    for (std::size_t j = 0; j < n; ++j) {
      const auto kj = model.mode(j);
      for (std::size_t d = 0; d < model.dim(); ++d) diff[d] = ki[d] - kj[d];
      m[i * n + j] = model.coefficient(diff);
    }
    m[i * n + i] += t * model.mode_eigenvalue(ki);
  }
  return m;
}

namespace {

double truncated_trace(const TorusModel& model, double t) {
  const std::size_t n = model.basis_size();
  if (model.diagonal()) {
    const double shift = model.coefficient(std::vector<int>(model.dim(), 0)).real();
    std::vector<double> eig;
    eig.reserve(n);
    for (std::size_t i = 0; i < n; ++i) eig.push_back(t * model.mode_eigenvalue(model.mode(i)) + shift);
    return exp_trace(eig, 1.0);
  }
  const auto m = assemble_galerkin_matrix(model, t);
  if (model.real_symmetric()) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a(i, j) = m[i * n + j].real();
    return exp_trace(symmetric_eigenvalues(a), 1.0);
  }
  // Hermitian A + iB through the real symmetric embedding [[A, -B], [B, A]],
  // whose spectrum is that of A + iB with every eigenvalue doubled.
  Matrix e(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex z = m[i * n + j];
      e(i, j) = e(n + i, n + j) = z.real();
      e(n + i, j) = z.imag();
      e(i, n + j) = -z.imag();
    }
  }
  return 0.5 * exp_trace(symmetric_eigenvalues(e), 1.0);
}

}  // namespace

GalerkinTrace galerkin_schrodinger_trace(const TorusModel& model, double t, const GalerkinOptions& options) {
  require_positive_time(t);
  GalerkinTrace out;
  out.trace = truncated_trace(model, t);
  out.truncation_change = std::numeric_limits<double>::quiet_NaN();
  if (options.verify_truncation) {
    const double refined = truncated_trace(model.with_truncation(2 * model.truncation()), t);
    out.truncation_change = std::abs(refined - out.trace) / out.trace;
    if (out.truncation_change > options.truncation_tolerance) {
      throw Error(ErrorCode::TruncationNotConverged,
                  "doubling N = " + std::to_string(model.truncation()) + " changes the trace at t = " +
                      std::to_string(t) + " by relative " + std::to_string(out.truncation_change));
    }
  }
  return out;
}

double torus_target(const TorusModel& model, std::size_t points) {
  if (points == 0) points = model.dim() == 1 ? 4096 : 512;
  const auto& w = model.potential();
  const auto lengths = model.lengths();
  std::vector<double> x(model.dim());
  double sum = 0.0;
  if (model.dim() == 1) {
    for (std::size_t j = 0; j < points; ++j) {
      x[0] = lengths[0] * static_cast<double>(j) / static_cast<double>(points);
      sum += std::exp(-w.evaluate(x, lengths));
    }
    return sum * lengths[0] / static_cast<double>(points);
  }
  for (std::size_t j1 = 0; j1 < points; ++j1) {
    double row = 0.0;
    for (std::size_t j2 = 0; j2 < points; ++j2) {
      x[0] = lengths[0] * static_cast<double>(j1) / static_cast<double>(points);
      x[1] = lengths[1] * static_cast<double>(j2) / static_cast<double>(points);
      row += std::exp(-w.evaluate(x, lengths));
    }
    sum += row;
  }
  return sum * model.volume() / static_cast<double>(points * points);
}

TorusScan torus_semiclassical_scan(const TorusModel& model, std::span<const double> t_grid,
                                   const TorusScanOptions& options) {
  if (t_grid.empty()) throw Error(ErrorCode::EmptyGrid, "torus scan needs at least one t");
  TorusScan scan;
  auto& report = scan.report;
  report.label = "torus-" + std::to_string(model.dim()) + "d-" + model.potential().name();
  report.t_grid.assign(t_grid.begin(), t_grid.end());
  report.tolerance = options.relative_tolerance;
  report.target = torus_target(model);

  const std::size_t n = t_grid.size();
  report.scaled_traces.resize(n);
  report.abs_errors.resize(n);
  report.gt_bounds.resize(n);
  scan.truncation_changes.resize(n);
  const double half_dim = 0.5 * static_cast<double>(model.dim());
  parallel_for(n, options.threads, [&](std::size_t k) {
    const double t = t_grid[k];
    require_positive_time(t);
    const double psi = std::pow(options.scaling_base * t, half_dim);
    GalerkinTrace tr;
    tr.trace = truncated_trace(model, t);
    tr.truncation_change = std::numeric_limits<double>::quiet_NaN();
    const TorusModel refined_model = model.with_truncation(2 * model.truncation());
    // The refined dense problem is skipped in report mode once it gets expensive.
    if (options.strict_truncation || refined_model.diagonal() ||
        refined_model.basis_size() <= kMaxRefinedBasis) {
      tr.truncation_change = std::abs(truncated_trace(refined_model, t) - tr.trace) / tr.trace;
      if (options.strict_truncation && tr.truncation_change > options.truncation_tolerance) {
        throw Error(ErrorCode::TruncationNotConverged,
                    "doubling N = " + std::to_string(model.truncation()) + " changes the trace at t = " +
                        std::to_string(t) + " by relative " + std::to_string(tr.truncation_change));
      }
    }
    report.scaled_traces[k] = psi * tr.trace;
    report.abs_errors[k] = std::abs(report.scaled_traces[k] - report.target);
    report.gt_bounds[k] = psi * exact_heat_trace(model.lengths(), t) / model.volume() * report.target;
    scan.truncation_changes[k] = tr.truncation_change;
  });
  report.converged = report.abs_errors.back() <= options.relative_tolerance * std::abs(report.target);
  return scan;
}

}  // namespace heatlab
