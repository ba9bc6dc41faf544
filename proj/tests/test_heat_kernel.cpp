#include <cmath>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "heatlab/heat_kernel.hpp"

using namespace heatlab;

namespace {

// exp(-tH)/mu(y) through the Taylor oracle.
oracle::Dense oracle_kernel(const WeightedGraph& g, double t) {
  auto h = to_dense(generator_matrix(g));
  for (auto& row : h)
    for (double& v : row) v *= -t;
  auto e = oracle::expm(h);
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t y = 0; y < g.size(); ++y) e[x][y] /= g.mu(y);
  return e;
}

}  // namespace

TEST_CASE("two vertex closed form") {
  const auto g = two_vertex();
  for (double t : {1e-3, 0.1, 0.5, 1.0, 3.0, 20.0}) {
    const auto p = heat_semigroup(g, t);
    CHECK(p(0, 0) == doctest::Approx((1 + std::exp(-2 * t)) / 2).epsilon(1e-13));
    CHECK(p(0, 1) == doctest::Approx((1 - std::exp(-2 * t)) / 2).epsilon(1e-12));
    CHECK(p.truncation_error_bound <= 1e-14);
  }
}

TEST_CASE("isolated vertex kernel is 1/mu") {
  const auto g = isolated(3.0);
  for (double t : {0.01, 1.0, 100.0}) CHECK(heat_semigroup(g, t)(0, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("uniformization matches Taylor oracle") {
  const auto g = validate(generators::random_connected({.n = 12, .seed = 77}));
  for (double t : {0.01, 0.7, 5.0}) {
    const auto p = heat_semigroup(g, t);
    const auto ref = oracle_kernel(g, t);
    double worst = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x)
      for (std::size_t y = 0; y < g.size(); ++y) worst = std::max(worst, std::abs(p(x, y) - ref[x][y]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("short time diagonal tends to 1/mu") {
  const auto g = validate(generators::random_connected({.n = 10, .seed = 3}));
  const auto p = heat_semigroup(g, 1e-7);
  for (VertexId x = 0; x < g.size(); ++x) CHECK(p(x, x) * g.mu(x) == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("heat semigroup errors") {
  CHECK_CODE(heat_semigroup(two_vertex(), 0.0), ErrorCode::NonpositiveTime);
  CHECK_CODE(heat_semigroup(two_vertex(), -1.0), ErrorCode::NonpositiveTime);
  RawGraph split;
  split.add_vertex("a", 1.0);
  split.add_vertex("b", 1.0);
  CHECK_CODE(heat_semigroup(validate(split), 1.0), ErrorCode::DisconnectedGraph);
  const auto p = heat_semigroup(validate(split), 1.0, {.require_connected = false});
  CHECK(p(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("poisson weights") {
  const auto w = poisson_log_pmf(3.5, 80);
  double sum = 0.0;
  for (double l : w) sum += std::exp(l);
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::exp(w[2]) == doctest::Approx(std::exp(-3.5) * 3.5 * 3.5 / 2));
  const auto big = poisson_log_pmf(5000.0, 6000);
  CHECK(std::isfinite(big[5000]));
}

TEST_CASE("axioms on two vertex graph") {
  const auto g = two_vertex();
  const auto half = heat_semigroup(g, 0.5);
  const auto r = verify_axioms(half, half, heat_semigroup(g, 1.0));
  CHECK(r.chapman_kolmogorov_defect < 1e-12);
  CHECK(r.symmetry_defect == 0.0);
  CHECK(r.mass_excess <= 1e-12);
  CHECK(r.min_mass >= 1.0 - 1e-12);
  CHECK(r.passes());
}

TEST_CASE("axioms with unequal measure") {
  const auto g = validate(generators::random_connected({.n = 15, .seed = 8}));
  const auto r = verify_axioms(heat_semigroup(g, 0.3), heat_semigroup(g, 0.9), heat_semigroup(g, 1.2));
  CHECK(r.chapman_kolmogorov_defect < 1e-10);
  CHECK(r.symmetry_defect < 1e-12);
  CHECK(std::abs(r.mass_excess) <= 1e-12);
  CHECK(r.pointwise_bound_excess <= 1e-12);
  CHECK(r.min_entry > 0.0);
}

TEST_CASE("axioms reject mismatched tables") {
  const auto a = heat_semigroup(two_vertex(), 0.5);
  const auto b = heat_semigroup(two_vertex(2.0), 0.5);
  CHECK_CODE(verify_axioms(a, b, heat_semigroup(two_vertex(), 1.0)), ErrorCode::GraphMismatch);
  CHECK_CODE(verify_axioms(a, a, heat_semigroup(two_vertex(), 2.0)), ErrorCode::GraphMismatch);
}

TEST_CASE("killed kernel on a single vertex") {
  const auto g = validate(generators::path(5));
  const std::vector<VertexId> middle{2};
  const auto p = killed_heat_kernel(g, middle, 0.8);
  CHECK(p(0, 0) == doctest::Approx(std::exp(-2.0 * 0.8)).epsilon(1e-13));
}

TEST_CASE("killed kernel matches oracle") {
  const auto g = validate(generators::random_connected({.n = 9, .seed = 12}));
  const std::vector<VertexId> k{0, 2, 3, 5, 8};
  const double t = 0.6;
  const auto p = killed_heat_kernel(g, k, t);
  const auto h = generator_matrix(g);
  oracle::Dense restricted = oracle::zeros(k.size());
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j) restricted[i][j] = -t * h(k[i], k[j]);
  const auto e = oracle::expm(restricted);
  for (std::size_t i = 0; i < k.size(); ++i)
    for (std::size_t j = 0; j < k.size(); ++j) CHECK(p(i, j) == doctest::Approx(e[i][j] / g.mu(k[j])).epsilon(1e-11));
}

TEST_CASE("minimal kernel sequence") {
  const auto g = validate(generators::random_connected({.n = 6, .seed = 21}));
  const Exhaustion ex(g, {{0}, {0, 1, 2}, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4, 5}});
  for (double t : {0.1, 1.0, 4.0}) {
    const auto seq = minimal_heat_kernel(g, ex, t, 0, 0);
    CHECK(seq.nondecreasing);
    for (std::size_t i = 1; i < seq.values.size(); ++i) CHECK(seq.values[i - 1] <= seq.values[i]);
    CHECK(seq.values.back() == doctest::Approx(heat_semigroup(g, t)(0, 0)).epsilon(1e-12));
  }
  const auto off = minimal_heat_kernel(g, ex, 1.0, 0, 0);
  CHECK(off.values.front() == doctest::Approx(std::exp(-weighted_degree(g, 0)) / g.mu(0)).epsilon(1e-12));
  CHECK_CODE(minimal_heat_kernel(g, ex, 1.0, 0, 5), ErrorCode::VertexOutsideExhaustion);
  CHECK_CODE(Exhaustion(g, {{0, 1}, {1, 2}}), ErrorCode::InvalidArgument);
}

TEST_CASE("on diagonal scan") {
  const auto g = two_vertex();
  const std::vector<double> grid{1.0, 0.1};
  const auto scan = on_diagonal_scan(g, 0, grid);
  CHECK(scan[1].second == doctest::Approx(0.90937).epsilon(1e-5));
  CHECK(scan[1].second == doctest::Approx((1 + std::exp(-0.2)) / 2));

  const auto k3 = validate(generators::complete(3));
  const std::vector<double> fine{1.0, 0.1, 0.01, 1e-3, 1e-4};
  const auto k3scan = on_diagonal_scan(k3, 1, fine);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    CHECK(k3scan[i].second == doctest::Approx((1 + 2 * std::exp(-3 * fine[i])) / 3).epsilon(1e-13));
    if (i > 0) CHECK(k3scan[i - 1].second < k3scan[i].second);
  }
  for (const auto& [t, v] : on_diagonal_scan(isolated(4.0), 0, fine)) CHECK(v == doctest::Approx(1.0));

  const std::vector<double> bad{0.1, 0.5};
  CHECK_CODE(on_diagonal_scan(g, 0, bad), ErrorCode::InvalidArgument);
}

TEST_CASE("kernel cache") {
  KernelCache cache;
  const auto g = two_vertex();
  const auto a = cache.get(g, 0.5);
  const auto b = cache.get(g, 0.5);
  CHECK(a.get() == b.get());
  cache.get(g, 1.0);
  CHECK(cache.size() == 2);
  CHECK(cache.misses() == 2);
}

TEST_CASE("binary kernel round trip") {
  const auto g = validate(generators::path(4, 1.0, 2.0));
  const auto p = heat_semigroup(g, 0.25);
  std::stringstream buf;
  write_kernel_binary(buf, p);
  const auto [t, values] = read_kernel_binary(buf);
  CHECK(t == 0.25);
  CHECK(values == p.values);

  std::stringstream junk("HKT0garbage");
  CHECK_CODE(read_kernel_binary(junk), ErrorCode::InputError);

  std::ostringstream csv;
  write_kernel_csv(csv, p);
  CHECK(csv.str().rfind("x,", 0) == 0);
}
