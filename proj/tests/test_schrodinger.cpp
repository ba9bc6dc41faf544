#include <cmath>
#include <limits>
#include <vector>

#include "helpers.hpp"
#include "heatlab/rng.hpp"
#include "heatlab/schrodinger.hpp"

using namespace heatlab;

TEST_CASE("potential parts") {
  const Potential w({-2.0, 0.0, 3.0});
  CHECK(w.positive_part() == std::vector<double>{0.0, 0.0, 3.0});
  CHECK(w.negative_part() == std::vector<double>{2.0, 0.0, 0.0});
  CHECK(w.min() == -2.0);
  CHECK(w.max_abs() == 3.0);
  CHECK(w.scaled(0.5)(2) == 1.5);
  CHECK_CODE(Potential({1.0, std::numeric_limits<double>::quiet_NaN()}), ErrorCode::InvalidArgument);
}

TEST_CASE("schrodinger spectra") {
  const auto free = schrodinger_spectrum(validate(generators::path(6)), Potential::constant(6, 0.0));
  CHECK(std::abs(free[0]) < 1e-13);
  CHECK(schrodinger_spectrum(isolated(1.0), Potential({5.0})) == std::vector<double>{5.0});
  const auto two = schrodinger_spectrum(two_vertex(), Potential({0.0, 2.0}));
  CHECK(two[0] == doctest::Approx(2.0 - std::sqrt(2.0)));
  CHECK(two[1] == doctest::Approx(2.0 + std::sqrt(2.0)));
}

TEST_CASE("spectrum matches Jacobi with nonuniform measure") {
  const auto g = validate(generators::random_connected({.n = 14, .seed = 31}));
  std::vector<double> values(g.size());
  Rng rng(4);
  for (double& v : values) v = 4.0 * rng.uniform() - 1.0;
  const Potential w(values);
  auto dense = to_dense(symmetric_generator(g));
  for (std::size_t i = 0; i < g.size(); ++i) dense[i][i] += values[i];
  const auto ref = oracle::jacobi_eigenvalues(dense);
  const auto ours = schrodinger_spectrum(g, w);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(ours[i] == doctest::Approx(ref[i]).epsilon(1e-11));
}

TEST_CASE("semigroup traces") {
  CHECK(trace_semigroup(two_vertex(), Potential::constant(2, 0.0), 1.0) ==
        doctest::Approx(1.0 + std::exp(-2.0)));
  CHECK(trace_semigroup(isolated(1.0), Potential({std::log(2.0)}), 1.0) == doctest::Approx(0.5));
  const auto g = validate(generators::random_connected({.n = 9, .seed = 2}));
  CHECK(trace_semigroup(g, Potential::constant(9, 1.0), 1e-9) == doctest::Approx(9.0).epsilon(1e-7));
  CHECK_CODE(trace_semigroup(g, Potential::constant(9, 1.0), 0.0), ErrorCode::NonpositiveTime);
}

TEST_CASE("geometric grid") {
  const auto grid = geometric_grid();
  REQUIRE(grid.size() == 20);
  CHECK(grid.front() == 1.0);
  CHECK(grid.back() == std::ldexp(1.0, -19));
  CHECK(geometric_grid(2.0, 0.1, 3) == std::vector<double>{2.0, 0.2, 2.0 * 0.1 * 0.1});
}

TEST_CASE("semiclassical scan examples") {
  const auto grid = geometric_grid(1.0, 0.5, 20);

  SUBCASE("isolated vertex is constant") {
    const auto g = isolated(1.0);
    const auto r = semiclassical_scan(g, Potential({0.7}), AsymptoticControlPair::for_graph(g), grid);
    for (double v : r.scaled_traces) CHECK(v == doctest::Approx(std::exp(-0.7)).epsilon(1e-14));
    CHECK(r.target == doctest::Approx(std::exp(-0.7)));
  }
  SUBCASE("two vertex with ln 2") {
    const auto g = two_vertex();
    const auto r = semiclassical_scan(g, Potential({0.0, std::log(2.0)}), AsymptoticControlPair::for_graph(g), grid);
    CHECK(r.target == doctest::Approx(1.5));
    CHECK(r.converged);
    CHECK(std::abs(r.scaled_traces.back() - 1.5) < 1e-5);
    CHECK(r.errors_nonincreasing_tail(10));
    CHECK(r.max_gt_violation() <= 1e-10);
    // Each scaled trace against a 2x2 Jacobi oracle.
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double t = grid[i];
      oracle::Dense m{{t, -t}, {-t, t + std::log(2.0)}};
      const auto ev = oracle::jacobi_eigenvalues(m);
      CHECK(r.scaled_traces[i] == doctest::Approx(std::exp(-ev[0]) + std::exp(-ev[1])).epsilon(1e-12));
    }
  }
  SUBCASE("K5 free") {
    const auto g = validate(generators::complete(5));
    const auto r = semiclassical_scan(g, Potential::constant(5, 0.0), AsymptoticControlPair::for_graph(g), grid);
    CHECK(r.target == doctest::Approx(5.0));
    CHECK(r.final_relative_error() < 1e-4);
  }
  SUBCASE("nonuniform measure target") {
    const auto g = validate(generators::random_connected({.n = 12, .seed = 44}));
    const Potential w(std::vector<double>(12, 0.25));
    const auto r = semiclassical_scan(g, w, AsymptoticControlPair::for_graph(g), grid, {.threads = 3});
    CHECK(r.target == doctest::Approx(12.0 * std::exp(-0.25)));
    CHECK(r.final_relative_error() < 1e-3);
    const auto serial = semiclassical_scan(g, w, AsymptoticControlPair::for_graph(g), grid);
    CHECK(serial.scaled_traces == r.scaled_traces);
  }
  SUBCASE("empty grid") {
    const auto g = two_vertex();
    CHECK_CODE(semiclassical_scan(g, Potential({0.0, 0.0}), AsymptoticControlPair::for_graph(g), {}),
               ErrorCode::EmptyGrid);
  }
}

TEST_CASE("golden thompson") {
  SUBCASE("constant potential is the equality case") {
    const auto g = validate(generators::random_connected({.n = 10, .seed = 6}));
    for (double c : {-1.0, 0.0, 2.5}) {
      const auto gt = golden_thompson_check(g, Potential::constant(10, c), 0.7);
      CHECK(std::abs(gt.lhs - gt.rhs) <= 1e-12 * std::max(1.0, gt.rhs));
    }
  }
  SUBCASE("two vertex closed form") {
    const auto gt = golden_thompson_check(two_vertex(), Potential({0.0, 2.0}), 1.0);
    CHECK(gt.lhs == doctest::Approx(std::exp(-(2 - std::sqrt(2.0))) + std::exp(-(2 + std::sqrt(2.0)))));
    CHECK(gt.rhs == doctest::Approx((1 + std::exp(-2.0)) / 2 * (1 + std::exp(-2.0))));
    CHECK(gt.lhs < gt.rhs);
  }
  SUBCASE("isolated vertex") {
    for (double t : {0.1, 1.0, 5.0}) {
      const auto gt = golden_thompson_check(isolated(2.0), Potential({1.3}), t);
      CHECK(gt.lhs == doctest::Approx(gt.rhs).epsilon(1e-14));
    }
  }
  SUBCASE("random sweep") {
    const auto g = validate(generators::random_connected({.n = 8, .seed = 17}));
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
      std::vector<double> values(8);
      for (double& v : values) v = 6.0 * rng.uniform() - 2.0;
      const double t = 0.05 + 3.0 * rng.uniform();
      CHECK(golden_thompson_check(g, Potential(values), t).holds());
    }
  }
}
