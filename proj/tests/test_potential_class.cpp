#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "heatlab/potential_class.hpp"
#include "heatlab/schrodinger.hpp"

using namespace heatlab;

TEST_CASE("gauss legendre") {
  const auto rule = gauss_legendre(32, 0.0, 2.0);
  double weights = 0.0, cubic = 0.0, high = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    weights += rule.weights[i];
    cubic += rule.weights[i] * std::pow(rule.nodes[i], 3);
    high += rule.weights[i] * std::pow(rule.nodes[i], 63);
  }
  CHECK(weights == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cubic == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(high == doctest::Approx(std::pow(2.0, 64) / 64).epsilon(1e-12));
  double e = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) e += rule.weights[i] * std::exp(-rule.nodes[i]);
  CHECK(e == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("kato modulus") {
  const auto g = two_vertex();
  CHECK(kato_modulus(g, Potential::constant(2, 0.0), 1.0) == 0.0);
  // sup_x int_0^1 (1 + e^{-2s})/2 ds
  const double exact = 0.5 + (1.0 - std::exp(-2.0)) / 4.0;
  CHECK(std::abs(kato_modulus(g, Potential({1.0, 0.0}), 1.0) - exact) < 1e-8);
  CHECK(kato_modulus(g, Potential({1.0, 0.0}), 1.0) == doctest::Approx(0.7161661791908468).epsilon(1e-12));

  const auto r = validate(generators::random_connected({.n = 9, .seed = 10}));
  const Potential w({-3.0, 1.0, 0.5, 2.0, 0.0, -1.0, 4.0, 0.2, 1.1});
  for (double t : {0.01, 0.3, 2.0}) {
    const double k = kato_modulus(r, w, t);
    CHECK(k <= t * w.max_abs() + 1e-12);
    CHECK(k >= 0.0);
  }
  CHECK(kato_modulus(r, w, 0.01) < kato_modulus(r, w, 0.3));
}

TEST_CASE("infinitesimal class witness") {
  const auto g = two_vertex();
  CHECK(infinitesimal_class_witness(g, Potential::constant(2, 0.0), 0.5) == 0.0);
  CHECK(infinitesimal_class_witness(g, Potential({4.0, -1.0}), 0.0) == doctest::Approx(4.0));
  CHECK(infinitesimal_class_witness(g, Potential({4.0, 0.0}), 1.0) == doctest::Approx(1.0 + std::sqrt(5.0)));
  CHECK_CODE(infinitesimal_class_witness(g, Potential({4.0, 0.0}), -1.0), ErrorCode::InvalidArgument);
}

TEST_CASE("admissibility verdicts") {
  SUBCASE("zero potential with negative curvature bound diverges") {
    const auto r = ricci_admissibility(GrowthProfile::zero_potential(2, 1.0));
    CHECK(r.series.verdict == Admissibility::Inadmissible);
  }
  SUBCASE("gaussian decay") {
    const auto r = ricci_admissibility(GrowthProfile::quadratic(3, 1.0, 1.0));
    CHECK(r.series.verdict == Admissibility::Admissible);
    CHECK(r.doubling.verdict == Admissibility::Admissible);
    CHECK(r.series.tail_bound < 1e-9);
  }
  SUBCASE("p-series") {
    const auto r = ricci_admissibility(GrowthProfile::power(1, 0.0, 3.0));
    CHECK(r.series.verdict == Admissibility::Admissible);
    CHECK(r.series.window_slope < -1.05);
  }
  SUBCASE("harmonic series stays undecided") {
    CHECK(ricci_admissibility(GrowthProfile::power(1, 0.0, 2.0)).series.verdict == Admissibility::Undecided);
  }
  SUBCASE("linear growth against curvature") {
    CHECK(ricci_admissibility(GrowthProfile::linear(2, 1.0, 1.0)).series.verdict == Admissibility::Inadmissible);
    CHECK(ricci_admissibility(GrowthProfile::linear(2, 1.0, 3.0)).series.verdict == Admissibility::Admissible);
  }
  SUBCASE("flat zero potential") {
    // A = 0, c_k = 1: terms k^m never shrink
    CHECK(ricci_admissibility(GrowthProfile::zero_potential(1, 0.0)).series.verdict == Admissibility::Inadmissible);
  }
  SUBCASE("table") {
    std::vector<double> c;
    for (int k = 2; k <= 30; ++k) c.push_back(std::exp(-0.5 * k * k));
    const auto r = ricci_admissibility(GrowthProfile::table(2, 1.0, c));
    CHECK(r.series.verdict == Admissibility::Admissible);
    CHECK(r.series.partial_sums.size() == c.size());
  }
  SUBCASE("stable under doubling k_max") {
    for (const auto& [a, b] : {std::pair{GrowthProfile::zero_potential(2, 1.0, 200), GrowthProfile::zero_potential(2, 1.0, 400)},
                               std::pair{GrowthProfile::quadratic(2, 1.0, 1.0, 200), GrowthProfile::quadratic(2, 1.0, 1.0, 400)}}) {
      CHECK(ricci_admissibility(a).series.verdict == ricci_admissibility(b).series.verdict);
    }
  }
  CHECK(to_string(Admissibility::Admissible) == "admissible");
  CHECK(to_string(Admissibility::Inadmissible) == "inadmissible");
  CHECK(to_string(Admissibility::Undecided) == "undecided");
}

TEST_CASE("partial sums") {
  const auto r = ricci_admissibility(GrowthProfile::power(1, 0.0, 3.0, 50));
  double s = 0.0;
  for (int k = 2; k <= 50; ++k) s += std::pow(k, -2.0);
  CHECK(r.series.partial_sums.back() == doctest::Approx(s).epsilon(1e-13));
  // doubling form multiplies each term by 2^m
  CHECK(r.doubling.partial_sums.back() == doctest::Approx(2.0 * s).epsilon(1e-13));
}
