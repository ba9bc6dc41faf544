#pragma once

#include <doctest.h>

#include <string>

#include "heatlab/errors.hpp"
#include "heatlab/graph.hpp"
#include "heatlab/linalg.hpp"
#include "oracles.hpp"

#define CHECK_CODE(expr, expected)                      \
  do {                                                  \
    bool thrown_ = false;                               \
    try {                                               \
      (void)(expr);                                     \
    } catch (const heatlab::Error& e_) {                \
      thrown_ = true;                                   \
      CHECK_MESSAGE(e_.code() == (expected), e_.what()); \
    }                                                   \
    CHECK_MESSAGE(thrown_, "no error thrown");          \
  } while (0)

inline oracle::Dense to_dense(const heatlab::Matrix& m) {
  oracle::Dense d(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

inline heatlab::WeightedGraph two_vertex(double b = 1.0, double mu1 = 1.0, double mu2 = 1.0) {
  return heatlab::validate(heatlab::generators::two_vertex(b, mu1, mu2));
}

inline heatlab::WeightedGraph isolated(double mu) {
  return heatlab::validate(heatlab::generators::single_vertex(mu));
}

inline std::string fixture(const std::string& rel) { return std::string(HEATLAB_FIXTURES) + "/" + rel; }
