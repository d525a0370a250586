#pragma once

#include <cmath>
#include <vector>

#include "sklab/field.hpp"
#include "sklab/grid.hpp"

namespace sklab::test {

/// Observed order between consecutive dyadic levels, log2(e_k / e_{k+1}).
inline std::vector<double> pairwise_orders(const std::vector<double>& err) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < err.size(); ++k) out.push_back(std::log2(err[k] / err[k + 1]));
  return out;
}

/// Largest |f - g| over the rows in `rows`.
inline double max_diff(const ScalarField& f, const ScalarField& g, RowRange rows) {
  double m = 0.0;
  for (std::size_t i = rows.begin; i < rows.end; ++i)
    for (std::size_t j = 0; j < f.grid().n_angular(); ++j)
      m = std::max(m, std::abs(f(i, j) - g(i, j)));
  return m;
}

inline double max_diff(const OneForm& a, const OneForm& b, RowRange rows) {
  double m = 0.0;
  const auto& g = a.grid();
  for (std::size_t i = rows.begin; i < rows.end; ++i)
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
      const auto k = g.index(i, j);
      m = std::max({m, std::abs(a.p()[k] - b.p()[k]), std::abs(a.q()[k] - b.q()[k])});
    }
  return m;
}

}  // namespace sklab::test
