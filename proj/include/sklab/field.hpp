#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "sklab/grid.hpp"

namespace sklab {

/// Node-collocated real function on an annulus grid.
class ScalarField {
public:
  explicit ScalarField(AnnulusGrid grid, double fill = 0.0)
      : grid_(std::move(grid)), values_(grid_.size(), fill),
        valid_(grid_.all_rows()) {}

  ScalarField(AnnulusGrid grid, std::vector<double> values, RowRange valid)
      : grid_(std::move(grid)), values_(std::move(values)), valid_(valid) {
    if (values_.size() != grid_.size())
      fail(ErrorKind::grid_mismatch, "scalar field size does not match grid");
  }

  /// Samples f(z) at every node (absolute z).
  template <class F>
  static ScalarField sample(const AnnulusGrid& grid, F&& f) {
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.n_radial(); ++i)
      for (std::size_t j = 0; j < grid.n_angular(); ++j)
        out.values_[grid.index(i, j)] = f(grid.z(i, j));
    return out;
  }

  const AnnulusGrid& grid() const { return grid_; }
  const RowRange& valid() const { return valid_; }
  void set_valid(RowRange r) { valid_ = r; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double operator()(std::size_t i, std::size_t j) const {
    return values_[grid_.index(i, j)];
  }
  double& operator()(std::size_t i, std::size_t j) {
    return values_[grid_.index(i, j)];
  }

  /// Pointwise map; keeps the validity range.
  template <class F>
  ScalarField map(F&& f) const {
    ScalarField out(*this);
    for (double& v : out.values_) v = f(v);
    return out;
  }

private:
  AnnulusGrid grid_;
  std::vector<double> values_;
  RowRange valid_;
};

/// 1-form p dx + q dy sampled at the nodes.
class OneForm {
public:
  explicit OneForm(AnnulusGrid grid)
      : grid_(std::move(grid)), p_(grid_.size(), 0.0), q_(grid_.size(), 0.0),
        valid_(grid_.all_rows()) {}

  OneForm(AnnulusGrid grid, std::vector<double> p, std::vector<double> q,
          RowRange valid)
      : grid_(std::move(grid)), p_(std::move(p)), q_(std::move(q)),
        valid_(valid) {
    if (p_.size() != grid_.size() || q_.size() != grid_.size())
      fail(ErrorKind::grid_mismatch, "one-form size does not match grid");
  }

  /// Samples f(z) -> (p, q) at every node.
  template <class F>
  static OneForm sample(const AnnulusGrid& grid, F&& f) {
    OneForm out(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto [p, q] = f(grid.z(k / grid.n_angular(), k % grid.n_angular()));
      out.p_[k] = p;
      out.q_[k] = q;
    }
    return out;
  }

  const AnnulusGrid& grid() const { return grid_; }
  const RowRange& valid() const { return valid_; }
  void set_valid(RowRange r) { valid_ = r; }

  std::span<const double> p() const { return p_; }
  std::span<const double> q() const { return q_; }
  std::span<double> p() { return p_; }
  std::span<double> q() { return q_; }

private:
  AnnulusGrid grid_;
  std::vector<double> p_;
  std::vector<double> q_;
  RowRange valid_;
};

/// Complex-valued function on the grid (used for the cubic form coefficient).
class ComplexField {
public:
  explicit ComplexField(AnnulusGrid grid)
      : grid_(std::move(grid)), re_(grid_.size(), 0.0), im_(grid_.size(), 0.0) {}

  template <class F>
  static ComplexField sample(const AnnulusGrid& grid, F&& f) {
    ComplexField out(grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Complex v = f(grid.z(k / grid.n_angular(), k % grid.n_angular()));
      out.re_[k] = v.real();
      out.im_[k] = v.imag();
    }
    return out;
  }

  const AnnulusGrid& grid() const { return grid_; }
  std::span<const double> re() const { return re_; }
  std::span<const double> im() const { return im_; }
  std::span<double> re() { return re_; }
  std::span<double> im() { return im_; }

  Complex operator()(std::size_t i, std::size_t j) const {
    const auto k = grid_.index(i, j);
    return {re_[k], im_[k]};
  }

private:
  AnnulusGrid grid_;
  std::vector<double> re_;
  std::vector<double> im_;
};

inline void require_same_grid(const AnnulusGrid& a, const AnnulusGrid& b) {
  if (!(a == b)) fail(ErrorKind::grid_mismatch, "fields live on different grids");
}

// Pointwise arithmetic. Results are valid on the intersection of the inputs'
// validity ranges.

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out(a);
  for (std::size_t k = 0; k < out.values().size(); ++k)
    out.values()[k] += b.values()[k];
  out.set_valid(a.valid().intersect(b.valid()));
  return out;
}

inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out(a);
  for (std::size_t k = 0; k < out.values().size(); ++k)
    out.values()[k] -= b.values()[k];
  out.set_valid(a.valid().intersect(b.valid()));
  return out;
}

inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out(a);
  for (std::size_t k = 0; k < out.values().size(); ++k)
    out.values()[k] *= b.values()[k];
  out.set_valid(a.valid().intersect(b.valid()));
  return out;
}

inline ScalarField operator*(double c, const ScalarField& a) {
  return a.map([c](double v) { return c * v; });
}

inline OneForm operator+(const OneForm& a, const OneForm& b) {
  require_same_grid(a.grid(), b.grid());
  OneForm out(a);
  for (std::size_t k = 0; k < out.p().size(); ++k) {
    out.p()[k] += b.p()[k];
    out.q()[k] += b.q()[k];
  }
  out.set_valid(a.valid().intersect(b.valid()));
  return out;
}

inline OneForm operator-(const OneForm& a, const OneForm& b) {
  require_same_grid(a.grid(), b.grid());
  OneForm out(a);
  for (std::size_t k = 0; k < out.p().size(); ++k) {
    out.p()[k] -= b.p()[k];
    out.q()[k] -= b.q()[k];
  }
  out.set_valid(a.valid().intersect(b.valid()));
  return out;
}

inline OneForm operator*(double c, const OneForm& a) {
  OneForm out(a);
  for (std::size_t k = 0; k < out.p().size(); ++k) {
    out.p()[k] *= c;
    out.q()[k] *= c;
  }
  return out;
}

/// f * alpha, pointwise.
inline OneForm operator*(const ScalarField& f, const OneForm& a) {
  require_same_grid(f.grid(), a.grid());
  OneForm out(a);
  for (std::size_t k = 0; k < out.p().size(); ++k) {
    out.p()[k] *= f.values()[k];
    out.q()[k] *= f.values()[k];
  }
  out.set_valid(a.valid().intersect(f.valid()));
  return out;
}

/// Max |f| over the given rows (all angular nodes). NaN if the range is empty.
inline double max_abs(const ScalarField& f, RowRange rows) {
  if (rows.empty()) return std::numeric_limits<double>::quiet_NaN();
  const auto& g = f.grid();
  double m = 0.0;
  for (std::size_t i = rows.begin; i < rows.end; ++i)
    for (std::size_t j = 0; j < g.n_angular(); ++j)
      m = std::max(m, std::abs(f(i, j)));
  return m;
}

/// Interior L-infinity norm: max |f| over the trusted rows, boundary circles
/// always excluded.
inline double interior_max_abs(const ScalarField& f) {
  return max_abs(f, f.valid().intersect(f.grid().interior_rows()));
}

}  // namespace sklab
