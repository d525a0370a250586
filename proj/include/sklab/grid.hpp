#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>

#include "sklab/error.hpp"

namespace sklab {

using Complex = std::complex<double>;

/// Half-open range of radial rows [begin, end) on which a field's values are
/// trusted. Operators with radial stencils shrink it by one row per side.
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool empty() const { return end <= begin; }

  RowRange shrink(std::size_t k = 1) const {
    if (end < begin + 2 * k) return {begin, begin};
    return {begin + k, end - k};
  }
  RowRange intersect(const RowRange& o) const {
    const std::size_t b = begin > o.begin ? begin : o.begin;
    const std::size_t e = end < o.end ? end : o.end;
    return e > b ? RowRange{b, e} : RowRange{b, b};
  }
  bool operator==(const RowRange&) const = default;
};

/// Log-polar tensor grid on the annulus r_in <= |z - center| <= r_out.
///
/// Radial nodes are uniform in t = log r (both circles included), angular
/// nodes are uniform in theta with period 2*pi (theta_0 = 0). Node (i, j) is
/// stored at linear index i * n_angular + j.
class AnnulusGrid {
public:
  static constexpr std::size_t min_nodes = 8;

  AnnulusGrid(double r_in, double r_out, std::size_t n_radial,
              std::size_t n_angular, Complex center = {0.0, 0.0})
      : r_in_(r_in), r_out_(r_out), n_radial_(n_radial),
        n_angular_(n_angular), center_(center) {
    if (!(r_in > 0.0) || !(r_out > r_in) || !std::isfinite(r_out))
      fail(ErrorKind::invalid_argument,
           "annulus grid requires 0 < r_in < r_out");
    if (n_radial < min_nodes || n_angular < min_nodes)
      fail(ErrorKind::grid_too_small,
           "annulus grid requires at least 8 radial and 8 angular nodes");
    t_in_ = std::log(r_in);
    dt_ = (std::log(r_out) - t_in_) / static_cast<double>(n_radial - 1);
    dtheta_ = 2.0 * std::numbers::pi / static_cast<double>(n_angular);
  }

  double r_in() const { return r_in_; }
  double r_out() const { return r_out_; }
  std::size_t n_radial() const { return n_radial_; }
  std::size_t n_angular() const { return n_angular_; }
  std::size_t size() const { return n_radial_ * n_angular_; }
  Complex center() const { return center_; }

  double dt() const { return dt_; }
  double dtheta() const { return dtheta_; }

  double t(std::size_t i) const {
    return t_in_ + dt_ * static_cast<double>(i);
  }
  double radius(std::size_t i) const {
    if (i == 0) return r_in_;
    if (i + 1 == n_radial_) return r_out_;
    return std::exp(t(i));
  }
  double theta(std::size_t j) const {
    return dtheta_ * static_cast<double>(j);
  }

  std::size_t index(std::size_t i, std::size_t j) const {
    return i * n_angular_ + j;
  }
  std::size_t jp(std::size_t j) const { return j + 1 == n_angular_ ? 0 : j + 1; }
  std::size_t jm(std::size_t j) const { return j == 0 ? n_angular_ - 1 : j - 1; }

  /// Offset from the grid center (polar radius/angle of node (i, j)).
  Complex local(std::size_t i, std::size_t j) const {
    return std::polar(radius(i), theta(j));
  }
  /// Absolute position in the z-plane.
  Complex z(std::size_t i, std::size_t j) const { return center_ + local(i, j); }

  RowRange all_rows() const { return {0, n_radial_}; }
  RowRange interior_rows() const { return {1, n_radial_ - 1}; }

  bool operator==(const AnnulusGrid& o) const {
    return r_in_ == o.r_in_ && r_out_ == o.r_out_ &&
           n_radial_ == o.n_radial_ && n_angular_ == o.n_angular_ &&
           center_ == o.center_;
  }

private:
  double r_in_;
  double r_out_;
  std::size_t n_radial_;
  std::size_t n_angular_;
  Complex center_;
  double t_in_ = 0.0;
  double dt_ = 0.0;
  double dtheta_ = 0.0;
};

}  // namespace sklab
