#pragma once

// Discrete exterior calculus on the log-polar annulus grid.
//
// Conventions: orientation dx^dy > 0, Hodge star *dx = dy, *dy = -dx. A
// 2-form c dx^dy is represented by its coefficient c (a ScalarField).
// Derivatives are second-order centered in t = log r and theta; the chain
// rule dx^dy = r^2 dt^dtheta maps them back to Cartesian components. Radial
// boundary rows get one-sided second-order values but are dropped from the
// result's trusted range.

#include <cmath>
#include <numbers>
#include <vector>

#include "sklab/field.hpp"

namespace sklab {

namespace detail {

// d/dt at row i of the row-major array v (stride n_angular).
inline double d_t(const AnnulusGrid& g, std::span<const double> v,
                  std::size_t i, std::size_t j) {
  const std::size_t n = g.n_radial();
  const double h2 = 2.0 * g.dt();
  if (i == 0)
    return (-3.0 * v[g.index(0, j)] + 4.0 * v[g.index(1, j)] -
            v[g.index(2, j)]) / h2;
  if (i + 1 == n)
    return (3.0 * v[g.index(n - 1, j)] - 4.0 * v[g.index(n - 2, j)] +
            v[g.index(n - 3, j)]) / h2;
  return (v[g.index(i + 1, j)] - v[g.index(i - 1, j)]) / h2;
}

inline double d_theta(const AnnulusGrid& g, std::span<const double> v,
                      std::size_t i, std::size_t j) {
  return (v[g.index(i, g.jp(j))] - v[g.index(i, g.jm(j))]) /
         (2.0 * g.dtheta());
}

}  // namespace detail

enum class AngularScheme {
  centered,  // three-point stencil, O(dtheta^2)
  spectral,  // Fourier differentiation, exact for trigonometric polynomials
};

namespace detail {

// First row of the circulant matrix of d^2/dtheta^2 on n periodic nodes.
// For even n the Nyquist mode cos(n theta / 2) is kept.
inline std::vector<double> spectral_d2_row(std::size_t n) {
  std::vector<double> c(n, 0.0);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  const std::size_t kmax = (n - 1) / 2;
  for (std::size_t m = 0; m < n; ++m) {
    double s = 0.0;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double kk = static_cast<double>(k);
      s -= 2.0 * kk * kk * std::cos(kk * static_cast<double>(m) * h);
    }
    if (n % 2 == 0) {
      const double nyq = static_cast<double>(n / 2);
      s -= nyq * nyq * (m % 2 == 0 ? 1.0 : -1.0);
    }
    c[m] = s / static_cast<double>(n);
  }
  return c;
}

}  // namespace detail

/// Flat Laplacian e^{-2t}(f_tt + f_thetatheta). Only rows with a full
/// centered stencil are trusted. The radial part is always the centered
/// three-point stencil.
inline ScalarField laplacian(const ScalarField& f,
                             AngularScheme scheme = AngularScheme::centered) {
  const auto& g = f.grid();
  if (g.n_radial() < 3)
    fail(ErrorKind::grid_too_small, "laplacian needs at least 3 radial nodes");
  ScalarField out(g, 0.0);
  const auto v = f.values();
  const std::size_t na = g.n_angular();
  const double it2 = 1.0 / (g.dt() * g.dt());
  const double ith2 = 1.0 / (g.dtheta() * g.dtheta());
  std::vector<double> d2;
  if (scheme == AngularScheme::spectral) d2 = detail::spectral_d2_row(na);
  for (std::size_t i = 1; i + 1 < g.n_radial(); ++i) {
    const double scale = std::exp(-2.0 * g.t(i));
    for (std::size_t j = 0; j < na; ++j) {
      const double c = v[g.index(i, j)];
      const double ftt =
          (v[g.index(i + 1, j)] - 2.0 * c + v[g.index(i - 1, j)]) * it2;
      double fth = 0.0;
      if (scheme == AngularScheme::centered) {
        fth = (v[g.index(i, g.jp(j))] - 2.0 * c + v[g.index(i, g.jm(j))]) * ith2;
      } else {
        for (std::size_t k = 0; k < na; ++k)
          fth += d2[(k + na - j) % na] * v[g.index(i, k)];
      }
      out(i, j) = scale * (ftt + fth);
    }
  }
  out.set_valid(f.valid().shrink(1).intersect(g.interior_rows()));
  return out;
}

/// df with Cartesian components (f_x, f_y).
inline OneForm gradient(const ScalarField& f) {
  const auto& g = f.grid();
  OneForm out(g);
  const auto v = f.values();
  for (std::size_t i = 0; i < g.n_radial(); ++i) {
    const double inv_r = 1.0 / g.radius(i);
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
      const double ft = detail::d_t(g, v, i, j);
      const double fth = detail::d_theta(g, v, i, j);
      const double c = std::cos(g.theta(j));
      const double s = std::sin(g.theta(j));
      const auto k = g.index(i, j);
      out.p()[k] = inv_r * (c * ft - s * fth);
      out.q()[k] = inv_r * (s * ft + c * fth);
    }
  }
  out.set_valid(f.valid().shrink(1));
  return out;
}

/// Coefficient of d(alpha) = (q_x - p_y) dx^dy.
inline ScalarField exterior_derivative(const OneForm& a) {
  const auto& g = a.grid();
  // Polar components alpha = a_t dt + a_theta dtheta.
  std::vector<double> at(g.size()), ath(g.size());
  for (std::size_t i = 0; i < g.n_radial(); ++i) {
    const double r = g.radius(i);
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
      const auto k = g.index(i, j);
      const double c = std::cos(g.theta(j));
      const double s = std::sin(g.theta(j));
      at[k] = r * (a.p()[k] * c + a.q()[k] * s);
      ath[k] = r * (-a.p()[k] * s + a.q()[k] * c);
    }
  }
  ScalarField out(g);
  for (std::size_t i = 0; i < g.n_radial(); ++i) {
    const double inv_r2 = 1.0 / (g.radius(i) * g.radius(i));
    for (std::size_t j = 0; j < g.n_angular(); ++j)
      out(i, j) = inv_r2 * (detail::d_t(g, ath, i, j) -
                            detail::d_theta(g, at, i, j));
  }
  out.set_valid(a.valid().shrink(1));
  return out;
}

/// *(p dx + q dy) = -q dx + p dy.
inline OneForm hodge_star(const OneForm& a) {
  OneForm out(a);
  for (std::size_t k = 0; k < out.p().size(); ++k) {
    out.p()[k] = -a.q()[k];
    out.q()[k] = a.p()[k];
  }
  return out;
}

/// Coefficient of alpha ^ beta: p_a q_b - q_a p_b.
inline ScalarField wedge(const OneForm& a, const OneForm& b) {
  require_same_grid(a.grid(), b.grid());
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < a.p().size(); ++k)
    out.values()[k] = a.p()[k] * b.q()[k] - a.q()[k] * b.p()[k];
  out.set_valid(a.valid().intersect(b.valid()));
  return out;
}

/// Flat pointwise norm p^2 + q^2.
inline ScalarField norm_sq(const OneForm& a) {
  ScalarField out(a.grid());
  for (std::size_t k = 0; k < a.p().size(); ++k)
    out.values()[k] = a.p()[k] * a.p()[k] + a.q()[k] * a.q()[k];
  out.set_valid(a.valid());
  return out;
}

/// d*alpha, i.e. the divergence p_x + q_y.
inline ScalarField d_star(const OneForm& a) {
  return exterior_derivative(hodge_star(a));
}

}  // namespace sklab
