#pragma once

// Assembly of the special Kähler connection from (h, a, u) and numerical
// checks of the structure equations it must satisfy.
//
// With rho-form dh + a phi (exact) and du (finite differences):
//
//   om11 =  (e^u / 2)(dh + a phi) - du / 2
//   om22 = -(e^u / 2)(dh + a phi) - du / 2
//   om12 = -*om11,  om21 = *om22
//
// All residual norms are interior L-infinity norms over the trusted rows.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "sklab/catalog.hpp"
#include "sklab/harmonic.hpp"
#include "sklab/operators.hpp"

namespace sklab {

struct ConnectionForms {
  OneForm om11;
  OneForm om12;
  OneForm om21;
  OneForm om22;

  /// Completes (om11, om22) with om12 = -*om11, om21 = *om22.
  static ConnectionForms from_diagonal(OneForm om11, OneForm om22) {
    OneForm om12 = -1.0 * hodge_star(om11);
    OneForm om21 = hodge_star(om22);
    return {std::move(om11), std::move(om12), std::move(om21), std::move(om22)};
  }
};

inline ConnectionForms build_connection(const HarmonicSpec& spec,
                                        const ScalarField& u) {
  const auto& g = u.grid();
  for (double v : u.values())
    if (!std::isfinite(v))
      fail(ErrorKind::invalid_argument, "u must be finite on the grid");
  const OneForm rho_form = sample_dh(spec, g);
  const OneForm du = gradient(u);
  const ScalarField half_eu = u.map([](double v) { return 0.5 * std::exp(v); });
  const OneForm sym = half_eu * rho_form;
  const OneForm half_du = 0.5 * du;
  return ConnectionForms::from_diagonal(sym - half_du, -1.0 * sym - half_du);
}

/// max |om11 + om22 + du|: the connection preserves the Kähler form.
inline double trace_residual(const ConnectionForms& c, const ScalarField& u) {
  const OneForm t = c.om11 + c.om22 + gradient(u);
  double m = 0.0;
  for (std::size_t k = 0; k < t.p().size(); ++k)
    m = std::max({m, std::abs(t.p()[k]), std::abs(t.q()[k])});
  return m;
}

/// Residuals of the four flatness equations
///   d om11 = om11 ^ om22,   d*om11 = -*om11 ^ om22 - |om11|^2,
///   d om22 = om22 ^ om11,   d*om22 = -*om22 ^ om11 - |om22|^2.
struct FlatnessReport {
  double d_om11 = 0.0;
  double d_star_om11 = 0.0;
  double d_om22 = 0.0;
  double d_star_om22 = 0.0;

  double max() const { return std::max({d_om11, d_star_om11, d_om22, d_star_om22}); }
};

inline FlatnessReport flatness_report(const ConnectionForms& c) {
  auto pair = [](const OneForm& a, const OneForm& b) {
    const ScalarField e1 = exterior_derivative(a) - wedge(a, b);
    const ScalarField e2 = d_star(a) + wedge(hodge_star(a), b) + norm_sq(a);
    return std::pair{interior_max_abs(e1), interior_max_abs(e2)};
  };
  const auto [a1, a2] = pair(c.om11, c.om22);
  const auto [b1, b2] = pair(c.om22, c.om11);
  return {a1, a2, b1, b2};
}

inline double flatness_residual(const ConnectionForms& c) {
  return flatness_report(c).max();
}

/// Residuals of the two scalar equations of (nabla_X I)Y = (nabla_Y I)X at
/// (X, Y) = (d/dx, d/dy):
///   om11(dx) - om22(dx) + om12(dy) + om21(dy) = 0
///   om12(dx) + om21(dx) - om11(dy) + om22(dy) = 0
struct SymmetryReport {
  double first = 0.0;
  double second = 0.0;
  double max() const { return std::max(first, second); }
};

inline SymmetryReport symmetry_report(const ConnectionForms& c) {
  SymmetryReport r;
  for (std::size_t k = 0; k < c.om11.p().size(); ++k) {
    const double e1 = c.om11.p()[k] - c.om22.p()[k] + c.om12.q()[k] + c.om21.q()[k];
    const double e2 = c.om12.p()[k] + c.om21.p()[k] - c.om11.q()[k] + c.om22.q()[k];
    r.first = std::max(r.first, std::abs(e1));
    r.second = std::max(r.second, std::abs(e2));
  }
  return r;
}

inline double symmetry_residual(const ConnectionForms& c) {
  return symmetry_report(c).max();
}

/// Delta u - |dh + a phi|^2 e^{2u}, interior rows trusted.
inline ScalarField kazdan_warner_residual_field(const HarmonicSpec& spec,
                                                const ScalarField& u) {
  const ScalarField rhs = sample_rho(spec, u.grid()) *
                          u.map([](double v) { return std::exp(2.0 * v); });
  return laplacian(u) - rhs;
}

inline double kazdan_warner_residual(const HarmonicSpec& spec,
                                     const ScalarField& u) {
  return interior_max_abs(kazdan_warner_residual_field(spec, u));
}

/// Residuals of the (u, eta) system with eta = (dh - e^{-u} du)/2 + (a/2) phi:
///   d eta = 0
///   *d*eta = 2*(*eta ^ du) - 2 e^u |eta|^2
///   Delta u = |2 eta + e^{-u} du|^2 e^{2u}
struct EtaReport {
  double closed = 0.0;
  double coclosed = 0.0;
  double kazdan_warner = 0.0;
  double max() const { return std::max({closed, coclosed, kazdan_warner}); }
};

inline EtaReport check_eta_system(const HarmonicSpec& spec, const ScalarField& u) {
  const auto& g = u.grid();
  const OneForm du = gradient(u);
  const ScalarField emu = u.map([](double v) { return std::exp(-v); });
  const ScalarField eu = u.map([](double v) { return std::exp(v); });
  const OneForm eta = 0.5 * (sample_dh(spec, g) - emu * du);

  const ScalarField r1 = exterior_derivative(eta);
  const ScalarField r2 = d_star(eta) - 2.0 * wedge(hodge_star(eta), du) +
                         2.0 * (eu * norm_sq(eta));
  const OneForm combo = 2.0 * eta + emu * du;
  const ScalarField r3 =
      laplacian(u) - norm_sq(combo) * u.map([](double v) { return std::exp(2.0 * v); });
  return {interior_max_abs(r1), interior_max_abs(r2), interior_max_abs(r3)};
}

/// Same check on a sampled catalog metric; refuses leading-order models.
inline EtaReport check_eta_system(const ClosedFormMetric& m, const AnnulusGrid& g) {
  if (m.model_only)
    fail(ErrorKind::model_only, "'" + m.name +
                                    "' is a leading-order model, not an exact "
                                    "solution; PDE residual checks do not apply");
  return check_eta_system(m.h_spec, m.sample_u(g));
}

struct CubicFormField {
  ComplexField xi0;
  std::optional<int> order_estimate;
};

/// Xi0 = (1/2)(a/(2z) - i dh/dz) at every node (exact).
inline CubicFormField cubic_form(const HarmonicSpec& spec, const AnnulusGrid& g) {
  return {ComplexField::sample(g, [&](Complex z) { return cubic_form_value(spec, z); }),
          cubic_form_order(spec)};
}

enum class CurvatureOf {
  source,   // e^{2u} |dz|^2
  special,  // e^{-u} |dz|^2
};

/// Gaussian curvature K = -e^{-2 psi} Delta psi of e^{2 psi}|dz|^2 with
/// psi = u (source) or psi = -u/2 (special).
///
/// The default angular stencil is the one kw_solver discretizes with, so for
/// a converged solution K = -rho up to the solver residual and the sign is
/// reliable. For sampled closed forms that are not radial about the grid
/// center the stencil's O(dtheta^2 / r) error dominates; pass
/// AngularScheme::spectral there.
inline ScalarField curvature(const ScalarField& u, CurvatureOf which,
                             AngularScheme scheme = AngularScheme::centered) {
  const ScalarField lap = laplacian(u, scheme);
  ScalarField k(lap);
  for (std::size_t n = 0; n < k.values().size(); ++n) {
    const double uv = u.values()[n];
    k.values()[n] = which == CurvatureOf::source
                        ? -std::exp(-2.0 * uv) * lap.values()[n]
                        : 0.5 * std::exp(uv) * lap.values()[n];
  }
  return k;
}

/// Empirical constants of -C1 |z|^{2n} <= -16|Xi0|^2 <= -C2 |z|^{2n}.
struct Sandwich {
  double c1 = 0.0;  // max of 16|Xi0|^2 |z|^{-2n}
  double c2 = 0.0;  // min of the same
  double r_max = 0.0;  // outer radius of the window used
};

namespace detail {

// Rows of the innermost decade (the whole grid if it spans less).
inline std::size_t innermost_decade_end(const AnnulusGrid& g) {
  std::size_t end = 0;
  while (end < g.n_radial() && g.radius(end) <= 10.0 * g.r_in() * (1 + 1e-12))
    ++end;
  return std::max<std::size_t>(end, 2);
}

}  // namespace detail

/// Checks the two-sided bound on the innermost decade of the sample grid.
/// Throws order_inconsistent when the declared order does not match: c2
/// collapses to 0, or the scaled quantity still drifts as a power of r.
inline Sandwich curvature_sandwich(const CubicFormField& xi, int n) {
  const auto& g = xi.xi0.grid();
  if (std::abs(g.center()) != 0.0)
    fail(ErrorKind::invalid_argument, "grid must be centered at the puncture");
  const std::size_t end = detail::innermost_decade_end(g);
  Sandwich s{0.0, std::numeric_limits<double>::infinity(), g.radius(end - 1)};
  std::vector<double> row_max(end, 0.0), row_min(end, s.c2);
  for (std::size_t i = 0; i < end; ++i) {
    const double scale = std::pow(g.radius(i), -2.0 * n);
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
      const double v = 16.0 * std::norm(xi.xi0(i, j)) * scale;
      row_max[i] = std::max(row_max[i], v);
      row_min[i] = std::min(row_min[i], v);
    }
    s.c1 = std::max(s.c1, row_max[i]);
    s.c2 = std::min(s.c2, row_min[i]);
  }
  const std::string declared = "declared order n = " + std::to_string(n);
  if (!std::isfinite(s.c1) || !(s.c2 > 1e-12 * s.c1))
    fail(ErrorKind::order_inconsistent,
         "curvature sandwich fails: c2 = 0 within tolerance (" + declared + ")");
  const double span = std::log(g.radius(end - 1) / g.r_in());
  const double drift_max = std::log(row_max[end - 1] / row_max[0]) / span;
  const double drift_min = std::log(row_min[end - 1] / row_min[0]) / span;
  // An order off by k drifts like r^{2k}.
  if (std::abs(drift_max) > 0.4 || std::abs(drift_min) > 0.4)
    fail(ErrorKind::order_inconsistent,
         "curvature sandwich fails: 16|Xi0|^2 |z|^{-2n} scales like r^" +
             format_number(drift_max) + " near the puncture (" + declared + ")");
  return s;
}

inline Sandwich curvature_sandwich(const HarmonicSpec& spec, int n,
                                   const AnnulusGrid& g) {
  return curvature_sandwich(cubic_form(spec, g), n);
}

}  // namespace sklab
