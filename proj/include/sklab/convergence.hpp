#pragma once

// Refinement studies: residuals of the structure equations and solver errors
// on a sequence of grids, with least-squares convergence orders.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "sklab/catalog.hpp"
#include "sklab/kw_solver.hpp"
#include "sklab/sk_verify.hpp"

namespace sklab {

/// Slope of log(err) against log(h). NaN when fewer than two positive errors.
inline double fitted_order(const std::vector<double>& h, const std::vector<double>& err) {
  std::vector<double> x, y;
  for (std::size_t k = 0; k < h.size() && k < err.size(); ++k)
    if (err[k] > 0.0 && std::isfinite(err[k])) {
      x.push_back(std::log(h[k]));
      y.push_back(std::log(err[k]));
    }
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  return sxy / sxx;
}

/// Residuals below this are treated as rounding noise: the discrete equation
/// holds exactly and no convergence order is defined.
inline constexpr double exact_residual_floor = 1e-9;

struct StudySeries {
  std::vector<double> values;  // one per level
  double order = std::numeric_limits<double>::quiet_NaN();
  bool exact = false;          // every level below exact_residual_floor
};

struct RefinementStudy {
  std::vector<std::size_t> sizes;  // nodes per direction
  std::vector<double> h;           // radial step dt per level
  std::map<std::string, StudySeries> series;

  void finish() {
    for (auto& [name, s] : series) {
      s.order = fitted_order(h, s.values);
      s.exact = std::all_of(s.values.begin(), s.values.end(),
                            [](double v) { return v <= exact_residual_floor; });
    }
  }
};

/// Residuals of every structure equation for an exact catalog metric on
/// n x n grids over r_in <= |z - center| <= r_out.
inline RefinementStudy residual_study(const ClosedFormMetric& m, double r_in,
                                      double r_out,
                                      const std::vector<std::size_t>& sizes) {
  if (m.model_only)
    fail(ErrorKind::model_only, "'" + m.name +
                                    "' is a leading-order model; residual "
                                    "studies need an exact solution");
  RefinementStudy st;
  st.sizes = sizes;
  for (std::size_t n : sizes) {
    const AnnulusGrid g = m.grid(n, n, r_in, r_out);
    const ScalarField u = m.sample_u(g);
    const auto eta = check_eta_system(m.h_spec, u);
    const auto conn = build_connection(m.h_spec, u);
    const auto flat = flatness_report(conn);
    st.h.push_back(g.dt());
    st.series["eta_closed"].values.push_back(eta.closed);
    st.series["eta_coclosed"].values.push_back(eta.coclosed);
    st.series["eta_laplace"].values.push_back(eta.kazdan_warner);
    st.series["kazdan_warner"].values.push_back(kazdan_warner_residual(m.h_spec, u));
    st.series["flatness"].values.push_back(flat.max());
    st.series["flatness_d_om11"].values.push_back(flat.d_om11);
    st.series["flatness_d_star_om11"].values.push_back(flat.d_star_om11);
    st.series["flatness_d_om22"].values.push_back(flat.d_om22);
    st.series["flatness_d_star_om22"].values.push_back(flat.d_star_om22);
    st.series["symmetry"].values.push_back(symmetry_residual(conn));
    st.series["trace"].values.push_back(trace_residual(conn, u));
  }
  st.finish();
  return st;
}

/// Solves Delta u = |dh + a phi|^2 e^{2u} with the exact Dirichlet trace of
/// the metric and records max |u - u*|, Newton iterations and residuals.
inline RefinementStudy solver_study(const ClosedFormMetric& m, double r_in,
                                    double r_out,
                                    const std::vector<std::size_t>& sizes,
                                    const KwOptions& opt = {}) {
  if (m.model_only)
    fail(ErrorKind::model_only, "'" + m.name + "' has no exact solution to compare with");
  RefinementStudy st;
  st.sizes = sizes;
  for (std::size_t n : sizes) {
    const AnnulusGrid g = m.grid(n, n, r_in, r_out);
    const ScalarField exact = m.sample_u(g);
    std::vector<double> inner(g.n_angular()), outer(g.n_angular());
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
      inner[j] = exact(0, j);
      outer[j] = exact(g.n_radial() - 1, j);
    }
    const auto sol = solve({g, sample_rho(m.h_spec, g), inner, outer, std::nullopt}, opt);
    double err = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k)
      err = std::max(err, std::abs(sol.u.values()[k] - exact.values()[k]));
    st.h.push_back(g.dt());
    st.series["max_error"].values.push_back(err);
    st.series["newton_iterations"].values.push_back(sol.newton_iterations);
    st.series["residual_norm"].values.push_back(sol.residual_norm);
    st.series["converged"].values.push_back(sol.converged ? 1.0 : 0.0);
  }
  st.finish();
  return st;
}

}  // namespace sklab
