#pragma once

// Radial profiles of conformal factors near the puncture and their
// classification into the two asymptotic branches
//
//     w = |z|^beta (C + o(1))            (power, beta < n+1)
//     w = -|z|^{n+1} log|z| e^{O(1)}      (logarithmic)
//
// where n is the order of the cubic form at the puncture.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sklab/catalog.hpp"
#include "sklab/classification.hpp"
#include "sklab/sk_verify.hpp"

namespace sklab {

struct RadialProfile {
  std::vector<double> radii;     // strictly decreasing
  std::vector<double> w_values;  // angular geometric mean of w
  std::vector<double> w_spread;  // max/min of w over the circle

  std::size_t size() const { return radii.size(); }

  void validate() const {
    if (w_values.size() != radii.size() || w_spread.size() != radii.size())
      fail(ErrorKind::malformed_input, "profile columns have different lengths");
    for (std::size_t k = 0; k < radii.size(); ++k) {
      if (!(radii[k] > 0.0) || !std::isfinite(radii[k]))
        fail(ErrorKind::malformed_input, "profile radii must be positive");
      if (k > 0 && !(radii[k] < radii[k - 1]))
        fail(ErrorKind::malformed_input, "profile radii must be strictly decreasing");
      if (!(w_values[k] > 0.0) || !std::isfinite(w_values[k]))
        fail(ErrorKind::malformed_input, "profile w values must be positive");
    }
  }
};

/// `count_per_decade` radii per decade from r_max down to r_min (inclusive),
/// decreasing.
inline std::vector<double> log_spaced_radii(double r_max, double r_min,
                                            int count_per_decade) {
  if (!(r_min > 0.0 && r_max > r_min) || count_per_decade < 1)
    fail(ErrorKind::invalid_argument, "need 0 < r_min < r_max");
  const double decades = std::log10(r_max / r_min);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * count_per_decade)) + 1);
  std::vector<double> r(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    r[static_cast<std::size_t>(k)] =
        r_max * std::pow(r_min / r_max, static_cast<double>(k) / (n - 1));
  r.back() = r_min;
  return r;
}

namespace detail {

inline void profile_point(RadialProfile& p, double r, const std::vector<double>& w) {
  double log_sum = 0.0, lo = w.front(), hi = w.front();
  for (double v : w) {
    if (!(v > 0.0))
      fail(ErrorKind::invalid_argument, "w must be positive to build a profile");
    log_sum += std::log(v);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  p.radii.push_back(r);
  p.w_values.push_back(std::exp(log_sum / static_cast<double>(w.size())));
  p.w_spread.push_back(hi / lo);
}

}  // namespace detail

/// Profile of a sampled w; values between grid rows are linear in t = log r.
inline RadialProfile extract_profile(const ScalarField& w,
                                     const std::vector<double>& radii) {
  const auto& g = w.grid();
  RadialProfile p;
  std::vector<double> ring(g.n_angular());
  for (double r : radii) {
    if (!(r >= g.r_in() * (1 - 1e-12) && r <= g.r_out() * (1 + 1e-12)))
      fail(ErrorKind::out_of_domain,
           "profile radius " + format_number(r) + " is outside the grid");
    const double s = std::clamp((std::log(r) - g.t(0)) / g.dt(), 0.0,
                                static_cast<double>(g.n_radial() - 1));
    const auto i0 = std::min(static_cast<std::size_t>(s), g.n_radial() - 2);
    const double f = s - static_cast<double>(i0);
    for (std::size_t j = 0; j < g.n_angular(); ++j)
      ring[j] = (1.0 - f) * w(i0, j) + f * w(i0 + 1, j);
    detail::profile_point(p, r, ring);
  }
  p.validate();
  return p;
}

/// Profile of a closed-form metric around its domain center, sampled exactly
/// at `n_angular` equispaced angles.
inline RadialProfile extract_profile(const ClosedFormMetric& m,
                                     const std::vector<double>& radii,
                                     std::size_t n_angular = 64) {
  RadialProfile p;
  std::vector<double> ring(n_angular);
  for (double r : radii) {
    if (!(r > m.domain.r_min && r < m.domain.r_max))
      fail(ErrorKind::out_of_domain, "profile radius " + format_number(r) +
                                         " is outside the domain of '" + m.name + "'");
    for (std::size_t j = 0; j < n_angular; ++j)
      ring[j] = m.w(m.domain.center +
                    std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(n_angular)));
    detail::profile_point(p, r, ring);
  }
  p.validate();
  return p;
}

struct ClassifyOptions {
  /// A power fit with beta >= n+1 - tol_beta is rejected when n is known.
  double tol_beta = 0.05;
  /// Fits whose max deviation in log w exceeds this are not accepted.
  double max_deviation = 1.0;
  /// Fraction of the profile's decades (innermost) used for fitting.
  double window_fraction = 1.0 / 3.0;
  /// The window grows outward until it holds at least this many points.
  std::size_t min_window_points = 4;
  /// With n known, a profile within a factor in [1/b, b] of the logarithmic
  /// model over the window is reported as logarithmic.
  double bounded_factor = 2.0;
};

namespace detail {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_dev = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t k = 0; k < x.size(); ++k)
    f.max_dev = std::max(f.max_dev, std::abs(y[k] - f.slope * x[k] - f.intercept));
  return f;
}

inline LineFit fit_fixed_slope(const std::vector<double>& x,
                               const std::vector<double>& y, double slope) {
  LineFit f;
  f.slope = slope;
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += y[k] - slope * x[k];
  f.intercept = sum / static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    f.max_dev = std::max(f.max_dev, std::abs(y[k] - slope * x[k] - f.intercept));
  return f;
}

}  // namespace detail

/// Innermost fitting window of a profile: indices [first, size).
inline std::size_t fitting_window_begin(const RadialProfile& p,
                                        const ClassifyOptions& opt = {}) {
  const double r_min = p.radii.back();
  const double decades = std::log10(p.radii.front() / r_min);
  const double limit = decades * opt.window_fraction;
  std::size_t first = p.size();
  while (first > 0 && std::log10(p.radii[first - 1] / r_min) <= limit + 1e-12)
    --first;
  const std::size_t min_pts = std::min(opt.min_window_points, p.size());
  return std::min(first, p.size() - min_pts);
}

/// Fits log w against the power model beta log r + log C and the logarithmic
/// model (n+1) log r + log(-log r) + const over the innermost window and keeps
/// the one with the smaller max deviation. With `order` given, the
/// logarithmic exponent is fixed to n+1, power fits with
/// beta >= n+1 - tol_beta are rejected, and a profile within a bounded factor
/// of the logarithmic model is classified logarithmic.
inline Classification classify(const RadialProfile& profile,
                               std::optional<int> order = std::nullopt,
                               const ClassifyOptions& opt = {}) {
  profile.validate();
  Classification out;
  if (profile.size() < 3) {
    out.note = "inconclusive: fewer than 3 profile points";
    return out;
  }
  const std::size_t first = fitting_window_begin(profile, opt);
  std::vector<double> x, s;
  for (std::size_t k = first; k < profile.size(); ++k) {
    x.push_back(std::log(profile.radii[k]));
    s.push_back(std::log(profile.w_values[k]));
  }
  out.window_decades = std::log10(profile.radii[first] / profile.radii.back());

  const auto power = detail::fit_line(x, s);
  out.power_deviation = power.max_dev;

  std::optional<detail::LineFit> log_fit;
  if (std::all_of(x.begin(), x.end(), [](double v) { return v < 0.0; })) {
    std::vector<double> y(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) y[k] = s[k] - std::log(-x[k]);
    const double k_fixed = order ? static_cast<double>(*order + 1)
                                 : std::round(detail::fit_line(x, y).slope);
    log_fit = detail::fit_fixed_slope(x, y, k_fixed);
    out.log_deviation = log_fit->max_dev;
  }

  const bool power_admissible =
      !order || power.slope < static_cast<double>(*order + 1) - opt.tol_beta;
  // The logarithmic branch fixes w only up to e^{O(1)}: with n known, a
  // residual range within log(b^2) is consistent with it whatever the power
  // fit says.
  bool log_bounded = false;
  if (order && log_fit) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double e = s[k] - std::log(-x[k]) - log_fit->slope * x[k];
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    log_bounded = hi - lo <= 2.0 * std::log(opt.bounded_factor) + 1e-12;
  }
  const bool prefer_power = power_admissible && !log_bounded &&
                            (!log_fit || power.max_dev < log_fit->max_dev);

  if (prefer_power) {
    out.branch = Branch::power;
    out.beta = power.slope;
    out.c = std::exp(power.intercept);
    out.fit_quality = power.max_dev;
  } else if (log_fit) {
    out.branch = Branch::logarithmic;
    out.n_plus_1 = static_cast<int>(log_fit->slope);
    out.fit_quality = log_fit->max_dev;
    out.note =
        "logarithmic branch holds only up to a bounded factor e^{O(1)}; the "
        "fit confirms consistency with the branch, not the exact profile";
    if (log_bounded && power_admissible)
      out.note += "; within a factor " + format_number(opt.bounded_factor) +
                  " of the logarithmic model over the window";
    if (!power_admissible)
      out.note += "; power fit rejected (beta = " + format_number(power.slope) +
                  " is not below n+1 - tol_beta)";
  } else {
    out.note = "inconclusive: power fit not admissible and logarithmic model "
               "undefined for r >= 1";
    return out;
  }
  if (!(out.fit_quality <= opt.max_deviation)) {
    const Classification best = out;
    out = Classification{};
    out.power_deviation = best.power_deviation;
    out.log_deviation = best.log_deviation;
    out.window_decades = best.window_decades;
    out.fit_quality = best.fit_quality;
    out.note = std::string("inconclusive: best fit (") + to_string(best.branch) +
               ") deviates by " + format_number(best.fit_quality) +
               " in log w";
  }
  return out;
}

/// Order of Xi0 at the puncture from the slope of log max_theta |Xi0| against
/// log r over the innermost decade of the grid. The rounded order is checked
/// with curvature_sandwich.
inline int estimate_order(const CubicFormField& xi, double slope_tol = 0.2) {
  const auto& g = xi.xi0.grid();
  const std::size_t end = detail::innermost_decade_end(g);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < end; ++i) {
    double m = 0.0;
    for (std::size_t j = 0; j < g.n_angular(); ++j)
      m = std::max(m, std::abs(xi.xi0(i, j)));
    if (!(m > 0.0))
      fail(ErrorKind::order_inconsistent,
           "cubic form vanishes on the inner annulus; order undefined");
    x.push_back(std::log(g.radius(i)));
    y.push_back(std::log(m));
  }
  const double slope = detail::fit_line(x, y).slope;
  const double n = std::round(slope);
  if (std::abs(slope - n) > slope_tol)
    fail(ErrorKind::order_inconsistent,
         "fitted order " + format_number(slope) +
             " is not an integer within tolerance (essential singularity or "
             "contaminated data?)");
  const int order = static_cast<int>(n);
  curvature_sandwich(xi, order);
  return order;
}

/// Same estimate from symbolic data, sampled on the annulus spanned by
/// `radii` (at least one decade is used when available).
inline int estimate_order(const HarmonicSpec& spec, const std::vector<double>& radii,
                          std::size_t n_angular = 64) {
  if (radii.size() < 2)
    fail(ErrorKind::invalid_argument, "estimate_order needs at least two radii");
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  const AnnulusGrid g(*lo, *hi, std::max<std::size_t>(radii.size(), 16), n_angular);
  return estimate_order(cubic_form(spec, g));
}

}  // namespace sklab
