#pragma once

// Closed-form special Kähler metrics g = w |dz|^2 together with the harmonic
// data (h, a) that produces them through Delta u = |dh + a phi|^2 e^{2u},
// u = -log w.
//
// Entries built from a constant-curvature metric e^{2u}|dz|^2 of curvature
// -c^2 use h = c*x, so that |dh|^2 = c^2 matches the equation exactly.

#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "sklab/classification.hpp"
#include "sklab/harmonic.hpp"

namespace sklab {

/// Open annulus r_min < |z - center| < r_max on which a metric is valid.
struct MetricDomain {
  Complex center{0.0, 0.0};
  double r_min = 0.0;
  double r_max = 1.0;

  bool contains(const AnnulusGrid& g) const {
    return g.center() == center && g.r_in() > r_min && g.r_out() < r_max;
  }
};

struct ClosedFormMetric {
  std::string name;
  std::string formula;
  std::function<double(Complex)> w;
  HarmonicSpec h_spec;
  MetricDomain domain;
  /// Asymptotics of w at domain.center.
  Classification expected;
  /// Leading-order local model only: PDE residual checks do not apply.
  bool model_only = false;
  /// Gaussian curvature of e^{2u}|dz|^2 = w^{-2}|dz|^2, when constant.
  std::optional<double> source_curvature;
  /// Annulus used by default for residual and curvature checks.
  double check_r_in = 0.05;
  double check_r_out = 0.5;

  double u(Complex z) const { return -std::log(w(z)); }

  /// Grid on the domain: r_in/r_out default to safely interior radii.
  AnnulusGrid grid(std::size_t n_radial, std::size_t n_angular,
                   double r_in, double r_out) const {
    AnnulusGrid g(r_in, r_out, n_radial, n_angular, domain.center);
    if (!domain.contains(g))
      fail(ErrorKind::out_of_domain,
           "grid annulus is outside the domain of '" + name + "'");
    return g;
  }

  ScalarField sample_w(const AnnulusGrid& g) const {
    require_domain(g);
    return ScalarField::sample(g, w);
  }
  ScalarField sample_u(const AnnulusGrid& g) const {
    require_domain(g);
    return ScalarField::sample(g, [this](Complex z) { return u(z); });
  }

  void require_domain(const AnnulusGrid& g) const {
    if (!domain.contains(g))
      fail(ErrorKind::out_of_domain,
           "grid annulus is outside the domain of '" + name + "'");
  }
};

/// Upper half-plane, unit disc and punctured disc rows of the Poincaré table.
inline ClosedFormMetric poincare_family(const std::string& name) {
  ClosedFormMetric m;
  m.name = name;
  m.h_spec = HarmonicSpec::coordinate_x();
  m.source_curvature = -1.0;
  if (name == "half_plane") {
    m.formula = "w = Im z";
    m.w = [](Complex z) { return z.imag(); };
    // Sampled around z = i, a regular point.
    m.domain = {{0.0, 1.0}, 0.0, 1.0};
    m.expected = Classification::power(0.0, 1.0);
    // Not radial about i: the stencil error grows like dt^2 / r, so the
    // check annulus stays away from the center.
    m.check_r_in = 0.2;
  } else if (name == "disc") {
    m.formula = "w = (1 - |z|^2)/2";
    m.w = [](Complex z) { return 0.5 * (1.0 - std::norm(z)); };
    m.domain = {{0.0, 0.0}, 0.0, 1.0};
    m.expected = Classification::power(0.0, 0.5);
  } else if (name == "punctured_disc") {
    m.formula = "w = -|z| log|z|";
    m.w = [](Complex z) {
      const double r = std::abs(z);
      return -r * std::log(r);
    };
    m.domain = {{0.0, 0.0}, 0.0, 1.0};
    // Xi0 = -i/4 does not vanish: n = 0.
    m.expected = Classification::logarithmic(1);
  } else {
    fail(ErrorKind::unknown_entry, "unknown Poincaré model '" + name +
                                       "' (expected half_plane, disc, "
                                       "punctured_disc)");
  }
  return m;
}

/// w = -log|z| with h = -log|z|: the pair (h, -log h) for positive harmonic h.
inline ClosedFormMetric log_metric() {
  ClosedFormMetric m;
  m.name = "log_metric";
  m.formula = "w = -log|z|";
  m.w = [](Complex z) { return -std::log(std::abs(z)); };
  m.h_spec = HarmonicSpec::log_abs(-1.0);
  m.domain = {{0.0, 0.0}, 0.0, 1.0};
  // Xi0 has a simple pole: n = -1.
  m.expected = Classification::logarithmic(0);
  return m;
}

/// w = |z|^alpha (1 - |z|^{2(1-alpha)}) / (1 - alpha), 0 < alpha < 1.
///
/// Its source metric w^{-2}|dz|^2 has curvature -4 (measured, see
/// tests/oracles/derive.py), hence h = 2x.
inline ClosedFormMetric conical_metric(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorKind::invalid_argument, "conical metric needs 0 < alpha < 1");
  ClosedFormMetric m;
  m.name = "conical(" + format_number(alpha) + ")";
  m.formula = "w = |z|^a (1 - |z|^(2(1-a))) / (1-a)";
  m.w = [alpha](Complex z) {
    const double r = std::abs(z);
    return std::pow(r, alpha) * (1.0 - std::pow(r, 2.0 * (1.0 - alpha))) /
           (1.0 - alpha);
  };
  m.h_spec = HarmonicSpec::coordinate_x(2.0);
  m.domain = {{0.0, 0.0}, 0.0, 1.0};
  m.expected = Classification::power(alpha, 1.0 / (1.0 - alpha));
  m.source_curvature = -4.0;
  return m;
}

/// Leading-order model w = c |z|^alpha of a Picard metric near one of its
/// conical points. Not an exact solution.
inline ClosedFormMetric picard_local_model(double alpha, double c = 1.0) {
  if (!(alpha > 0.0 && alpha < 1.0))
    fail(ErrorKind::invalid_argument, "Picard local model needs 0 < alpha < 1");
  if (!(c > 0.0))
    fail(ErrorKind::invalid_argument, "Picard local model needs c > 0");
  ClosedFormMetric m;
  m.name = "picard_local(" + format_number(alpha) + ")";
  m.formula = "w = c |z|^a (local model)";
  m.w = [alpha, c](Complex z) { return c * std::pow(std::abs(z), alpha); };
  m.h_spec = HarmonicSpec::coordinate_x();
  m.domain = {{0.0, 0.0}, 0.0, 1.0};
  m.expected = Classification::power(alpha, c);
  m.model_only = true;
  return m;
}

/// h constant, u = 0: the flat special Kähler metric |dz|^2.
inline ClosedFormMetric flat_metric() {
  ClosedFormMetric m;
  m.name = "flat";
  m.formula = "w = 1";
  m.w = [](Complex) { return 1.0; };
  m.h_spec = HarmonicSpec::constant(1.0);
  m.domain = {{0.0, 0.0}, 0.0, std::numeric_limits<double>::infinity()};
  m.expected = Classification::power(0.0, 1.0);
  m.source_curvature = 0.0;
  return m;
}

/// Every entry with its default parameters.
inline std::vector<ClosedFormMetric> catalog_entries() {
  return {poincare_family("half_plane"), poincare_family("disc"),
          poincare_family("punctured_disc"), log_metric(),
          conical_metric(0.5), picard_local_model(0.5), flat_metric()};
}

/// Looks up an entry by id: "half_plane", "disc", "punctured_disc",
/// "log_metric", "flat", "conical", "conical(0.25)", "picard_local",
/// "picard_local(0.3)".
inline ClosedFormMetric find_metric(const std::string& id) {
  static const std::regex with_arg(R"(^(conical|picard_local)(?:\(([^)]*)\))?$)");
  std::smatch match;
  if (std::regex_match(id, match, with_arg)) {
    double alpha = 0.5;
    if (match[2].matched) {
      try {
        std::size_t used = 0;
        alpha = std::stod(match[2].str(), &used);
        if (used != match[2].str().size()) throw std::invalid_argument(id);
      } catch (const std::exception&) {
        fail(ErrorKind::unknown_entry, "cannot parse parameter in '" + id + "'");
      }
    }
    return match[1] == "conical" ? conical_metric(alpha)
                                 : picard_local_model(alpha);
  }
  if (id == "log_metric") return log_metric();
  if (id == "flat") return flat_metric();
  if (id == "half_plane" || id == "disc" || id == "punctured_disc")
    return poincare_family(id);
  fail(ErrorKind::unknown_entry,
       "unknown catalog entry '" + id +
           "' (expected half_plane, disc, punctured_disc, log_metric, flat, "
           "conical(alpha), picard_local(alpha))");
}

}  // namespace sklab
