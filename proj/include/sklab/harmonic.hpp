#pragma once

// Symbolic harmonic data: a harmonic function h on the punctured plane plus
// the coefficient a of the closed, non-exact form
//
//     phi = (y dx - x dy) / (x^2 + y^2).
//
// Everything here is evaluated exactly (no finite differences).

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "sklab/field.hpp"

namespace sklab {

namespace harmonic {

/// h = Re z^{n+1}; n = -1 is not a monomial (use LogAbs).
struct Monomial {
  int n = 0;
  bool operator==(const Monomial&) const = default;
};
/// h = log|z|.
struct LogAbs {
  bool operator==(const LogAbs&) const = default;
};
/// h = x (same function as Monomial{0}, kept as its own kind).
struct CoordinateX {
  bool operator==(const CoordinateX&) const = default;
};
/// h = c.
struct Constant {
  double c = 0.0;
  bool operator==(const Constant&) const = default;
};

using Kind = std::variant<Monomial, LogAbs, CoordinateX, Constant>;

struct Term {
  double weight = 1.0;
  Kind kind;
  bool operator==(const Term&) const = default;
};

}  // namespace harmonic

/// h = sum of weighted terms, together with the phi coefficient a.
struct HarmonicSpec {
  std::vector<harmonic::Term> terms;
  double a = 0.0;

  static HarmonicSpec monomial(int n, double weight = 1.0, double a = 0.0) {
    if (n == -1)
      fail(ErrorKind::invalid_argument,
           "monomial order n = -1 is the log|z| case; use log_abs");
    return {{{weight, harmonic::Monomial{n}}}, a};
  }
  static HarmonicSpec log_abs(double weight = 1.0, double a = 0.0) {
    return {{{weight, harmonic::LogAbs{}}}, a};
  }
  static HarmonicSpec coordinate_x(double weight = 1.0, double a = 0.0) {
    return {{{weight, harmonic::CoordinateX{}}}, a};
  }
  static HarmonicSpec constant(double c, double a = 0.0) {
    return {{{1.0, harmonic::Constant{c}}}, a};
  }
  /// h = 0, only the phi part.
  static HarmonicSpec phi_only(double a) { return {{}, a}; }

  HarmonicSpec with_a(double new_a) const {
    HarmonicSpec s = *this;
    s.a = new_a;
    return s;
  }

  bool operator==(const HarmonicSpec&) const = default;
};

/// phi = (y dx - x dy)/|z|^2 at an absolute point z.
inline std::pair<double, double> phi_at(Complex z) {
  const double r2 = std::norm(z);
  return {z.imag() / r2, -z.real() / r2};
}

/// h(z).
inline double h_value(const HarmonicSpec& spec, Complex z) {
  double h = 0.0;
  const double r = std::abs(z);
  const double th = std::arg(z);
  for (const auto& term : spec.terms) {
    const double v = std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, harmonic::Monomial>) {
            const int m = k.n + 1;
            return std::pow(r, m) * std::cos(m * th);
          } else if constexpr (std::is_same_v<K, harmonic::LogAbs>) {
            return std::log(r);
          } else if constexpr (std::is_same_v<K, harmonic::CoordinateX>) {
            return z.real();
          } else {
            return k.c;
          }
        },
        term.kind);
    h += term.weight * v;
  }
  return h;
}

/// Exact (h_x, h_y), computed from the polar form of each term.
inline std::pair<double, double> dh_value(const HarmonicSpec& spec, Complex z) {
  double hx = 0.0, hy = 0.0;
  const double r = std::abs(z);
  const double th = std::arg(z);
  for (const auto& term : spec.terms) {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, harmonic::Monomial>) {
            // grad Re z^m = m r^{m-1} (cos((m-1)th), -sin((m-1)th))
            const int m = k.n + 1;
            const double amp = m * std::pow(r, m - 1);
            hx += term.weight * amp * std::cos((m - 1) * th);
            hy -= term.weight * amp * std::sin((m - 1) * th);
          } else if constexpr (std::is_same_v<K, harmonic::LogAbs>) {
            hx += term.weight * z.real() / (r * r);
            hy += term.weight * z.imag() / (r * r);
          } else if constexpr (std::is_same_v<K, harmonic::CoordinateX>) {
            hx += term.weight;
          }
        },
        term.kind);
  }
  return {hx, hy};
}

/// dh + a*phi at z.
inline std::pair<double, double> dh_plus_aphi(const HarmonicSpec& spec,
                                              Complex z) {
  auto [hx, hy] = dh_value(spec, z);
  if (spec.a != 0.0) {
    const auto [px, py] = phi_at(z);
    hx += spec.a * px;
    hy += spec.a * py;
  }
  return {hx, hy};
}

/// Laurent coefficients {k -> c_k} of the cubic-form coefficient
///
///     Xi0 = (1/2) (a / (2z) - i dh/dz) = sum_k c_k z^k,
///
/// with dh/dz = (h_x - i h_y)/2. Zero coefficients are dropped.
inline std::map<int, Complex> cubic_form_laurent(const HarmonicSpec& spec) {
  using namespace std::complex_literals;
  std::map<int, Complex> c;
  if (spec.a != 0.0) c[-1] += spec.a / 4.0;
  for (const auto& term : spec.terms) {
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, harmonic::Monomial>) {
            // dh/dz = (m/2) z^{m-1}
            const int m = k.n + 1;
            c[m - 1] += -1i * (term.weight * m / 4.0);
          } else if constexpr (std::is_same_v<K, harmonic::LogAbs>) {
            c[-1] += -1i * (term.weight / 4.0);
          } else if constexpr (std::is_same_v<K, harmonic::CoordinateX>) {
            c[0] += -1i * (term.weight / 4.0);
          }
        },
        term.kind);
  }
  std::erase_if(c, [](const auto& kv) { return kv.second == Complex{}; });
  return c;
}

/// Order of Xi0 at the origin; nullopt when Xi0 vanishes identically.
inline std::optional<int> cubic_form_order(const HarmonicSpec& spec) {
  const auto c = cubic_form_laurent(spec);
  if (c.empty()) return std::nullopt;
  return c.begin()->first;
}

inline Complex cubic_form_value(const HarmonicSpec& spec, Complex z) {
  Complex v{};
  for (const auto& [k, ck] : cubic_form_laurent(spec)) v += ck * std::pow(z, k);
  return v;
}

/// Exact h sampled at every node.
inline ScalarField sample_h(const HarmonicSpec& spec, const AnnulusGrid& grid) {
  return ScalarField::sample(grid, [&](Complex z) { return h_value(spec, z); });
}

/// Exact dh + a*phi sampled at every node.
inline OneForm sample_dh(const HarmonicSpec& spec, const AnnulusGrid& grid) {
  return OneForm::sample(grid, [&](Complex z) { return dh_plus_aphi(spec, z); });
}

/// Exact phi sampled at every node.
inline OneForm phi(const AnnulusGrid& grid) {
  return OneForm::sample(grid, [](Complex z) { return phi_at(z); });
}

/// rho = |dh + a*phi|^2, the density in the Kazdan-Warner equation.
inline ScalarField sample_rho(const HarmonicSpec& spec, const AnnulusGrid& grid) {
  return ScalarField::sample(grid, [&](Complex z) {
    const auto [p, q] = dh_plus_aphi(spec, z);
    return p * p + q * q;
  });
}

inline std::string describe(const HarmonicSpec& spec) {
  std::string s;
  for (const auto& term : spec.terms) {
    if (!s.empty()) s += " + ";
    s += format_number(term.weight) + "*";
    s += std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, harmonic::Monomial>)
            return "Re z^" + std::to_string(k.n + 1);
          else if constexpr (std::is_same_v<K, harmonic::LogAbs>)
            return "log|z|";
          else if constexpr (std::is_same_v<K, harmonic::CoordinateX>)
            return "x";
          else
            return format_number(k.c);
        },
        term.kind);
  }
  if (s.empty()) s = "0";
  return "h = " + s + ", a = " + format_number(spec.a);
}

}  // namespace sklab
