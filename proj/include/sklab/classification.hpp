#pragma once

#include <cmath>
#include <limits>
#include <string>

namespace sklab {

/// Asymptotic type of w near the puncture:
///   power:        w = |z|^beta (C + o(1))
///   logarithmic:  w = -|z|^{n+1} log|z| e^{O(1)}
enum class Branch { power, logarithmic, inconclusive };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::power: return "power";
    case Branch::logarithmic: return "logarithmic";
    case Branch::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Classification {
  Branch branch = Branch::inconclusive;
  double beta = std::numeric_limits<double>::quiet_NaN();  // power
  double c = std::numeric_limits<double>::quiet_NaN();     // power prefactor
  int n_plus_1 = 0;                                        // logarithmic
  /// Max |log w - model| over the fitting window for the selected model.
  double fit_quality = std::numeric_limits<double>::quiet_NaN();

  // Diagnostics of both candidate fits.
  double power_deviation = std::numeric_limits<double>::quiet_NaN();
  double log_deviation = std::numeric_limits<double>::quiet_NaN();
  double window_decades = 0.0;
  std::string note;

  static Classification power(double beta, double c) {
    Classification k;
    k.branch = Branch::power;
    k.beta = beta;
    k.c = c;
    return k;
  }
  static Classification logarithmic(int n_plus_1) {
    Classification k;
    k.branch = Branch::logarithmic;
    k.n_plus_1 = n_plus_1;
    return k;
  }
};

}  // namespace sklab
