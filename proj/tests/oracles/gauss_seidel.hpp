#pragma once

// Brute-force reference for the discrete Kazdan-Warner problem: nonlinear
// Gauss-Seidel on the cylinder form u_tt + u_thth = e^{2t} rho e^{2u}, each
// node update solved by scalar Newton. Slow; meant for small grids.

#include <cmath>
#include <vector>

#include "sklab/field.hpp"

namespace sklab::oracle {

inline ScalarField gauss_seidel_kw(const ScalarField& rho, const std::vector<double>& inner,
                                   const std::vector<double>& outer, double tol = 1e-13,
                                   int max_sweeps = 200000) {
  const auto& g = rho.grid();
  const std::size_t nr = g.n_radial(), na = g.n_angular();
  ScalarField u(g, 0.0);
  for (std::size_t j = 0; j < na; ++j) {
    u(0, j) = inner[j];
    u(nr - 1, j) = outer[j];
  }
  const double a = 1.0 / (g.dt() * g.dt()), b = 1.0 / (g.dtheta() * g.dtheta());
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 1; i + 1 < nr; ++i) {
      const double s = std::exp(2.0 * g.t(i));
      for (std::size_t j = 0; j < na; ++j) {
        const double nb = a * (u(i + 1, j) + u(i - 1, j)) + b * (u(i, g.jp(j)) + u(i, g.jm(j)));
        const double c = 2.0 * (a + b), k = s * rho(i, j);
        // Solve c v + k e^{2v} = nb for v; the left side is increasing in v.
        double v = u(i, j);
        for (int it = 0; it < 100; ++it) {
          const double f = c * v + k * std::exp(2.0 * v) - nb;
          const double df = c + 2.0 * k * std::exp(2.0 * v);
          const double dv = f / df;
          v -= dv;
          if (std::abs(dv) < 1e-15) break;
        }
        change = std::max(change, std::abs(v - u(i, j)));
        u(i, j) = v;
      }
    }
    if (change < tol) break;
  }
  return u;
}

}  // namespace sklab::oracle
