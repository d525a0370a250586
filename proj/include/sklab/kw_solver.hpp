#pragma once

// Damped Newton solver for the Kazdan-Warner equation
//
//     Delta u = rho e^{2u},  rho >= 0,
//
// on an annulus grid with Dirichlet data on both circles.
//
// The equation is discretized on the cylinder (t, theta), t = log r, where it
// reads u_tt + u_thth = e^{2t} rho e^{2u}. The Newton matrix
//
//     M = -(D_tt + D_thth) + diag(2 e^{2t} rho e^{2u})
//
// is symmetric positive definite on the interior unknowns and is factorized
// with a sparse LDL^T (Eigen::SimplicialLDLT, AMD ordering).

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sklab/harmonic.hpp"
#include "sklab/operators.hpp"

namespace sklab {

struct KwProblem {
  AnnulusGrid grid;
  ScalarField rho;
  std::vector<double> bc_inner;  // per angular node, at r_in
  std::vector<double> bc_outer;  // per angular node, at r_out
  std::optional<ScalarField> initial_guess;
};

struct KwOptions {
  double tol = 1e-9;
  int max_iter = 50;
  int max_halvings = 40;
};

struct KwSolution {
  ScalarField u;
  /// max over interior nodes of r^2 |Delta u - rho e^{2u}| (cylinder residual).
  double residual_norm = std::numeric_limits<double>::infinity();
  /// max over interior nodes of |Delta u - rho e^{2u}|.
  double physical_residual_norm = std::numeric_limits<double>::infinity();
  int newton_iterations = 0;
  bool converged = false;
  /// residual_norm after each accepted iterate, starting with the initial guess.
  std::vector<double> residual_history;
};

namespace detail {

class CylinderSystem {
public:
  explicit CylinderSystem(const AnnulusGrid& g)
      : g_(g), nr_(g.n_radial()), na_(g.n_angular()),
        n_(static_cast<Eigen::Index>((nr_ - 2) * na_)) {
    it2_ = 1.0 / (g.dt() * g.dt());
    ith2_ = 1.0 / (g.dtheta() * g.dtheta());
    e2t_.resize(nr_);
    for (std::size_t i = 0; i < nr_; ++i) e2t_[i] = std::exp(2.0 * g.t(i));
  }

  Eigen::Index unknowns() const { return n_; }
  Eigen::Index unknown(std::size_t i, std::size_t j) const {
    return static_cast<Eigen::Index>((i - 1) * na_ + j);
  }

  /// -(D_tt + D_thth) + diag(extra) over the interior unknowns.
  Eigen::SparseMatrix<double> matrix(const std::vector<double>& extra) const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n_) * 5);
    for (std::size_t i = 1; i + 1 < nr_; ++i) {
      for (std::size_t j = 0; j < na_; ++j) {
        const auto row = unknown(i, j);
        trip.emplace_back(row, row,
                          2.0 * it2_ + 2.0 * ith2_ + extra[g_.index(i, j)]);
        if (i > 1) trip.emplace_back(row, unknown(i - 1, j), -it2_);
        if (i + 2 < nr_) trip.emplace_back(row, unknown(i + 1, j), -it2_);
        trip.emplace_back(row, unknown(i, g_.jp(j)), -ith2_);
        trip.emplace_back(row, unknown(i, g_.jm(j)), -ith2_);
      }
    }
    Eigen::SparseMatrix<double> m(n_, n_);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
  }

  /// Cylinder residual (D_tt + D_thth)u - e^{2t} rho e^{2u}; zero on the
  /// boundary rows.
  std::vector<double> residual(std::span<const double> u,
                               std::span<const double> rho) const {
    std::vector<double> res(g_.size(), 0.0);
    for (std::size_t i = 1; i + 1 < nr_; ++i) {
      for (std::size_t j = 0; j < na_; ++j) {
        const auto k = g_.index(i, j);
        const double c = u[k];
        const double lap =
            (u[g_.index(i + 1, j)] - 2.0 * c + u[g_.index(i - 1, j)]) * it2_ +
            (u[g_.index(i, g_.jp(j))] - 2.0 * c + u[g_.index(i, g_.jm(j))]) *
                ith2_;
        res[k] = lap - e2t_[i] * rho[k] * std::exp(2.0 * c);
      }
    }
    return res;
  }

  double max_abs(const std::vector<double>& res) const {
    double m = 0.0;
    for (double v : res) m = std::max(m, std::abs(v));
    return m;
  }

  double physical_max_abs(const std::vector<double>& res) const {
    double m = 0.0;
    for (std::size_t i = 1; i + 1 < nr_; ++i)
      for (std::size_t j = 0; j < na_; ++j)
        m = std::max(m, std::abs(res[g_.index(i, j)]) / e2t_[i]);
    return m;
  }

  double e2t(std::size_t i) const { return e2t_[i]; }
  double it2() const { return it2_; }

private:
  const AnnulusGrid& g_;
  std::size_t nr_, na_;
  Eigen::Index n_;
  double it2_ = 0.0, ith2_ = 0.0;
  std::vector<double> e2t_;
};

}  // namespace detail

/// Discrete harmonic function with the given Dirichlet data.
inline ScalarField harmonic_extension(const AnnulusGrid& g,
                                      const std::vector<double>& bc_inner,
                                      const std::vector<double>& bc_outer) {
  const std::size_t nr = g.n_radial(), na = g.n_angular();
  detail::CylinderSystem sys(g);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(sys.matrix(std::vector<double>(g.size(), 0.0)));
  if (ldlt.info() != Eigen::Success)
    fail(ErrorKind::invalid_argument, "Laplace matrix factorization failed");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.unknowns());
  for (std::size_t j = 0; j < na; ++j) {
    rhs[sys.unknown(1, j)] += bc_inner[j] * sys.it2();
    rhs[sys.unknown(nr - 2, j)] += bc_outer[j] * sys.it2();
  }
  const Eigen::VectorXd x = ldlt.solve(rhs);
  ScalarField u(g);
  for (std::size_t j = 0; j < na; ++j) {
    u(0, j) = bc_inner[j];
    u(nr - 1, j) = bc_outer[j];
  }
  for (std::size_t i = 1; i + 1 < nr; ++i)
    for (std::size_t j = 0; j < na; ++j) u(i, j) = x[sys.unknown(i, j)];
  return u;
}

inline KwSolution solve(const KwProblem& problem, const KwOptions& opt = {}) {
  const auto& g = problem.grid;
  const std::size_t nr = g.n_radial(), na = g.n_angular();
  require_same_grid(g, problem.rho.grid());
  if (!(opt.tol > 0.0))
    fail(ErrorKind::invalid_argument, "solver tolerance must be positive");
  if (opt.max_iter < 0)
    fail(ErrorKind::invalid_argument, "max_iter must be non-negative");
  for (double v : problem.rho.values()) {
    if (!std::isfinite(v))
      fail(ErrorKind::invalid_argument, "rho must be finite");
    if (v < 0.0)
      fail(ErrorKind::negative_density,
           "rho must be non-negative (it is the squared norm |dh + a phi|^2)");
  }
  if (problem.bc_inner.size() != na || problem.bc_outer.size() != na)
    fail(ErrorKind::invalid_argument,
         "boundary data needs one value per angular node");
  for (double v : problem.bc_inner)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "non-finite boundary data");
  for (double v : problem.bc_outer)
    if (!std::isfinite(v)) fail(ErrorKind::invalid_argument, "non-finite boundary data");

  ScalarField u = problem.initial_guess
                      ? *problem.initial_guess
                      : harmonic_extension(g, problem.bc_inner, problem.bc_outer);
  require_same_grid(g, u.grid());
  for (std::size_t j = 0; j < na; ++j) {
    u(0, j) = problem.bc_inner[j];
    u(nr - 1, j) = problem.bc_outer[j];
  }
  u.set_valid(g.all_rows());

  detail::CylinderSystem sys(g);
  const auto rho = problem.rho.values();
  auto res = sys.residual(u.values(), rho);
  double norm = sys.max_abs(res);

  KwSolution sol{u};
  sol.residual_history.push_back(norm);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool analyzed = false;
  std::vector<double> extra(g.size(), 0.0);
  Eigen::VectorXd rhs(sys.unknowns());

  int iter = 0;
  while (norm > opt.tol && iter < opt.max_iter) {
    for (std::size_t i = 1; i + 1 < nr; ++i)
      for (std::size_t j = 0; j < na; ++j) {
        const auto k = g.index(i, j);
        extra[k] = 2.0 * sys.e2t(i) * rho[k] * std::exp(2.0 * u.values()[k]);
        rhs[sys.unknown(i, j)] = res[k];
      }
    const auto m = sys.matrix(extra);
    if (!analyzed) {
      ldlt.analyzePattern(m);
      analyzed = true;
    }
    ldlt.factorize(m);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd step = ldlt.solve(rhs);

    double lambda = 1.0;
    bool accepted = false;
    ScalarField trial(u);
    for (int h = 0; h <= opt.max_halvings; ++h, lambda *= 0.5) {
      for (std::size_t i = 1; i + 1 < nr; ++i)
        for (std::size_t j = 0; j < na; ++j)
          trial(i, j) = u(i, j) + lambda * step[sys.unknown(i, j)];
      auto trial_res = sys.residual(trial.values(), rho);
      const double trial_norm = sys.max_abs(trial_res);
      if (std::isfinite(trial_norm) && trial_norm < norm) {
        u = std::move(trial);
        res = std::move(trial_res);
        norm = trial_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    ++iter;
    sol.residual_history.push_back(norm);
  }

  sol.u = std::move(u);
  sol.residual_norm = norm;
  sol.physical_residual_norm = sys.physical_max_abs(res);
  sol.newton_iterations = iter;
  sol.converged = norm <= opt.tol;
  return sol;
}

/// Dirichlet problem with trace u = -beta log r on both circles and
/// rho = |dh + a phi|^2, modelling w = |z|^beta (C + o(1)) at the puncture.
/// Requires beta < n + 1, n the order of the cubic form of `spec`.
inline KwProblem exponent_problem(const HarmonicSpec& spec, double beta,
                                  const AnnulusGrid& g) {
  if (!std::isfinite(beta))
    fail(ErrorKind::invalid_argument, "beta must be finite");
  if (const auto n = cubic_form_order(spec); n && !(beta < *n + 1))
    fail(ErrorKind::exponent_constraint,
         "beta = " + format_number(beta) +
             " violates the constraint beta < n+1 (\"β<n+1\") with n = " +
             std::to_string(*n));
  if (g.r_in() > 1e-2)
    fail(ErrorKind::invalid_argument,
         "an exponent problem needs r_in <= 1e-2 to expose the asymptotics");
  if (std::abs(g.center()) != 0.0)
    fail(ErrorKind::invalid_argument, "grid must be centered at the puncture");
  return {g, sample_rho(spec, g),
          std::vector<double>(g.n_angular(), -beta * std::log(g.r_in())),
          std::vector<double>(g.n_angular(), -beta * std::log(g.r_out())),
          std::nullopt};
}

inline KwSolution solve_with_exponent(const HarmonicSpec& spec, double beta,
                                      const AnnulusGrid& g,
                                      const KwOptions& opt = {}) {
  return solve(exponent_problem(spec, beta, g), opt);
}

/// Grid for solve_with_exponent runs. Near 0 the cylinder right-hand side
/// r^2 rho e^{2u} behaves like r^{2 + 2n - 2 beta}; once it drops below the
/// rounding floor of the discrete Laplacian (about 1e-12 for |u| = O(10)),
/// the sign of Delta u, and with it the sign of the curvature, is noise. The
/// inner radius is the smallest one that keeps the term above that floor,
/// clamped to [1e-9, 1e-2]. n is the vanishing order of rho^{1/2} at 0.
inline AnnulusGrid exponent_grid(double beta, int n = 0, double r_out = 0.05,
                                 std::size_t nodes_per_decade = 30,
                                 std::size_t n_angular = 16) {
  constexpr double floor = 1e-12;
  const double power = 2.0 + 2.0 * n - 2.0 * beta;
  double r_in = 1e-9;
  if (power > 0.0) r_in = std::clamp(std::pow(floor, 1.0 / power), 1e-9, 1e-2);
  const double decades = std::log10(r_out / r_in);
  const auto n_radial = static_cast<std::size_t>(
      std::ceil(decades * static_cast<double>(nodes_per_decade))) + 1;
  return AnnulusGrid(r_in, r_out, std::max<std::size_t>(n_radial, 8), n_angular);
}

}  // namespace sklab
