#pragma once

// Command-line front end. Exit codes:
//   0  success, every requested check passed
//   1  a requested check failed (or classification inconclusive)
//   2  usage error, unknown catalog entry, malformed input file
//   3  Newton solver did not converge (partial results written)
//   4  precondition violated (beta >= n+1, negative rho, inconsistent order)
//   5  residual checks requested on a model-only metric
//
// Relative output paths are resolved against $SKLAB_OUTPUT_DIR when set.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sklab/catalog.hpp"
#include "sklab/convergence.hpp"
#include "sklab/io.hpp"
#include "sklab/kw_solver.hpp"
#include "sklab/singularity.hpp"
#include "sklab/sk_verify.hpp"

namespace sklab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 1,
  exit_usage = 2,
  exit_not_converged = 3,
  exit_precondition = 4,
  exit_model_only = 5,
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::negative_density:
    case ErrorKind::exponent_constraint:
    case ErrorKind::order_inconsistent:
      return exit_precondition;
    case ErrorKind::model_only:
      return exit_model_only;
    default:
      return exit_usage;
  }
}

inline fs::path resolve_output(const fs::path& p) {
  fs::path out = p;
  if (const char* dir = std::getenv("SKLAB_OUTPUT_DIR"); dir && *dir && p.is_relative())
    out = fs::path(dir) / p;
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  return out;
}

inline void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_argument, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::malformed_input, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::malformed_input, path.string() + ": " + e.what());
  }
}

inline json expected_to_json(const ClosedFormMetric& m) {
  json j = {{"branch", to_string(m.expected.branch)}};
  if (m.expected.branch == Branch::power) {
    j["beta"] = m.expected.beta;
    j["C"] = m.expected.c;
  } else {
    j["n_plus_1"] = m.expected.n_plus_1;
  }
  return j;
}

inline std::vector<double> profile_radii(const AnnulusGrid& g) {
  return log_spaced_radii(g.r_out(), g.r_in(), 8);
}

// --- catalog ----------------------------------------------------------------

inline int cmd_catalog_list(bool as_json, std::ostream& out) {
  json list = json::array();
  for (const auto& m : catalog_entries()) {
    const auto order = cubic_form_order(m.h_spec);
    list.push_back({{"name", m.name},
                    {"formula", m.formula},
                    {"h_spec", describe(m.h_spec)},
                    {"cubic_form_order", order ? json(*order) : json(nullptr)},
                    {"expected", expected_to_json(m)},
                    {"model_only", m.model_only}});
  }
  if (as_json) {
    out << json{{"schema_version", io::schema_version}, {"entries", list}}.dump(2) << '\n';
    return exit_ok;
  }
  for (const auto& e : list) {
    out << e["name"].get<std::string>() << "\t" << e["formula"].get<std::string>()
        << "\t" << e["h_spec"].get<std::string>() << "\texpected "
        << e["expected"].dump() << (e["model_only"].get<bool>() ? "\t(model only)" : "")
        << '\n';
  }
  out << "parametrized: conical(alpha), picard_local(alpha), 0 < alpha < 1\n";
  return exit_ok;
}

inline int cmd_catalog_sample(const std::string& name, const std::string& grid_spec,
                              const std::string& out_path, std::ostream& out) {
  const ClosedFormMetric m = find_metric(name);
  const AnnulusGrid g = grid_spec.empty()
                            ? m.grid(128, 128, m.check_r_in, m.check_r_out)
                            : io::parse_grid_spec(grid_spec);
  m.require_domain(g);
  const ScalarField w = m.sample_w(g);
  const ScalarField u = m.sample_u(g);
  const ScalarField h = sample_h(m.h_spec, g);
  const OneForm dh = sample_dh(m.h_spec, g);
  const json cfg = {{"command", "catalog sample"}, {"name", name}, {"grid", io::grid_to_json(g)}};
  const fs::path path = resolve_output(out_path);
  io::write_field_table(path, g, {{"w", &w}, {"u", &u}, {"h", &h}}, {{"dh", &dh}},
                        io::config_hash(cfg));
  out << "wrote " << path.string() << '\n';
  return exit_ok;
}

// --- solve ------------------------------------------------------------------

struct SolveRun {
  json config;
  KwProblem problem;
  HarmonicSpec spec;
  KwOptions options;
};

inline std::vector<double> bc_values(const json& v, std::size_t n, const char* which) {
  if (v.is_number()) return std::vector<double>(n, v.get<double>());
  if (v.is_array() && v.size() == n) {
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(ErrorKind::malformed_input, std::string("bc.") + which + " must be numeric");
      out.push_back(x.get<double>());
    }
    return out;
  }
  fail(ErrorKind::malformed_input,
       std::string("bc.") + which + " must be a number or one value per angular node");
}

/// Parses a solve config; see docs/formats.md for the schema.
inline SolveRun parse_solve_config(const json& cfg) {
  io::check_keys(cfg, {"schema_version", "grid", "h_spec", "beta", "bc", "bc_metric", "rho",
                       "tol", "max_iter"},
                 "solve config");
  if (io::get_required<int>(cfg, "schema_version", "solve config") != io::schema_version)
    fail(ErrorKind::malformed_input, "unsupported schema_version");
  const AnnulusGrid g = io::grid_from_json(cfg.at("grid"));
  const HarmonicSpec spec = io::h_spec_from_json(
      cfg.contains("h_spec") ? cfg.at("h_spec") : json{{"kind", "coordinate_x"}});
  const int modes = int(cfg.contains("beta")) + int(cfg.contains("bc")) +
                    int(cfg.contains("bc_metric"));
  if (modes != 1)
    fail(ErrorKind::malformed_input, "give exactly one of beta, bc, bc_metric");

  SolveRun run{cfg, KwProblem{g, ScalarField(g), {}, {}, std::nullopt}, spec, {}};
  if (cfg.contains("beta")) {
    run.problem = exponent_problem(spec, io::get_required<double>(cfg, "beta", "solve config"), g);
  } else if (cfg.contains("bc")) {
    const auto& bc = cfg.at("bc");
    io::check_keys(bc, {"inner", "outer"}, "bc");
    if (!bc.contains("inner") || !bc.contains("outer"))
      fail(ErrorKind::malformed_input, "bc needs inner and outer");
    run.problem.rho = sample_rho(spec, g);
    run.problem.bc_inner = bc_values(bc.at("inner"), g.n_angular(), "inner");
    run.problem.bc_outer = bc_values(bc.at("outer"), g.n_angular(), "outer");
  } else {
    const ClosedFormMetric m = find_metric(cfg.at("bc_metric").get<std::string>());
    const ScalarField exact = m.sample_u(g);
    run.problem.rho = sample_rho(spec, g);
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
      run.problem.bc_inner.push_back(exact(0, j));
      run.problem.bc_outer.push_back(exact(g.n_radial() - 1, j));
    }
  }
  if (cfg.contains("rho")) {
    const auto vals = bc_values(cfg.at("rho"), g.size(), "rho");
    std::copy(vals.begin(), vals.end(), run.problem.rho.values().begin());
  }
  run.options.tol = cfg.value("tol", run.options.tol);
  run.options.max_iter = cfg.value("max_iter", run.options.max_iter);
  return run;
}

inline int cmd_solve(const std::string& config_path, const std::string& out_dir,
                     std::ostream& out) {
  const json cfg = read_json(config_path);
  const SolveRun run = parse_solve_config(cfg);
  const KwSolution sol = solve(run.problem, run.options);
  const auto& g = run.problem.grid;
  const std::string hash = io::config_hash(cfg);

  const fs::path dir = resolve_output(fs::path(out_dir) / "");
  fs::create_directories(dir);
  const ScalarField w = sol.u.map([](double v) { return std::exp(-v); });
  io::write_field_table(dir / "solution.csv", g, {{"u", &sol.u}, {"w", &w}}, {}, hash);

  json files = {{"solution", "solution.csv"}};
  if (std::abs(g.center()) == 0.0) {
    io::write_profile(dir / "profile.csv", extract_profile(w, profile_radii(g)), hash);
    files["profile"] = "profile.csv";
  }
  const ScalarField k = curvature(sol.u, CurvatureOf::source);
  const double max_k = max_abs(k.map([](double v) { return std::max(v, 0.0); }),
                               k.valid());
  json summary = {{"schema_version", io::schema_version},
                  {"config_hash", hash},
                  {"grid", io::grid_to_json(g)},
                  {"h_spec", io::h_spec_to_json(run.spec)},
                  {"converged", sol.converged},
                  {"residual_norm", sol.residual_norm},
                  {"physical_residual_norm", sol.physical_residual_norm},
                  {"newton_iterations", sol.newton_iterations},
                  {"residual_history", sol.residual_history},
                  {"tol", run.options.tol},
                  {"source_curvature_nonpositive", max_k == 0.0},
                  {"files", files}};
  if (cfg.contains("beta")) summary["beta"] = cfg.at("beta");
  write_json(dir / "summary.json", summary);
  out << summary.dump(2) << '\n';
  return sol.converged ? exit_ok : exit_not_converged;
}

// --- verify -----------------------------------------------------------------

inline json study_to_json(const RefinementStudy& st) {
  json levels = json::array();
  for (std::size_t l = 0; l < st.sizes.size(); ++l) {
    json res;
    for (const auto& [name, s] : st.series) res[name] = s.values[l];
    levels.push_back({{"n", st.sizes[l]}, {"h", st.h[l]}, {"values", res}});
  }
  json orders, exact;
  for (const auto& [name, s] : st.series) {
    const bool counts = name == "converged" || name == "newton_iterations";
    orders[name] = std::isfinite(s.order) && !s.exact && !counts ? json(s.order) : json(nullptr);
    exact[name] = s.exact;
  }
  return {{"levels", levels}, {"orders", orders}, {"exact", exact}};
}

inline int cmd_verify_metric(const std::string& id, int refinements, std::size_t base,
                             double r_in, double r_out, const std::string& out_path,
                             std::ostream& out) {
  const ClosedFormMetric m = find_metric(id);
  if (m.model_only)
    fail(ErrorKind::model_only, "'" + m.name + "' is a leading-order model; nothing to verify");
  if (refinements < 1) fail(ErrorKind::invalid_argument, "--refinements must be >= 1");
  if (r_in <= 0.0) r_in = m.check_r_in;
  if (r_out <= 0.0) r_out = m.check_r_out;
  std::vector<std::size_t> sizes;
  for (int k = 0; k < refinements; ++k) sizes.push_back(base << k);
  const RefinementStudy st = residual_study(m, r_in, r_out, sizes);

  json checks;
  bool passed = true;
  for (const char* name : {"eta_closed", "eta_coclosed", "eta_laplace", "kazdan_warner", "flatness"}) {
    const auto& s = st.series.at(name);
    const bool ok = s.exact || (sizes.size() > 1 && s.order >= 1.8);
    checks[name] = {{"requirement", "order >= 1.8 or discretely exact"}, {"passed", ok}};
    passed = passed && ok;
  }
  for (const char* name : {"symmetry", "trace"}) {
    const auto& s = st.series.at(name);
    const double worst = *std::max_element(s.values.begin(), s.values.end());
    const bool ok = worst <= 1e-10;
    checks[name] = {{"requirement", "<= 1e-10 at every level"}, {"passed", ok}};
    passed = passed && ok;
  }
  const json cfg = {{"command", "verify"}, {"metric", id}, {"sizes", sizes},
                    {"r_in", r_in}, {"r_out", r_out}};
  json report = study_to_json(st);
  report["schema_version"] = io::schema_version;
  report["config_hash"] = io::config_hash(cfg);
  report["metric"] = m.name;
  report["annulus"] = {r_in, r_out};
  report["checks"] = checks;
  report["passed"] = passed;
  if (out_path.empty()) out << report.dump(2) << '\n';
  else write_json(resolve_output(out_path), report);
  return passed ? exit_ok : exit_check_failed;
}

/// Single-level report on the output directory of `solve`.
inline int cmd_verify_solution(const std::string& dir, const std::string& out_path,
                               std::ostream& out) {
  const json summary = read_json(fs::path(dir) / "summary.json");
  const AnnulusGrid g = io::grid_from_json(summary.at("grid"));
  const HarmonicSpec spec = io::h_spec_from_json(summary.at("h_spec"));
  const ScalarField u = io::read_field_column(fs::path(dir) / "solution.csv", g, "u");
  const auto eta = check_eta_system(spec, u);
  const auto conn = build_connection(spec, u);
  const auto flat = flatness_report(conn);
  const ScalarField k = curvature(u, CurvatureOf::source);
  double k_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = k.valid().begin; i < k.valid().end; ++i)
    for (std::size_t j = 0; j < g.n_angular(); ++j) k_max = std::max(k_max, k(i, j));
  const double sym = symmetry_residual(conn), tr = trace_residual(conn, u);
  const bool passed = k_max <= 0.0 && sym <= 1e-10 && tr <= 1e-10;
  json report = {{"schema_version", io::schema_version},
                 {"config_hash", summary.value("config_hash", "")},
                 {"residuals",
                  {{"eta_closed", eta.closed},
                   {"eta_coclosed", eta.coclosed},
                   {"eta_laplace", eta.kazdan_warner},
                   {"flatness", flat.max()},
                   {"symmetry", sym},
                   {"trace", tr}}},
                 {"max_source_curvature", k_max},
                 {"passed", passed}};
  if (out_path.empty()) out << report.dump(2) << '\n';
  else write_json(resolve_output(out_path), report);
  return passed ? exit_ok : exit_check_failed;
}

// --- classify / plot --------------------------------------------------------

inline json classify_report(const RadialProfile& p, std::optional<int> order,
                            const ClassifyOptions& opt, const json& cfg) {
  const Classification c = classify(p, order, opt);
  json j = io::classification_to_json(c);
  j["schema_version"] = io::schema_version;
  j["config_hash"] = io::config_hash(cfg);
  j["order"] = order ? json(*order) : json(nullptr);
  j["tol_beta"] = opt.tol_beta;
  return j;
}

inline int cmd_classify(const std::string& profile_path, std::optional<int> order,
                        const ClassifyOptions& opt, const std::string& out_path,
                        std::ostream& out) {
  const RadialProfile p = io::read_profile(profile_path);
  const json cfg = {{"command", "classify"},
                    {"profile_hash", io::hash_hex([&] {
                       std::ifstream in(profile_path, std::ios::binary);
                       std::ostringstream s;
                       s << in.rdbuf();
                       return s.str();
                     }())},
                    {"order", order ? json(*order) : json(nullptr)},
                    {"tol_beta", opt.tol_beta}};
  const json report = classify_report(p, order, opt, cfg);
  if (out_path.empty()) out << report.dump(2) << '\n';
  else write_json(resolve_output(out_path), report);
  return report["branch"] == "inconclusive" ? exit_check_failed : exit_ok;
}

inline constexpr const char* plot_script = R"PY(# Log-log plot of a radial profile with the fitted asymptotic models.
# Requires matplotlib. Run from any directory; writes profile_fit.png next to
# this script.
import csv
import json
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
rows = list(csv.DictReader(open(os.path.join(here, "profile_fit.csv"))))
info = json.load(open(os.path.join(here, "classification.json")))
r = [float(x["r"]) for x in rows]

fig, ax = plt.subplots(figsize=(6, 4.5))
ax.loglog(r, [float(x["w_mean"]) for x in rows], "o", ms=3, label="w (angular geometric mean)")
for col, style, name in (("power_model", "-", "power fit"), ("log_model", "--", "logarithmic fit")):
    pts = [(a, float(x[col])) for a, x in zip(r, rows) if x[col] not in ("", "nan")]
    if pts:
        ax.loglog(*zip(*pts), style, label=name)
ax.set_xlabel("|z|")
ax.set_ylabel("w")
ax.set_title("branch: %s" % info["branch"])
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "profile_fit.png"), dpi=150)
)PY";

inline int cmd_plot(const std::string& profile_path, std::optional<int> order,
                    const ClassifyOptions& opt, const std::string& out_dir,
                    std::ostream& out) {
  const RadialProfile p = io::read_profile(profile_path);
  const json cfg = {{"command", "plot"}, {"profile", profile_path},
                    {"order", order ? json(*order) : json(nullptr)}, {"tol_beta", opt.tol_beta}};
  const json report = classify_report(p, order, opt, cfg);
  const fs::path dir = resolve_output(fs::path(out_dir) / "");
  fs::create_directories(dir);

  // Both candidate models, refit over the same window as the classifier.
  const std::size_t first = fitting_window_begin(p, opt);
  std::vector<double> x, s;
  for (std::size_t k = first; k < p.size(); ++k) {
    x.push_back(std::log(p.radii[k]));
    s.push_back(std::log(p.w_values[k]));
  }
  const auto power = detail::fit_line(x, s);
  std::optional<detail::LineFit> logm;
  if (std::all_of(x.begin(), x.end(), [](double v) { return v < 0.0; })) {
    std::vector<double> y(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) y[k] = s[k] - std::log(-x[k]);
    const double slope = order ? *order + 1 : std::round(detail::fit_line(x, y).slope);
    logm = detail::fit_fixed_slope(x, y, slope);
  }
  std::ofstream csv(dir / "profile_fit.csv", std::ios::binary);
  csv << "r,w_mean,power_model,log_model\n";
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double lr = std::log(p.radii[k]);
    csv << io::format_double(p.radii[k]) << ',' << io::format_double(p.w_values[k]) << ','
        << io::format_double(std::exp(power.slope * lr + power.intercept)) << ',';
    if (logm && lr < 0.0)
      csv << io::format_double(std::exp(logm->slope * lr + logm->intercept) * -lr);
    csv << '\n';
  }
  csv.close();
  const std::string hash = report["config_hash"];
  io::write_sidecar(dir / "profile_fit.csv", hash, {"r", "w_mean", "power_model", "log_model"});
  write_json(dir / "classification.json", report);
  std::ofstream(dir / "plot_profile.py", std::ios::binary)
      << "# schema_version " << io::schema_version << ", config_hash " << hash << '\n'
      << plot_script;
  out << "wrote " << (dir / "plot_profile.py").string() << " (python3 "
      << (dir / "plot_profile.py").string() << ")\n";
  return exit_ok;
}

// --- convergence ------------------------------------------------------------

inline int cmd_convergence(const std::string& id, const std::vector<std::size_t>& sizes,
                           double r_in, double r_out, const KwOptions& opt,
                           const std::string& out_path, std::ostream& out) {
  const ClosedFormMetric m = find_metric(id);
  const RefinementStudy st = solver_study(m, r_in, r_out, sizes, opt);
  const auto& conv = st.series.at("converged").values;
  const bool all_converged = std::all_of(conv.begin(), conv.end(), [](double v) { return v == 1.0; });
  const double order = st.series.at("max_error").order;
  const bool passed = all_converged && (sizes.size() < 2 || (order >= 1.8 && order <= 2.2));
  const json cfg = {{"command", "convergence"}, {"metric", id}, {"sizes", sizes},
                    {"r_in", r_in}, {"r_out", r_out}, {"tol", opt.tol}, {"max_iter", opt.max_iter}};
  json report = study_to_json(st);
  report["schema_version"] = io::schema_version;
  report["config_hash"] = io::config_hash(cfg);
  report["metric"] = m.name;
  report["passed"] = passed;
  if (out_path.empty()) out << report.dump(2) << '\n';
  else write_json(resolve_output(out_path), report);
  if (!all_converged) return exit_not_converged;
  return passed ? exit_ok : exit_check_failed;
}

// --- entry point ------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"sklab: special Kähler metrics on the punctured disc"};
  app.require_subcommand(1);

  auto* catalog = app.add_subcommand("catalog", "List or sample closed-form metrics");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "List catalog entries");
  bool list_json = false;
  list->add_flag("--json", list_json, "JSON output");
  auto* sample = catalog->add_subcommand("sample", "Sample an entry to a field table");
  std::string sample_name, sample_grid, sample_out = "sample.csv";
  sample->add_option("--name", sample_name, "Entry id")->required();
  sample->add_option("--grid", sample_grid, "r_in:r_out:n_radial:n_angular[:cx:cy]");
  sample->add_option("--out", sample_out, "Output CSV");

  auto* solve_cmd = app.add_subcommand("solve", "Solve the Kazdan-Warner problem from a JSON config");
  std::string solve_config, solve_out = "solve_out";
  solve_cmd->add_option("--config", solve_config, "Config JSON")->required();
  solve_cmd->add_option("--out-dir", solve_out, "Output directory");

  auto* verify = app.add_subcommand("verify", "Residual report of the structure equations");
  std::string verify_metric, verify_solution, verify_out;
  int refinements = 3;
  std::size_t base = 64;
  double verify_r_in = 0.0, verify_r_out = 0.0;
  auto* vm = verify->add_option("--metric", verify_metric, "Catalog entry id");
  auto* vs = verify->add_option("--solution", verify_solution, "Directory written by solve");
  vm->excludes(vs);
  verify->add_option("--refinements", refinements, "Number of dyadic levels");
  verify->add_option("--base", base, "Nodes per direction on the coarsest level");
  verify->add_option("--r-in", verify_r_in, "Inner radius (default per metric)");
  verify->add_option("--r-out", verify_r_out, "Outer radius (default per metric)");
  verify->add_option("--out", verify_out, "Report path (stdout if omitted)");

  ClassifyOptions copt;
  std::optional<int> order;
  auto* classify_cmd = app.add_subcommand("classify", "Classify a radial profile");
  std::string profile_path, classify_out;
  classify_cmd->add_option("--profile", profile_path, "Profile CSV (r,w_mean,w_spread)")->required();
  classify_cmd->add_option("--order", order, "Order n of the cubic form at 0");
  classify_cmd->add_option("--tol-beta", copt.tol_beta, "Margin below n+1 for power fits");
  classify_cmd->add_option("--out", classify_out, "Report path (stdout if omitted)");

  auto* plot = app.add_subcommand("plot", "Emit a matplotlib script for a profile and its fits");
  std::string plot_profile, plot_out = "plot";
  plot->add_option("--profile", plot_profile, "Profile CSV")->required();
  plot->add_option("--order", order, "Order n of the cubic form at 0");
  plot->add_option("--tol-beta", copt.tol_beta, "Margin below n+1 for power fits");
  plot->add_option("--out-dir", plot_out, "Output directory");

  auto* convergence = app.add_subcommand("convergence", "Solver refinement sweep against a closed form");
  std::string conv_metric = "punctured_disc", conv_out;
  std::vector<std::size_t> conv_sizes{64, 128, 256};
  double conv_r_in = 0.05, conv_r_out = 0.9;
  KwOptions kopt;
  convergence->add_option("--metric", conv_metric, "Catalog entry id");
  convergence->add_option("--sizes", conv_sizes, "Nodes per direction per level")->delimiter(',');
  convergence->add_option("--r-in", conv_r_in, "Inner radius");
  convergence->add_option("--r-out", conv_r_out, "Outer radius");
  convergence->add_option("--tol", kopt.tol, "Newton tolerance (cylinder residual)");
  convergence->add_option("--max-iter", kopt.max_iter, "Newton iteration cap");
  convergence->add_option("--out", conv_out, "Report path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*list) return cmd_catalog_list(list_json, out);
    if (*sample) return cmd_catalog_sample(sample_name, sample_grid, sample_out, out);
    if (*solve_cmd) return cmd_solve(solve_config, solve_out, out);
    if (*verify) {
      if (!verify_solution.empty()) return cmd_verify_solution(verify_solution, verify_out, out);
      if (verify_metric.empty()) {
        err << "verify needs --metric or --solution\n";
        return exit_usage;
      }
      return cmd_verify_metric(verify_metric, refinements, base, verify_r_in, verify_r_out,
                               verify_out, out);
    }
    if (*classify_cmd) return cmd_classify(profile_path, order, copt, classify_out, out);
    if (*plot) return cmd_plot(plot_profile, order, copt, plot_out, out);
    if (*convergence)
      return cmd_convergence(conv_metric, conv_sizes, conv_r_in, conv_r_out, kopt, conv_out, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace sklab::cli
