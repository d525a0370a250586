#pragma once

// File formats.
//
// Field tables (CSV, comma separated, '\n' line ends, no quoting):
//   i_radial,i_angular,r,theta,<scalar columns...>,<form>_p,<form>_q,...
// one row per node in storage order (i_radial major). Numbers use the
// shortest representation that round-trips (std::to_chars). A sidecar
// "<file>.json" holds schema_version, config_hash, the grid and the column
// names.
//
// Radial profiles (CSV): r,w_mean,w_spread with r strictly decreasing.

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sklab/catalog.hpp"
#include "sklab/classification.hpp"
#include "sklab/singularity.hpp"

namespace sklab::io {

using nlohmann::json;

inline constexpr int schema_version = 1;

inline std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

inline double parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    fail(ErrorKind::malformed_input, "not a number: '" + std::string(s) + "'");
  return v;
}

/// FNV-1a 64-bit, hex encoded.
inline std::string hash_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

/// Hash of the canonical (sorted-key, compact) dump of a config.
inline std::string config_hash(const json& config) { return hash_hex(config.dump()); }

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline json grid_to_json(const AnnulusGrid& g) {
  return {{"r_in", g.r_in()},
          {"r_out", g.r_out()},
          {"n_radial", g.n_radial()},
          {"n_angular", g.n_angular()},
          {"center", {g.center().real(), g.center().imag()}}};
}

/// Rejects keys outside `allowed`.
inline void check_keys(const json& j, std::initializer_list<std::string_view> allowed,
                       const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::malformed_input, where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(ErrorKind::malformed_input, "unknown key '" + key + "' in " + where);
  }
}

template <class T>
T get_required(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key))
    fail(ErrorKind::malformed_input, "missing key '" + std::string(key) + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::malformed_input, "bad value for '" + std::string(key) + "' in " + where);
  }
}

inline AnnulusGrid grid_from_json(const json& j) {
  check_keys(j, {"r_in", "r_out", "n_radial", "n_angular", "center"}, "grid");
  Complex center{};
  if (j.contains("center")) {
    const auto c = j.at("center");
    if (!c.is_array() || c.size() != 2)
      fail(ErrorKind::malformed_input, "grid.center must be [x, y]");
    center = {c[0].get<double>(), c[1].get<double>()};
  }
  const auto nr = get_required<long long>(j, "n_radial", "grid");
  const auto na = get_required<long long>(j, "n_angular", "grid");
  if (nr < 0 || na < 0) fail(ErrorKind::malformed_input, "node counts must be positive");
  return AnnulusGrid(get_required<double>(j, "r_in", "grid"),
                     get_required<double>(j, "r_out", "grid"),
                     static_cast<std::size_t>(nr), static_cast<std::size_t>(na), center);
}

/// "r_in:r_out:n_radial:n_angular" (optionally ":cx:cy").
inline AnnulusGrid parse_grid_spec(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 4 && parts.size() != 6)
    fail(ErrorKind::malformed_input,
         "grid spec must be r_in:r_out:n_radial:n_angular[:cx:cy], got '" + spec + "'");
  const auto count = [](const std::string& s) {
    const double v = parse_double(s);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
      fail(ErrorKind::malformed_input, "node count must be a non-negative integer");
    return static_cast<std::size_t>(v);
  };
  Complex center{};
  if (parts.size() == 6) center = {parse_double(parts[4]), parse_double(parts[5])};
  return AnnulusGrid(parse_double(parts[0]), parse_double(parts[1]), count(parts[2]),
                     count(parts[3]), center);
}

// --- harmonic specs ---------------------------------------------------------

inline json term_to_json(const harmonic::Term& t) {
  json j = std::visit(
      [](const auto& k) -> json {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, harmonic::Monomial>)
          return {{"kind", "monomial"}, {"n", k.n}};
        else if constexpr (std::is_same_v<K, harmonic::LogAbs>)
          return {{"kind", "log_abs"}};
        else if constexpr (std::is_same_v<K, harmonic::CoordinateX>)
          return {{"kind", "coordinate_x"}};
        else
          return {{"kind", "constant"}, {"c", k.c}};
      },
      t.kind);
  j["weight"] = t.weight;
  return j;
}

inline json h_spec_to_json(const HarmonicSpec& s) {
  json terms = json::array();
  for (const auto& t : s.terms) terms.push_back(term_to_json(t));
  return {{"kind", "linear_combination"}, {"terms", terms}, {"a", s.a}};
}

inline harmonic::Term term_from_json(const json& j) {
  const auto kind = get_required<std::string>(j, "kind", "h_spec term");
  const double weight = j.value("weight", 1.0);
  if (kind == "monomial") {
    check_keys(j, {"kind", "n", "weight", "a"}, "monomial term");
    const int n = get_required<int>(j, "n", "monomial term");
    if (n == -1)
      fail(ErrorKind::malformed_input, "monomial n = -1 is not allowed; use log_abs");
    return {weight, harmonic::Monomial{n}};
  }
  if (kind == "log_abs") {
    check_keys(j, {"kind", "weight", "a"}, "log_abs term");
    return {weight, harmonic::LogAbs{}};
  }
  if (kind == "coordinate_x") {
    check_keys(j, {"kind", "weight", "a"}, "coordinate_x term");
    return {weight, harmonic::CoordinateX{}};
  }
  if (kind == "constant") {
    check_keys(j, {"kind", "c", "weight", "a"}, "constant term");
    return {weight, harmonic::Constant{get_required<double>(j, "c", "constant term")}};
  }
  fail(ErrorKind::malformed_input, "unknown h_spec kind '" + kind + "'");
}

/// {"kind": "monomial", "n": 0, "a": 0} or
/// {"kind": "linear_combination", "terms": [...], "a": 0}.
inline HarmonicSpec h_spec_from_json(const json& j) {
  HarmonicSpec s;
  const auto kind = get_required<std::string>(j, "kind", "h_spec");
  if (kind == "linear_combination") {
    check_keys(j, {"kind", "terms", "a"}, "h_spec");
    const auto& terms = j.at("terms");
    if (!terms.is_array()) fail(ErrorKind::malformed_input, "h_spec.terms must be an array");
    for (const auto& t : terms) {
      if (t.contains("a")) fail(ErrorKind::malformed_input, "'a' belongs to the h_spec, not a term");
      s.terms.push_back(term_from_json(t));
    }
  } else {
    s.terms.push_back(term_from_json(j));
  }
  s.a = j.value("a", 0.0);
  if (!std::isfinite(s.a)) fail(ErrorKind::malformed_input, "h_spec.a must be finite");
  return s;
}

// --- field tables -----------------------------------------------------------

struct NamedScalar {
  std::string name;
  const ScalarField* field;
};
/// `<path>.json`: schema version, config hash and column list of a CSV table.
inline void write_sidecar(const std::filesystem::path& path, const std::string& cfg_hash,
                          const std::vector<std::string>& columns, json extra = json::object()) {
  extra["schema_version"] = schema_version;
  extra["config_hash"] = cfg_hash;
  extra["columns"] = columns;
  std::ofstream out(path.string() + ".json", std::ios::binary);
  if (!out) fail(ErrorKind::invalid_argument, "cannot write " + path.string() + ".json");
  out << extra.dump(2) << '\n';
}

struct NamedForm {
  std::string name;
  const OneForm* form;
};

inline void write_field_table(const std::filesystem::path& path, const AnnulusGrid& g,
                              const std::vector<NamedScalar>& scalars,
                              const std::vector<NamedForm>& forms,
                              const std::string& cfg_hash) {
  for (const auto& s : scalars) require_same_grid(g, s.field->grid());
  for (const auto& f : forms) require_same_grid(g, f.form->grid());
  std::vector<std::string> columns{"i_radial", "i_angular", "r", "theta"};
  for (const auto& s : scalars) columns.push_back(s.name);
  for (const auto& f : forms) {
    columns.push_back(f.name + "_p");
    columns.push_back(f.name + "_q");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_argument, "cannot write " + path.string());
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (std::size_t i = 0; i < g.n_radial(); ++i)
    for (std::size_t j = 0; j < g.n_angular(); ++j) {
      const auto k = g.index(i, j);
      out << i << ',' << j << ',' << format_double(g.radius(i)) << ','
          << format_double(g.theta(j));
      for (const auto& s : scalars) out << ',' << format_double(s.field->values()[k]);
      for (const auto& f : forms)
        out << ',' << format_double(f.form->p()[k]) << ',' << format_double(f.form->q()[k]);
      out << '\n';
    }
  write_sidecar(path, cfg_hash, columns, {{"grid", grid_to_json(g)}});
}

/// Reads one column of a field table written for grid `g`.
inline ScalarField read_field_column(const std::filesystem::path& path,
                                     const AnnulusGrid& g, const std::string& column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::malformed_input, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::malformed_input, "empty field table");
  const auto header = split(line);
  std::size_t col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == column) col = c;
  if (col == header.size() || header.size() < 5 || header[0] != "i_radial" ||
      header[1] != "i_angular")
    fail(ErrorKind::malformed_input, "field table lacks column '" + column + "'");
  ScalarField f(g);
  std::vector<bool> seen(g.size(), false);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size())
      fail(ErrorKind::malformed_input, "ragged row in " + path.string());
    const double i = parse_double(cells[0]), j = parse_double(cells[1]);
    if (i < 0 || j < 0 || i >= static_cast<double>(g.n_radial()) ||
        j >= static_cast<double>(g.n_angular()))
      fail(ErrorKind::malformed_input, "node index outside the grid");
    const auto k = g.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    f.values()[k] = parse_double(cells[col]);
    seen[k] = true;
  }
  for (bool s : seen)
    if (!s) fail(ErrorKind::malformed_input, "field table does not cover every node");
  return f;
}

// --- profiles ---------------------------------------------------------------

inline void write_profile(const std::filesystem::path& path, const RadialProfile& p,
                          const std::string& cfg_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_argument, "cannot write " + path.string());
  out << "r,w_mean,w_spread\n";
  for (std::size_t k = 0; k < p.size(); ++k)
    out << format_double(p.radii[k]) << ',' << format_double(p.w_values[k]) << ','
        << format_double(p.w_spread[k]) << '\n';
  out.close();
  write_sidecar(path, cfg_hash, {"r", "w_mean", "w_spread"});
}

inline RadialProfile read_profile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::malformed_input, "cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::malformed_input, "empty profile");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,w_mean,w_spread")
    fail(ErrorKind::malformed_input, "profile header must be 'r,w_mean,w_spread'");
  RadialProfile p;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != 3) fail(ErrorKind::malformed_input, "profile rows need 3 columns");
    p.radii.push_back(parse_double(cells[0]));
    p.w_values.push_back(parse_double(cells[1]));
    p.w_spread.push_back(parse_double(cells[2]));
  }
  p.validate();
  return p;
}

inline json classification_to_json(const Classification& c) {
  json j = {{"branch", to_string(c.branch)}};
  if (c.branch == Branch::power) {
    j["beta"] = c.beta;
    j["C"] = c.c;
  } else if (c.branch == Branch::logarithmic) {
    j["n_plus_1"] = c.n_plus_1;
  }
  const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  j["fit_quality"] = num(c.fit_quality);
  j["power_deviation"] = num(c.power_deviation);
  j["log_deviation"] = num(c.log_deviation);
  j["window_decades"] = c.window_decades;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

}  // namespace sklab::io
