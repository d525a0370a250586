#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sklab/catalog.hpp"
#include "sklab/io.hpp"

using namespace sklab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sklab_test_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST(Io, DoublesRoundTripShortest) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(io::parse_double(io::format_double(v)), v);
  }
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(2.0), "2");
  EXPECT_EQ(kind_of([] { io::parse_double("1.5x"); }), ErrorKind::malformed_input);
}

TEST(Io, HashIsStableAndKeyOrderIndependent) {
  EXPECT_EQ(io::hash_hex(""), "cbf29ce484222325");
  const auto a = nlohmann::json::parse(R"({"b": 1, "a": [1, 2]})");
  const auto b = nlohmann::json::parse(R"({"a": [1, 2], "b": 1})");
  EXPECT_EQ(io::config_hash(a), io::config_hash(b));
  EXPECT_NE(io::config_hash(a), io::config_hash(nlohmann::json::parse(R"({"b": 2, "a": [1, 2]})")));
}

TEST(Io, GridJsonAndSpec) {
  const AnnulusGrid g(0.05, 0.9, 64, 32, {0.0, 1.0});
  EXPECT_EQ(io::grid_from_json(io::grid_to_json(g)), g);
  EXPECT_EQ(io::parse_grid_spec("0.05:0.9:64:32:0:1"), g);
  EXPECT_EQ(io::parse_grid_spec("0.05:0.9:64:32"), AnnulusGrid(0.05, 0.9, 64, 32));
  EXPECT_EQ(kind_of([] { io::parse_grid_spec("0.05:0.9:64"); }), ErrorKind::malformed_input);
  EXPECT_EQ(kind_of([] { io::parse_grid_spec("0.05:0.9:64.5:32"); }), ErrorKind::malformed_input);
  EXPECT_EQ(kind_of([] { io::parse_grid_spec("0.05:0.9:4:32"); }), ErrorKind::grid_too_small);
  auto j = io::grid_to_json(g);
  j["spacing"] = "uniform";
  EXPECT_EQ(kind_of([&] { io::grid_from_json(j); }), ErrorKind::malformed_input);
}

TEST(Io, HarmonicSpecJson) {
  HarmonicSpec mixed{{{2.0, harmonic::Monomial{3}}, {-1.0, harmonic::LogAbs{}},
                      {0.5, harmonic::CoordinateX{}}, {1.0, harmonic::Constant{4.0}}},
                     0.25};
  EXPECT_EQ(io::h_spec_from_json(io::h_spec_to_json(mixed)), mixed);
  EXPECT_EQ(io::h_spec_from_json(nlohmann::json::parse(R"({"kind": "monomial", "n": 1, "a": 2})")),
            HarmonicSpec::monomial(1, 1.0, 2.0));
  EXPECT_EQ(io::h_spec_from_json(nlohmann::json::parse(R"({"kind": "log_abs", "weight": -1})")),
            HarmonicSpec::log_abs(-1.0));
  for (const char* bad : {R"({"kind": "monomial", "n": -1})", R"({"kind": "spline"})",
                          R"({"kind": "coordinate_x", "scale": 2})",
                          R"({"kind": "linear_combination", "terms": [{"kind": "log_abs", "a": 1}]})"}) {
    EXPECT_EQ(kind_of([&] { io::h_spec_from_json(nlohmann::json::parse(bad)); }),
              ErrorKind::malformed_input)
        << bad;
  }
}

TEST(Io, FieldTableRoundTrip) {
  const auto m = poincare_family("punctured_disc");
  const auto g = m.grid(12, 10, 0.05, 0.9);
  const auto w = m.sample_w(g), u = m.sample_u(g);
  const auto dh = sample_dh(m.h_spec, g);
  const auto path = scratch("table.csv");
  io::write_field_table(path, g, {{"w", &w}, {"u", &u}}, {{"dh", &dh}}, "abc");
  const auto back = io::read_field_column(path, g, "w");
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(back.values()[k], w.values()[k]);

  const auto text = slurp(path);
  EXPECT_EQ(text.substr(0, text.find('\n')), "i_radial,i_angular,r,theta,w,u,dh_p,dh_q");
  const auto side = nlohmann::json::parse(slurp(path.string() + ".json"));
  EXPECT_EQ(side["schema_version"], io::schema_version);
  EXPECT_EQ(side["config_hash"], "abc");
  EXPECT_EQ(io::grid_from_json(side["grid"]), g);

  EXPECT_EQ(kind_of([&] { io::read_field_column(path, g, "v"); }), ErrorKind::malformed_input);
  EXPECT_EQ(kind_of([&] { io::read_field_column(path, AnnulusGrid(0.05, 0.9, 12, 12), "w"); }),
            ErrorKind::malformed_input);
}

TEST(Io, ProfileRoundTripAndMalformedInput) {
  RadialProfile p{{0.1, 0.01, 0.001}, {0.3, 0.2, 0.1}, {1.0, 1.5, 1.0}};
  const auto path = scratch("profile.csv");
  io::write_profile(path, p, "h");
  const auto q = io::read_profile(path);
  EXPECT_EQ(q.radii, p.radii);
  EXPECT_EQ(q.w_values, p.w_values);
  EXPECT_EQ(q.w_spread, p.w_spread);
  EXPECT_TRUE(fs::exists(path.string() + ".json"));

  const auto bad = scratch("bad.csv");
  for (const char* text : {"r,w\n0.1,1\n", "r,w_mean,w_spread\n0.1,1\n",
                           "r,w_mean,w_spread\n0.1,abc,1\n", "r,w_mean,w_spread\n0.1,-1,1\n",
                           "r,w_mean,w_spread\n0.01,1,1\n0.1,1,1\n"}) {
    std::ofstream(bad, std::ios::binary) << text;
    EXPECT_EQ(kind_of([&] { io::read_profile(bad); }), ErrorKind::malformed_input) << text;
  }
  EXPECT_EQ(kind_of([] { io::read_profile("/nonexistent/profile.csv"); }),
            ErrorKind::malformed_input);
}

TEST(Io, ClassificationJson) {
  auto c = Classification::power(0.5, 2.0);
  c.fit_quality = 1e-3;
  const auto j = io::classification_to_json(c);
  EXPECT_EQ(j["branch"], "power");
  EXPECT_EQ(j["beta"], 0.5);
  EXPECT_EQ(j["C"], 2.0);
  EXPECT_TRUE(j["log_deviation"].is_null());
  const auto l = io::classification_to_json(Classification::logarithmic(1));
  EXPECT_EQ(l["n_plus_1"], 1);
  EXPECT_FALSE(l.contains("beta"));
}
