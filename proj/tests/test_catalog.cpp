#include <gtest/gtest.h>

#include "sklab/catalog.hpp"
#include "sklab/operators.hpp"
#include "sklab/singularity.hpp"
#include "sklab/sk_verify.hpp"
#include "support.hpp"

using namespace sklab;

TEST(Phi, PointValues) {
  const auto [p, q] = phi_at({1.0, 0.0});
  EXPECT_EQ(p, 0.0);
  EXPECT_EQ(q, -1.0);
}

TEST(HarmonicSpec, SampledDifferentials) {
  const AnnulusGrid g(0.1, 1.0, 16, 16);
  const auto dx = sample_dh(HarmonicSpec::coordinate_x(), g);
  const auto dl = sample_dh(HarmonicSpec::log_abs(), g);
  const auto dz2 = sample_dh(HarmonicSpec::monomial(1), g);
  const auto h2 = sample_h(HarmonicSpec::monomial(1), g);
  for (std::size_t i = 0; i < g.n_radial(); i += 3)
    for (std::size_t j = 0; j < g.n_angular(); j += 5) {
      const auto z = g.z(i, j);
      const double x = z.real(), y = z.imag(), r2 = std::norm(z);
      const auto k = g.index(i, j);
      EXPECT_EQ(dx.p()[k], 1.0);
      EXPECT_EQ(dx.q()[k], 0.0);
      EXPECT_NEAR(dl.p()[k], x / r2, 1e-12 / r2);
      EXPECT_NEAR(dl.q()[k], y / r2, 1e-12 / r2);
      EXPECT_NEAR(dz2.p()[k], 2.0 * x, 1e-14);
      EXPECT_NEAR(dz2.q()[k], -2.0 * y, 1e-14);
      EXPECT_NEAR(h2(i, j), x * x - y * y, 1e-14);
    }
}

TEST(HarmonicSpec, SampledDifferentialIncludesPhi) {
  const AnnulusGrid g(0.1, 1.0, 8, 8);
  const auto d = sample_dh(HarmonicSpec::coordinate_x(1.0, 0.5), g);
  const auto ph = phi(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(d.p()[k], 1.0 + 0.5 * ph.p()[k], 1e-14);
    EXPECT_NEAR(d.q()[k], 0.5 * ph.q()[k], 1e-14);
  }
}

TEST(HarmonicSpec, EverySpecIsHarmonic) {
  for (const auto& spec : {HarmonicSpec::monomial(2), HarmonicSpec::monomial(-3),
                           HarmonicSpec::log_abs(), HarmonicSpec::coordinate_x(),
                           HarmonicSpec::constant(3.0)}) {
    std::vector<double> err;
    for (std::size_t n : {64, 128, 256}) {
      const AnnulusGrid g(0.2, 1.0, n, n);
      err.push_back(interior_max_abs(laplacian(sample_h(spec, g))));
    }
    if (err.back() < 1e-9) continue;  // discretely harmonic
    for (double p : test::pairwise_orders(err)) EXPECT_GT(p, 1.9) << describe(spec);
  }
  EXPECT_THROW(HarmonicSpec::monomial(-1), Error);
}

TEST(PoincareFamily, PointValues) {
  EXPECT_NEAR(poincare_family("punctured_disc").w({std::exp(-1.0), 0.0}), std::exp(-1.0), 1e-16);
  EXPECT_DOUBLE_EQ(poincare_family("disc").w({0.0, 0.0}), 0.5);
  EXPECT_DOUBLE_EQ(poincare_family("half_plane").w({0.0, 1.0}), 1.0);
  try {
    poincare_family("nosuch");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::unknown_entry);
  }
  EXPECT_EQ(poincare_family("punctured_disc").expected.branch, Branch::logarithmic);
  EXPECT_EQ(poincare_family("punctured_disc").expected.n_plus_1, 1);
}

TEST(LogMetric, PointValues) {
  const auto m = log_metric();
  EXPECT_NEAR(m.w({std::exp(-1.0), 0.0}), 1.0, 1e-15);
  EXPECT_NEAR(m.u({0.0, std::exp(-2.0)}), -std::log(2.0), 1e-15);
  EXPECT_EQ(m.expected.n_plus_1, 0);
}

TEST(LogMetric, KazdanWarnerResidualSecondOrder) {
  const auto m = log_metric();
  std::vector<double> res;
  for (std::size_t n : {64, 128, 256}) {
    const auto g = m.grid(n, n, 0.05, 0.5);
    res.push_back(kazdan_warner_residual(m.h_spec, m.sample_u(g)));
  }
  for (double p : test::pairwise_orders(res)) EXPECT_NEAR(p, 2.0, 0.2);
}

TEST(ConicalMetric, PointValuesAndBoundary) {
  const auto m = conical_metric(0.5);
  // 2 * (1/4)^{1/2} * (1 - (1/4)^{1}) = 3/4.
  EXPECT_NEAR(m.w({0.25, 0.0}), 0.75, 1e-15);
  EXPECT_LT(m.w({1.0 - 1e-9, 0.0}), 1e-8);
  EXPECT_THROW(conical_metric(0.0), Error);
  EXPECT_THROW(conical_metric(1.0), Error);
  EXPECT_EQ(m.expected.branch, Branch::power);
  EXPECT_EQ(m.expected.beta, 0.5);
}

TEST(ConicalMetric, ConstantCurvatureOfSource) {
  // Symbolic value: K = -4 for every alpha (tests/oracles/derive.py).
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto m = conical_metric(alpha);
    const auto k = curvature(m.sample_u(m.grid(4096, 8, 0.1, 0.5)), CurvatureOf::source);
    for (std::size_t i = k.valid().begin; i < k.valid().end; ++i)
      EXPECT_NEAR(k(i, 0) / -4.0, 1.0, 1e-6) << alpha;
  }
}

TEST(PicardLocalModel, PointValuesAndFlag) {
  const auto m = picard_local_model(0.5);
  EXPECT_DOUBLE_EQ(m.w({0.25, 0.0}), 0.5);
  EXPECT_TRUE(m.model_only);
  EXPECT_THROW(picard_local_model(1.5), Error);
  try {
    check_eta_system(m, AnnulusGrid(0.05, 0.5, 16, 16));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::model_only);
  }
}

TEST(Catalog, PositiveAndConsistentOnCheckAnnulus) {
  const auto entries = catalog_entries();
  EXPECT_GE(entries.size(), 6u);
  for (const auto& m : entries) {
    const auto g = m.grid(32, 32, m.check_r_in, m.check_r_out);
    const auto w = m.sample_w(g), u = m.sample_u(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_GT(w.values()[k], 0.0) << m.name;
      EXPECT_NEAR(u.values()[k], -std::log(w.values()[k]), 1e-15) << m.name;
    }
  }
}

TEST(Catalog, ExpectedClassificationReproduced) {
  const auto radii = log_spaced_radii(0.1, 1e-8, 8);
  for (const auto& m : catalog_entries()) {
    const auto c = classify(extract_profile(m, radii), cubic_form_order(m.h_spec));
    ASSERT_EQ(c.branch, m.expected.branch) << m.name << ": " << c.note;
    if (c.branch == Branch::power) {
      EXPECT_NEAR(c.beta, m.expected.beta, 0.02) << m.name;
      EXPECT_NEAR(c.c / m.expected.c, 1.0, 0.05) << m.name;
    } else {
      EXPECT_EQ(c.n_plus_1, m.expected.n_plus_1) << m.name;
    }
  }
}

TEST(Catalog, Lookup) {
  EXPECT_EQ(find_metric("conical(0.25)").name, "conical(0.25)");
  EXPECT_EQ(find_metric("conical").expected.beta, 0.5);
  EXPECT_EQ(find_metric("picard_local(0.3)").expected.beta, 0.3);
  EXPECT_EQ(find_metric("flat").name, "flat");
  for (const char* bad : {"nosuch", "conical(x)", "conical(0.5"}) {
    try {
      find_metric(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::unknown_entry) << bad;
    }
  }
}

TEST(Catalog, DomainEnforced) {
  const auto m = poincare_family("disc");
  EXPECT_THROW(m.grid(16, 16, 0.1, 1.5), Error);
  EXPECT_THROW(m.sample_w(AnnulusGrid(0.1, 0.5, 16, 16, {0.0, 1.0})), Error);
}
