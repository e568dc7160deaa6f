#include "mbasis/error.hpp"
#include "mbasis/kuelbs.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace mbasis;

namespace {

TEST(DualityFamily, NormalizesBeforeMapping) {
  const NormSpec l2 = NormSpec::pnorm(2, 2.0);
  const std::vector<Vector> basis{{1.0, 0.0}, {0.0, 1.0}};
  const auto fam = build_duality_family(l2, basis);
  EXPECT_TRUE(fam[0].coords.isApprox(Vec{{1.0, 0.0}}));
  EXPECT_TRUE(fam[1].coords.isApprox(Vec{{0.0, 1.0}}));

  const std::vector<Vector> v{{3.0, 4.0}};
  const auto f = build_duality_family(l2, v);
  EXPECT_NEAR(f[0].coords(0), 0.6, 1e-15);
  EXPECT_NEAR(f[0].coords(1), 0.8, 1e-15);

  const std::vector<Vector> w{{2.0, 0.0}};
  const auto g = build_duality_family(NormSpec::pnorm(2, 1.0), w);
  EXPECT_DOUBLE_EQ(g[0].coords(0), 1.0);
  EXPECT_DOUBLE_EQ(g[0].coords(1), 0.0);

  const std::vector<Vector> zero{{0.0, 0.0}};
  EXPECT_THROW(build_duality_family(l2, zero), InvalidArgument);
}

TEST(DualityFamily, UnitNormingOnRandomSpaces) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + trial % 6;
    const NormSpec s = gen::any_space(rng, d, trial);
    std::vector<Vector> vs;
    for (int k = 0; k < d + 2; ++k) vs.emplace_back(gen::gaussian(rng, d));
    const auto fam = build_duality_family(s, vs);
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const Vector unit(vs[k].coords / norm(s, vs[k]));
      EXPECT_NEAR(fam[k](unit), 1.0, 1e-8);
      EXPECT_NEAR(dual_norm(s, fam[k]), 1.0, s.default_tolerance());
    }
  }
}

TEST(Weights, GeometricAndUniform) {
  const Vec g = geometric_weights(3);
  EXPECT_NEAR(g(0), 4.0 / 7.0, 1e-15);
  EXPECT_NEAR(g(1), 2.0 / 7.0, 1e-15);
  EXPECT_NEAR(g(2), 1.0 / 7.0, 1e-15);
  EXPECT_NEAR(geometric_weights(60).sum(), 1.0, 1e-14);
  EXPECT_NEAR(uniform_weights(7).sum(), 1.0, 1e-15);
  EXPECT_THROW(geometric_weights(0), InvalidArgument);
}

TEST(KuelbsGram, Examples) {
  const NormSpec l2 = NormSpec::pnorm(2, 2.0);
  const std::vector<Functional> id{{1.0, 0.0}, {0.0, 1.0}};
  const HilbertStructure a = kuelbs_gram(l2, id, Vec{{0.5, 0.5}});
  EXPECT_TRUE(a.gram().isApprox(0.5 * Mat::Identity(2, 2)));
  EXPECT_DOUBLE_EQ(h_norm(a, Vector{1.0, 1.0}), 1.0);

  const std::vector<Functional> bars{{1.0, -1.0}, {0.0, 1.0}};
  const HilbertStructure b = kuelbs_gram(l2, bars, Vec{{0.5, 0.5}});
  Mat expected(2, 2);
  expected << 0.5, -0.5, -0.5, 1.0;
  EXPECT_LE((b.gram() - expected).cwiseAbs().maxCoeff(), 1e-15);
  const Vector x1{1.0, 0.0};
  const Vector x2{1.0, 1.0};
  EXPECT_DOUBLE_EQ(h_inner(b, x1, x1), 0.5);
  EXPECT_NEAR(h_norm(b, x1), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(h_inner(b, x1, x2), 0.0);
  EXPECT_TRUE(b.definite());
}

TEST(KuelbsGram, Errors) {
  const NormSpec l2 = NormSpec::pnorm(2, 2.0);
  const std::vector<Functional> id{{1.0, 0.0}, {0.0, 1.0}};
  EXPECT_THROW(kuelbs_gram(l2, id, Vec{{0.5, 0.6}}), InvalidArgument);
  EXPECT_THROW(kuelbs_gram(l2, id, Vec{{1.0}}), InvalidArgument);
  EXPECT_THROW(kuelbs_gram(l2, id, Vec{{1.5, -0.5}}), InvalidArgument);
  const std::vector<Functional> wrong{{1.0, 0.0, 0.0}};
  EXPECT_THROW(kuelbs_gram(l2, wrong, Vec{{1.0}}), DimensionMismatch);
  const HilbertStructure hs = kuelbs_gram(l2, id, Vec{{0.5, 0.5}});
  EXPECT_THROW(h_inner(hs, Vector{1.0}, Vector{1.0, 0.0}), DimensionMismatch);
}

TEST(KuelbsGram, ReconstructsWeightedSum) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 7;
    const int m = 1 + trial % 10;
    std::vector<Functional> fs;
    for (int k = 0; k < m; ++k) fs.emplace_back(gen::gaussian(rng, d));
    const Vec t = trial % 2 ? geometric_weights(m) : uniform_weights(m);
    const HilbertStructure hs = kuelbs_gram(NormSpec::pnorm(d, 2.0), fs, t);
    const Vector u(gen::gaussian(rng, d));
    const Vector v(gen::gaussian(rng, d));
    double direct = 0.0;
    for (int k = 0; k < m; ++k) direct += t(k) * fs[k](u) * fs[k](v);
    EXPECT_NEAR(h_inner(hs, u, v), direct, 1e-10);
    EXPECT_EQ(hs.gram(), hs.gram().transpose());
    EXPECT_GE(hs.min_eigenvalue(), -1e-10);
  }
}

TEST(KuelbsGram, DefiniteIffFamilySpans) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 3 + trial % 5;
    std::vector<Functional> full, deficient;
    for (int k = 0; k < d + 1; ++k) full.emplace_back(gen::gaussian(rng, d));
    for (int k = 0; k < d - 1; ++k) deficient.emplace_back(gen::gaussian(rng, d));
    deficient.push_back(Functional(deficient[0].coords + deficient[1].coords));
    const NormSpec s = NormSpec::pnorm(d, 2.0);
    const HilbertStructure a = kuelbs_gram(s, full, uniform_weights(d + 1));
    EXPECT_TRUE(a.definite());
    EXPECT_GT(a.min_eigenvalue(), 0.0);
    EXPECT_FALSE(kernel_witness(a).has_value());

    const HilbertStructure b = kuelbs_gram(s, deficient, uniform_weights(d));
    EXPECT_FALSE(b.definite());
    const auto w = kernel_witness(b);
    ASSERT_TRUE(w.has_value());
    EXPECT_GT(w->coords.norm(), 0.5);
    EXPECT_LE(h_norm(b, *w), 1e-8);
  }
}

TEST(KuelbsGram, LinearInWeights) {
  // Splitting u_1 into two copies with weights t1/3 and 2 t1/3 changes nothing.
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 5;
    std::vector<Functional> fs;
    for (int k = 0; k < d; ++k) fs.emplace_back(gen::gaussian(rng, d));
    const Vec t = geometric_weights(d);
    std::vector<Functional> dup = fs;
    dup.push_back(fs[0]);
    Vec td(d + 1);
    td.head(d) = t;
    td(0) = t(0) / 3.0;
    td(d) = 2.0 * t(0) / 3.0;
    td /= td.sum();
    const NormSpec s = NormSpec::pnorm(d, 2.0);
    EXPECT_LE((kuelbs_gram(s, fs, t).gram() - kuelbs_gram(s, dup, td).gram()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Continuity, DiagonalExample) {
  const NormSpec l2 = NormSpec::pnorm(2, 2.0);
  const std::vector<Functional> id{{1.0, 0.0}, {0.0, 1.0}};
  const HilbertStructure hs = kuelbs_gram(l2, id, Vec{{0.5, 0.5}});
  const std::vector<Vector> samples{{1.0, 0.0}, {3.0, -4.0}, {0.2, 0.1}};
  const AuditReport r = check_continuity(hs, samples);
  EXPECT_NEAR(r.metric("max_ratio"), std::sqrt(0.5), 1e-15);
  EXPECT_TRUE(r.check("continuity_bound"));
  EXPECT_TRUE(r.check("positive_definite"));
  EXPECT_DOUBLE_EQ(r.metric("min_eigenvalue"), 0.5);
}

TEST(Continuity, EmptySampleListIsVacuous) {
  const NormSpec l2 = NormSpec::pnorm(2, 2.0);
  const std::vector<Functional> id{{1.0, 0.0}};
  const HilbertStructure hs = kuelbs_gram(l2, id, Vec{{1.0}});
  const AuditReport r = check_continuity(hs, {});
  EXPECT_EQ(r.metric("max_ratio"), 0.0);
  EXPECT_TRUE(r.check("continuity_bound"));
  EXPECT_FALSE(r.check("positive_definite"));
}

TEST(Continuity, RejectsFunctionalAboveUnitNorm) {
  const NormSpec l2 = NormSpec::pnorm(2, 2.0);
  const std::vector<Functional> big{{2.0, 0.0}, {0.0, 1.0}};
  const HilbertStructure hs = kuelbs_gram(l2, big, Vec{{0.5, 0.5}});
  EXPECT_THROW(check_continuity(hs, {}), InvalidArgument);
}

TEST(Continuity, HoldsForDualityFamilies) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 70; ++trial) {
    const int d = 2 + trial % 7;
    const NormSpec s = gen::any_space(rng, d, trial);
    std::vector<Vector> dense;
    for (int k = 0; k < d + 3; ++k) dense.emplace_back(gen::gaussian(rng, d));
    const auto fam = build_duality_family(s, dense);
    const HilbertStructure hs = kuelbs_gram(s, fam, geometric_weights(d + 3));
    std::vector<Vector> samples;
    for (int k = 0; k < 200; ++k) samples.emplace_back(gen::gaussian(rng, d));
    const AuditReport r = check_continuity(hs, samples);
    EXPECT_LE(r.metric("max_ratio"), 1.0 + 1e-9) << gen::describe(s);
    for (const auto& u : samples) EXPECT_LE(h_norm(hs, u), norm(s, u) + 1e-9);
  }
}

}  // namespace
