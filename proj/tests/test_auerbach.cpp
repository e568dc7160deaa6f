#include "mbasis/auerbach.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

using namespace mbasis;

namespace {

TEST(Auerbach, EuclideanGivesOrthonormalBasis) {
  const AuerbachResult r = auerbach_search(NormSpec::pnorm(3, 2.0), 500, 7);
  EXPECT_TRUE(r.converged);
  const Mat x = r.system.matrix();
  EXPECT_LE((x.transpose() * x - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LE(r.epsilon_search, 1e-9);
}

TEST(Auerbach, L1GivesSignedStandardBasis) {
  const AuerbachResult r = auerbach_search(NormSpec::pnorm(2, 1.0), 500, 3);
  EXPECT_TRUE(r.converged);
  const Mat x = r.system.matrix();
  for (int j = 0; j < 2; ++j) {
    const Vec a = x.col(j).cwiseAbs();
    EXPECT_NEAR(a.maxCoeff(), 1.0, 1e-12);
    EXPECT_NEAR(a.minCoeff(), 0.0, 1e-12);
  }
  EXPECT_NEAR(std::abs(x.determinant()), 1.0, 1e-12);
  EXPECT_LE((r.biorthogonal.products.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(Auerbach, RandomPolyhedralAgainstVertexSearch) {
  std::mt19937_64 rng(42);
  const NormSpec s = gen::polyhedral(rng, 3, 3);
  const AuerbachResult r = auerbach_search(s, 1000, 42);
  EXPECT_LE(r.biorthogonal.products.maxCoeff(), 1.0 + 1e-4);
  EXPECT_LE(r.biorthogonal.defect(), 1e-10);

  // Global maximum of |det| over the ball sits on vertex triples; that
  // triple is itself an Auerbach system.
  const auto verts = oracle::vertices(s.rows());
  double best = 0.0;
  Mat best_x(3, 3);
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b)
      for (std::size_t c = b + 1; c < verts.size(); ++c) {
        Mat m(3, 3);
        m << verts[a], verts[b], verts[c];
        const double det = std::abs(m.determinant());
        if (det > best) {
          best = det;
          best_x = m;
        }
      }
  EXPECT_LE(r.det_trace.back(), best * (1.0 + 1e-9));
  SystemOfVectors brute{s, {}};
  for (int j = 0; j < 3; ++j) brute.vectors.emplace_back(best_x.col(j));
  const Mat inv = best_x.inverse();
  std::vector<Functional> fs;
  for (int j = 0; j < 3; ++j) fs.emplace_back(inv.row(j).transpose());
  EXPECT_LE(make_biorthogonal_system(brute, fs).products.maxCoeff(), 1.0 + 1e-6);
}

TEST(Auerbach, AllKindsMonotoneAndNearOne) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 21; ++trial) {
    const int d = 2 + trial % 3;
    const NormSpec s = gen::any_space(rng, d, trial);
    const AuerbachResult r = auerbach_search(s, 2000, 100 + trial);
    EXPECT_LE(r.epsilon_search, 1e-4) << gen::describe(s);
    for (const auto& x : r.system.vectors) EXPECT_NEAR(norm(s, x), 1.0, 1e-9);
    for (std::size_t k = 1; k < r.det_trace.size(); ++k) EXPECT_GE(r.det_trace[k], r.det_trace[k - 1]);
  }
}

TEST(Auerbach, DeterministicGivenSeed) {
  const NormSpec s = NormSpec::pnorm(3, 4.0);
  const AuerbachResult a = auerbach_search(s, 300, 9);
  const AuerbachResult b = auerbach_search(s, 300, 9);
  EXPECT_EQ(a.system.matrix(), b.system.matrix());
  EXPECT_EQ(a.det_trace, b.det_trace);
}

}  // namespace
