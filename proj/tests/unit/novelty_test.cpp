#include <gtest/gtest.h>

#include <vector>

#include "chemspace/novelty.hpp"
#include "support/test_support.hpp"

namespace chemspace {
namespace {

NoveltyContext context(std::size_t members, double t = 0.6) {
  NoveltyContext ctx;
  ctx.t = t;
  for (std::size_t i = 0; i < members; ++i) ctx.members.push_back(i);
  return ctx;
}

TEST(NoveltyDiversity, MeanDistance) {
  const std::vector<double> d{0.2, 0.4, 0.6};
  EXPECT_NEAR(novelty_diversity([&](std::size_t m) { return d[m]; }, context(3)), 0.4, 1e-12);
  const std::vector<double> dup{0.0};
  EXPECT_EQ(novelty_diversity([&](std::size_t m) { return dup[m]; }, context(1)), 0.0);
  EXPECT_THROW(novelty_diversity([](std::size_t) { return 0.0; }, context(0)), ValidationError);
}

TEST(NoveltySumBottleneck, NearestDistance) {
  const std::vector<double> d{0.2, 0.4};
  EXPECT_EQ(novelty_sumbottleneck([&](std::size_t m) { return d[m]; }, context(2)), 0.2);
  const std::vector<double> member{0.3, 0.0};
  EXPECT_EQ(novelty_sumbottleneck([&](std::size_t m) { return member[m]; }, context(2)), 0.0);
}

TEST(NoveltyCircles, StrictThreshold) {
  const std::vector<double> d{0.5, 0.9};
  EXPECT_EQ(novelty_circles([&](std::size_t m) { return d[m]; }, context(2, 0.6)), 0);
  EXPECT_EQ(novelty_circles([&](std::size_t m) { return d[m]; }, context(2, 0.0)), 1);
  const std::vector<double> tie{0.6};
  EXPECT_EQ(novelty_circles([&](std::size_t m) { return tie[m]; }, context(1, 0.6)), 0);
}

TEST(Novelty, MatchesBruteForceOnRandomFingerprints) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Fingerprint> ref;
    for (int i = 0; i < 25; ++i) ref.push_back(testing::random_fingerprint(rng, 128, 0.2));
    const auto x = testing::random_fingerprint(rng, 128, 0.2);
    const NoveltyScorer scorer(ref, 0.6);
    double sum = 0.0, nearest = 1.0;
    for (const auto& r : ref) {
      const double d = testing::naive_tanimoto(x, r);
      sum += d;
      nearest = std::min(nearest, d);
    }
    EXPECT_NEAR(scorer.diversity(x), sum / 25.0, 1e-12);
    EXPECT_DOUBLE_EQ(scorer.sumbottleneck(x), nearest);
    EXPECT_EQ(scorer.circles(x), nearest > 0.6 ? 1 : 0);
  }
}

TEST(Novelty, AdmittedCandidateExtendsGreedyPacking) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Fingerprint> ref;
    for (int i = 0; i < 60; ++i) ref.push_back(testing::random_fingerprint(rng, 64, 0.15));
    const NoveltyScorer scorer(ref, 0.7, NoveltyReference::centers);
    auto centers = scorer.context().members;
    for (int c = 0; c < 20; ++c) {
      const auto x = testing::random_fingerprint(rng, 64, 0.15);
      if (scorer.circles(x) != 1) continue;
      std::vector<Fingerprint> packing;
      for (std::size_t m : centers) packing.push_back(ref[m]);
      packing.push_back(x);
      const FingerprintOracle o(packing);
      std::vector<std::size_t> all(packing.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      ASSERT_TRUE(is_packing(o, all, 0.7));
    }
  }
}

}  // namespace
}  // namespace chemspace
