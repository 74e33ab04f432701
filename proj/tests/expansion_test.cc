// Copyright 2026 The Setxpand Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "setxpand/expansion.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "setxpand/random.h"
#include "test_util.h"

namespace setxpand {
namespace {

// Seeds s1 = 0 and s2 = 1 on orthogonal axes. Candidate 2 has cosines 0.4 and
// 0.3 to them, candidate 3 has 0.1 and 0.3; the third and fourth axes keep
// both at unit length.
EmbeddingModel HandModel() {
  const float r2 = static_cast<float>(std::sqrt(1.0 - 0.4 * 0.4 - 0.3 * 0.3));
  const float r3 = static_cast<float>(std::sqrt(1.0 - 0.1 * 0.1 - 0.3 * 0.3));
  return EmbeddingModel(ContextType::kLin, 4, {0, 1, 2, 3}, {"s1", "s2", "c1", "c2"},
                        {1, 0, 0, 0,  //
                         0, 1, 0, 0,  //
                         0.4f, 0.3f, r2, 0,  //
                         0.1f, 0.3f, 0, r3});
}

TEST(CombSumTest, HandComputedNormalizedMean) {
  // Per seed: s1 {c1: 0.4/0.5 = 0.8, c2: 0.2}, s2 {c1: 0.5, c2: 0.5}.
  const ScoreMap scores = ScoreCombSum(HandModel(), SeedSetFromIds(std::vector<int>{0, 1}), 2);
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_NEAR(scores.at(2), 0.65, 1e-6);
  EXPECT_NEAR(scores.at(3), 0.35, 1e-6);
}

TEST(CombSumTest, CandidateOfOneSeedOnlyGetsHalf) {
  EmbeddingModel m(ContextType::kLin, 2, {0, 1, 2, 3}, {"s1", "s2", "c1", "c2"},
                   {1, 0, 0, 1, 1, 0.1f, 0.1f, 1});
  const ScoreMap scores = ScoreCombSum(m, SeedSetFromIds(std::vector<int>{0, 1}), 1);
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_DOUBLE_EQ(scores.at(2), 0.5);
  EXPECT_DOUBLE_EQ(scores.at(3), 0.5);
}

TEST(CentroidTest, OrthogonalSeedsAndCollinearCandidate) {
  EmbeddingModel m(ContextType::kLin, 2, {0, 1, 2, 3}, {"a", "b", "c", "d"},
                   {1, 0, 0, 1, 1, 1, 1, -1});
  const ScoreMap scores = ScoreCentroid(m, SeedSetFromIds(std::vector<int>{0, 1}), 5);
  EXPECT_NEAR(scores.at(2), 1.0, 1e-12);
  EXPECT_NEAR(scores.at(3), 0.0, 1e-12);
  EXPECT_EQ(scores.count(0), 0u);
}

TEST(ScoringTest, SingleSeedGivesSameRankingForBothMethods) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    EmbeddingModel m = testing::RandomModel(15, 3, rng);
    const SeedSet seed = SeedSetFromIds(std::vector<int>{static_cast<int>(rng.Below(15))});
    std::vector<Ranked> a = RankScores(ScoreCentroid(m, seed, 6), -1);
    std::vector<Ranked> b = RankScores(ScoreCombSum(m, seed, 6), -1);
    ASSERT_EQ(a.size(), b.size());
    for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].id, b[i].id);
  }
}

TEST(ScoringTest, MatchesBruteForceAndIgnoresSeedOrder) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int terms = 3 + static_cast<int>(rng.Below(18));
    EmbeddingModel m = testing::RandomModel(terms, 2 + static_cast<int>(rng.Below(3)), rng);
    std::vector<int> all(terms);
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> seed = rng.Sample(all, 1 + rng.Below(3));
    const int k = 1 + static_cast<int>(rng.Below(terms));
    std::vector<int> reversed(seed.rbegin(), seed.rend());
    const ScoreMap cs = ScoreCombSum(m, SeedSetFromIds(seed), k);
    EXPECT_EQ(cs, ScoreCombSum(m, SeedSetFromIds(reversed), k));
    const ScoreMap want = testing::BruteForceCombSum(m, seed, k);
    ASSERT_EQ(cs.size(), want.size());
    for (const auto &[id, v] : want) EXPECT_NEAR(cs.at(id), v, 1e-10);
    const ScoreMap ce = ScoreCentroid(m, SeedSetFromIds(seed), k);
    const ScoreMap want_ce = testing::BruteForceCentroid(m, seed, k);
    ASSERT_EQ(ce.size(), want_ce.size());
    for (const auto &[id, v] : want_ce) EXPECT_NEAR(ce.at(id), v, 1e-10);
    for (int s : seed) {
      EXPECT_EQ(cs.count(s), 0u);
      EXPECT_EQ(ce.count(s), 0u);
    }
  }
}

TEST(ScoringTest, SeedsOutsideModelAreSkipped) {
  const SeedSet seed = SeedSetFromIds(std::vector<int>{0, 99});
  EXPECT_EQ(ScoreCentroid(HandModel(), seed, 3), ScoreCentroid(HandModel(), SeedSetFromIds(std::vector<int>{0}), 3));
  EXPECT_TRUE(ScoreCombSum(HandModel(), SeedSetFromIds(std::vector<int>{99}), 3).empty());
}

TEST(SoftmaxTest, HandValues) {
  const std::vector<double> v = {std::log(2.0), 0.0, 0.0};
  const std::vector<double> p = Softmax(v);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.25, 1e-15);
  EXPECT_NEAR(p[2], 0.25, 1e-15);
  const std::vector<double> big = {1000.0, 999.0};
  const std::vector<double> q = Softmax(big);
  EXPECT_TRUE(std::isfinite(q[0]));
  EXPECT_NEAR(q[0] + q[1], 1.0, 1e-15);
  EXPECT_TRUE(Softmax(std::vector<double>{}).empty());
}

TEST(SoftmaxTest, RankPreserving) {
  Rng rng(14);
  std::vector<double> v(30);
  for (double &x : v) x = rng.Uniform() * 4 - 2;
  const std::vector<double> p = Softmax(v);
  for (size_t i = 0; i < v.size(); ++i) {
    for (size_t j = 0; j < v.size(); ++j) EXPECT_EQ(v[i] < v[j], p[i] < p[j]);
  }
}

TEST(FeaturesTest, ColumnsAreDistributionsOverTheUniverse) {
  Rng rng(15);
  std::vector<EmbeddingModel> models;
  for (ContextType t : kAllContextTypes) models.push_back(testing::RandomModel(25, 4, rng, t));
  ModelSet set;
  for (int t = 0; t < kNumContextTypes; ++t) set.models[t] = &models[t];
  ScoringParamsByType params;
  for (ScoringParams &p : params) p = {5, 4};
  const SeedSet seed = SeedSetFromIds(std::vector<int>{1, 7});
  const std::vector<int> extra = {7, 20};
  const std::vector<FeatureVector> features = BuildFeatures(set, seed, params, extra);
  EXPECT_TRUE(std::is_sorted(features.begin(), features.end(),
                             [](const auto &a, const auto &b) { return a.candidate < b.candidate; }));
  for (int f = 0; f < kNumFeatures; ++f) {
    double sum = 0.0;
    for (const FeatureVector &fv : features) sum += fv.features[f];
    EXPECT_NEAR(sum, 1.0, 1e-12) << FeatureName(f);
  }
  bool has_extra = false;
  for (const FeatureVector &fv : features) {
    EXPECT_NE(fv.candidate, 1);
    EXPECT_NE(fv.candidate, 7);
    has_extra = has_extra || fv.candidate == 20;
  }
  EXPECT_TRUE(has_extra);
}

TEST(FeaturesTest, SoftmaxOrderMatchesRawOrderPerColumn) {
  Rng rng(16);
  EmbeddingModel m = testing::RandomModel(30, 3, rng);
  ModelSet set;
  set.models[0] = &m;
  ScoringParamsByType params;
  for (ScoringParams &p : params) p = {10, 10};
  const SeedSet seed = SeedSetFromIds(std::vector<int>{0, 1});
  const std::vector<FeatureVector> features = BuildFeatures(set, seed, params);
  const ScoreMap raw = ScoreCentroid(m, seed, 10);
  for (const FeatureVector &a : features) {
    for (const FeatureVector &b : features) {
      const double ra = raw.count(a.candidate) ? raw.at(a.candidate) : 0.0;
      const double rb = raw.count(b.candidate) ? raw.at(b.candidate) : 0.0;
      EXPECT_EQ(ra < rb, a.features[0] < b.features[0]);
    }
  }
}

TEST(FeaturesTest, EmptyUniverseThrows) {
  EmbeddingModel m = HandModel();
  ModelSet set;
  set.models[0] = &m;
  EXPECT_THROW(BuildFeatures(set, SeedSetFromIds(std::vector<int>{42}), {}),
               std::runtime_error);
}

TEST(RankTest, DescendingWithIdTiesAndTruncation) {
  const ScoreMap scores = {{5, 0.2}, {1, 0.9}, {3, 0.2}, {4, 0.5}};
  const std::vector<Ranked> r = RankScores(scores, 3);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0], (Ranked{1, 0.9}));
  EXPECT_EQ(r[1], (Ranked{4, 0.5}));
  EXPECT_EQ(r[2], (Ranked{3, 0.2}));
}

TEST(ResolveSeedsTest, ReportsUnresolved) {
  TermGroupTable groups({{0, "s1", {"s1"}, 5}, {1, "s2", {"s2"}, 5}, {2, "c1", {"c1"}, 5},
                         {3, "c2", {"c2"}, 5}, {4, "orphan", {"orphan"}, 5}});
  EmbeddingModel m = HandModel();
  ModelSet set;
  set.models[2] = &m;
  const std::vector<std::string> inputs = {"S2", "nope", "s1", "orphan", "s1"};
  const SeedSet seed = ResolveSeeds(inputs, groups, set);
  EXPECT_EQ(seed.terms, (std::vector<int>{0, 1}));
  EXPECT_EQ(seed.unresolved, (std::vector<std::string>{"nope", "orphan"}));
}

TEST(FeatureDumpTest, HeaderNamesColumnsInOrder) {
  TermGroupTable groups({{0, "a", {"a"}, 1}});
  std::ostringstream out;
  WriteFeatureDump(out, {{0, {}}}, groups);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "candidate\tlin_cent\tlin_csum\tlist_cent\tlist_csum\tdep_cent\tdep_csum\t"
            "sp_cent\tsp_csum\tup_cent\tup_csum");
}

}  // namespace
}  // namespace setxpand
