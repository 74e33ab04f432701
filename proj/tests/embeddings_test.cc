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

#include "setxpand/embeddings.h"

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "setxpand/random.h"
#include "test_util.h"

namespace setxpand {
namespace {

constexpr int kClasses = 2;
constexpr int kPerClass = 6;

TermGroupTable PlantedGroups() {
  std::vector<TermGroup> groups;
  for (int i = 0; i < kClasses * kPerClass; ++i) {
    const std::string name = "term" + std::string(1, static_cast<char>('a' + i));
    groups.push_back({i, name, {name}, 100});
  }
  return TermGroupTable(std::move(groups));
}

// Terms of one class share a private context vocabulary.
PairCounter PlantedPairs(uint64_t seed) {
  Rng rng(seed);
  PairCounter pairs;
  for (int c = 0; c < kClasses; ++c) {
    for (int t = 0; t < kPerClass; ++t) {
      for (int n = 0; n < 40; ++n) {
        pairs.Add(Unit::Term(c * kPerClass + t),
                  "ctx" + std::to_string(c) + "_" + std::to_string(rng.Below(8)));
      }
    }
  }
  pairs.Add(Unit::Word(0), "ctx0_0", 3);
  return pairs;
}

TrainConfig SmallConfig(uint64_t seed) {
  TrainConfig config;
  config.dim = 16;
  config.epochs = 30;
  config.subsample_threshold = 0.0;
  config.min_pair_count = 1;
  config.rng_seed = seed;
  return config;
}

TEST(EmbeddingsTest, OnlyTermRowsAreKept) {
  const TermGroupTable groups = PlantedGroups();
  const TrainResult r =
      TrainEmbeddings(PlantedPairs(1), ContextType::kLin, groups, SmallConfig(1));
  EXPECT_EQ(r.model.size(), kClasses * kPerClass);
  EXPECT_EQ(r.model.dim(), 16);
  EXPECT_EQ(r.model.context_type(), ContextType::kLin);
  EXPECT_EQ(r.epoch_loss.size(), 30u);
}

TEST(EmbeddingsTest, DeterministicForSeed) {
  const TermGroupTable groups = PlantedGroups();
  const TrainResult a =
      TrainEmbeddings(PlantedPairs(2), ContextType::kList, groups, SmallConfig(7));
  const TrainResult b =
      TrainEmbeddings(PlantedPairs(2), ContextType::kList, groups, SmallConfig(7));
  for (int row = 0; row < a.model.size(); ++row) {
    const auto va = a.model.Row(row), vb = b.model.Row(row);
    EXPECT_TRUE(std::equal(va.begin(), va.end(), vb.begin()));
  }
}

TEST(EmbeddingsTest, ZeroLearningRateLeavesVectorsUnchanged) {
  const TermGroupTable groups = PlantedGroups();
  TrainConfig config = SmallConfig(3);
  config.initial_lr = 0.0;
  const TrainResult r = TrainEmbeddings(PlantedPairs(3), ContextType::kLin, groups, config);
  for (int row = 0; row < r.model.size(); ++row) {
    const auto a = r.model.Row(row), b = r.initial_model.Row(row);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
}

TEST(EmbeddingsTest, LossDecreases) {
  const TermGroupTable groups = PlantedGroups();
  const TrainResult r =
      TrainEmbeddings(PlantedPairs(4), ContextType::kLin, groups, SmallConfig(4));
  EXPECT_LT(r.epoch_loss.back(), 0.8 * r.epoch_loss.front());
}

TEST(EmbeddingsTest, MinUpdatesRaisesEpochs) {
  const TermGroupTable groups = PlantedGroups();
  const PairCounter pairs = PlantedPairs(5);
  TrainConfig config = SmallConfig(5);
  config.epochs = 1;
  config.min_updates = 10 * pairs.total();
  const TrainResult r = TrainEmbeddings(pairs, ContextType::kLin, groups, config);
  EXPECT_EQ(r.epoch_loss.size(), 10u);
}

TEST(EmbeddingsTest, PlantedClassesAreCloserOverSeeds) {
  const TermGroupTable groups = PlantedGroups();
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const TrainResult r =
        TrainEmbeddings(PlantedPairs(seed), ContextType::kLin, groups, SmallConfig(seed));
    double within = 0.0, across = 0.0;
    int nw = 0, na = 0;
    for (int a = 0; a < kClasses * kPerClass; ++a) {
      for (int b = a + 1; b < kClasses * kPerClass; ++b) {
        const double cos = r.model.Cosine(a, b);
        if (a / kPerClass == b / kPerClass) {
          within += cos;
          ++nw;
        } else {
          across += cos;
          ++na;
        }
      }
    }
    EXPECT_GT(within / nw, across / na + 0.3) << "seed " << seed;
  }
}

TEST(EmbeddingsTest, Errors) {
  const TermGroupTable groups = PlantedGroups();
  EXPECT_THROW(TrainEmbeddings(PairCounter{}, ContextType::kLin, groups, SmallConfig(1)),
               std::invalid_argument);
  TrainConfig bad = SmallConfig(1);
  bad.dim = 0;
  EXPECT_THROW(TrainEmbeddings(PlantedPairs(1), ContextType::kLin, groups, bad),
               std::invalid_argument);
  TrainConfig tiny = SmallConfig(1);
  tiny.memory_budget_bytes = 16;
  EXPECT_THROW(TrainEmbeddings(PlantedPairs(1), ContextType::kLin, groups, tiny),
               std::length_error);
}

TEST(EmbeddingModelTest, NearestOrderAndExclusion) {
  // Vectors on the unit circle at increasing angle from term 0.
  std::vector<float> v;
  for (int i = 0; i < 5; ++i) {
    v.push_back(static_cast<float>(std::cos(0.3 * i)));
    v.push_back(static_cast<float>(std::sin(0.3 * i)));
  }
  EmbeddingModel m(ContextType::kDep, 2, {10, 11, 12, 13, 14},
                   {"a", "b", "c", "d", "e"}, v);
  const std::vector<Neighbor> n = m.Nearest(10, 3);
  ASSERT_EQ(n.size(), 3u);
  EXPECT_EQ(n[0].id, 11);
  EXPECT_EQ(n[1].id, 12);
  EXPECT_EQ(n[2].id, 13);
  // The top-k list is a prefix of the top-(k+1) list.
  const std::vector<Neighbor> more = m.Nearest(10, 4);
  EXPECT_TRUE(std::equal(n.begin(), n.end(), more.begin()));
  const std::vector<double> q = {1.0, 0.0};
  const std::vector<int> exclude = {10, 11};
  const std::vector<Neighbor> to_vec = m.NearestToVector(q, 2, exclude);
  EXPECT_EQ(to_vec[0].id, 12);
  EXPECT_THROW(m.Nearest(10, 0), std::invalid_argument);
  EXPECT_THROW(m.Vector(99), std::out_of_range);
  EXPECT_NEAR(*m.CosineByName("a", "b"), std::cos(0.3), 1e-6);
  EXPECT_FALSE(m.CosineByName("a", "zz").has_value());
}

TEST(EmbeddingModelTest, TiesBreakByAscendingId) {
  EmbeddingModel m(ContextType::kLin, 2, {5, 3, 4}, {"x", "y", "z"},
                   {1, 0, 0, 1, 0, 1});
  const std::vector<Neighbor> n = m.Nearest(5, 2);
  EXPECT_EQ(n[0].id, 3);
  EXPECT_EQ(n[1].id, 4);
}

TEST(EmbeddingModelTest, SaveLoadRoundTrip) {
  const TermGroupTable groups = PlantedGroups();
  const TrainResult r =
      TrainEmbeddings(PlantedPairs(6), ContextType::kSp, groups, SmallConfig(6));
  const std::string dir = testing::MakeTempDir("model");
  r.model.Save(dir + "/sp.vec");
  const EmbeddingModel loaded = EmbeddingModel::Load(dir + "/sp.vec");
  EXPECT_EQ(loaded.context_type(), ContextType::kSp);
  EXPECT_EQ(loaded.ids(), r.model.ids());
  EXPECT_EQ(loaded.metadata(), r.model.metadata());
  for (int row = 0; row < loaded.size(); ++row) {
    for (int d = 0; d < loaded.dim(); ++d) {
      EXPECT_FLOAT_EQ(loaded.Row(row)[d], r.model.Row(row)[d]);
    }
  }
  std::filesystem::remove(dir + "/sp.vec.meta.json");
  const EmbeddingModel bare = EmbeddingModel::Load(dir + "/sp.vec", &groups);
  EXPECT_EQ(bare.ids(), r.model.ids());
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace setxpand
