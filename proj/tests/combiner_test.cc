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

#include "setxpand/combiner.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "setxpand/random.h"
#include "test_util.h"

namespace setxpand {
namespace {

// Probability rises with the first feature only.
MlpModel FirstFeatureModel() {
  MlpModel m;
  m.scaler = FeatureScaler::Identity(kNumFeatures);
  m.params = MlpParams::Zeros(kNumFeatures, 1);
  m.params.w_in(0, 0) = 1.0;
  m.params.weights_out = {1.0};
  return m;
}

FeatureVector Fv(int candidate, double first) {
  FeatureVector fv;
  fv.candidate = candidate;
  fv.features[0] = first;
  return fv;
}

TEST(RankCandidatesTest, SortsByProbabilityThenId) {
  const std::vector<FeatureVector> features = {Fv(4, 0.1), Fv(2, 0.9), Fv(9, 0.5),
                                               Fv(1, 0.5), Fv(3, 0.0)};
  const std::vector<Ranked> r = RankCandidates(FirstFeatureModel(), features, 4);
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].id, 2);
  EXPECT_EQ(r[1].id, 1);
  EXPECT_EQ(r[2].id, 9);
  EXPECT_EQ(r[3].id, 4);
  EXPECT_NEAR(r[0].score, 1.0 / (1.0 + std::exp(-0.9)), 1e-15);
  EXPECT_EQ(RankCandidates(FirstFeatureModel(), features, -1).size(), 5u);
}

TEST(ConcatTest, SeedCentroidThenCandidateWithZeroFill) {
  EmbeddingModel lin(ContextType::kLin, 1, {0, 1, 2}, {"a", "b", "c"}, {1, 3, -2});
  EmbeddingModel sp(ContextType::kSp, 2, {0, 2}, {"a", "c"}, {1, 2, 5, 6});
  ModelSet set;
  set.models[0] = &lin;
  EXPECT_EQ(ConcatInputDim(set), 2);
  const SeedSet seed = SeedSetFromIds(std::vector<int>{0, 1});
  EXPECT_EQ(ConcatInput(set, seed, 2), (std::vector<double>{2.0, -2.0}));
  set.models[3] = &sp;
  EXPECT_EQ(ConcatInputDim(set), 6);
  // Seed centroid over present seeds only; candidate 1 is missing from sp.
  EXPECT_EQ(ConcatInput(set, seed, 1), (std::vector<double>{2.0, 1.0, 2.0, 3.0, 0.0, 0.0}));
}

TEST(ConcatTest, HandForwardThroughModel) {
  EmbeddingModel lin(ContextType::kLin, 1, {0, 1, 2}, {"a", "b", "c"}, {1, 3, -2});
  ModelSet set;
  set.models[0] = &lin;
  MlpModel m;
  m.scaler = FeatureScaler::Identity(2);
  m.params = MlpParams::Zeros(2, 1, Activation::kTanh);
  m.params.w_in(0, 0) = 0.5;
  m.params.w_in(1, 0) = 1.0;
  m.params.weights_out = {2.0};
  const SeedSet seed = SeedSetFromIds(std::vector<int>{0});
  // Input (1, 3): hidden tanh(0.5 + 3); logit 2 tanh(3.5).
  const double want = 1.0 / (1.0 + std::exp(-2.0 * std::tanh(3.5)));
  EXPECT_NEAR(ConcatScore(m, set, seed, 1), want, 1e-15);
  const std::vector<int> candidates = {1, 2};
  const std::vector<Ranked> r = RankConcat(m, set, seed, candidates, 5);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].id, 1);
}

TEST(CombinerTest, LearnsSeparableFeatureExamples) {
  Rng rng(3);
  std::vector<TrainingExample> examples;
  for (int i = 0; i < 400; ++i) {
    TrainingExample e;
    e.positive = i % 2 == 0;
    for (double &f : e.features) f = 0.1 * rng.Uniform();
    e.features[2] += e.positive ? 0.2 : 0.0;
    e.candidate = i;
    examples.push_back(e);
  }
  const std::vector<LabeledVector> vectors = ToLabeledVectors(examples);
  ASSERT_EQ(vectors.size(), examples.size());
  EXPECT_EQ(vectors[0].x.size(), static_cast<size_t>(kNumFeatures));
  MlpTrainConfig config;
  config.epochs = 100;
  config.lr = 0.1;
  const MlpModel m = TrainMlp(vectors, config);
  int correct = 0;
  for (const LabeledVector &v : vectors) correct += (m.Predict(v.x) >= 0.5) == v.positive;
  EXPECT_GE(correct, 0.9 * vectors.size());
}

}  // namespace
}  // namespace setxpand
