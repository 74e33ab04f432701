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

#include "setxpand/mlp.h"

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "setxpand/expansion.h"
#include "setxpand/random.h"
#include "test_util.h"

namespace setxpand {
namespace {

// Two Gaussian-ish blobs separated along the first axis.
std::vector<LabeledVector> Blobs(int n, uint64_t seed, double gap = 3.0) {
  Rng rng(seed);
  std::vector<LabeledVector> out;
  for (int i = 0; i < n; ++i) {
    const bool positive = i % 2 == 0;
    LabeledVector v;
    v.positive = positive;
    for (int d = 0; d < 3; ++d) v.x.push_back(rng.Uniform() - 0.5);
    v.x[0] += positive ? gap / 2 : -gap / 2;
    out.push_back(v);
  }
  return out;
}

double Accuracy(const MlpModel &model, const std::vector<LabeledVector> &data) {
  int correct = 0;
  for (const LabeledVector &v : data) correct += (model.Predict(v.x) >= 0.5) == v.positive;
  return static_cast<double>(correct) / data.size();
}

TEST(MlpTest, ZeroParametersGiveOneHalf) {
  const MlpParams p = MlpParams::Zeros(10);
  EXPECT_DOUBLE_EQ(MlpForward(p, std::vector<double>(10, 3.0)), 0.5);
}

TEST(MlpTest, HandComputedForward) {
  MlpParams p = MlpParams::Zeros(2, 2);
  p.w_in(0, 0) = 1.0;
  p.w_in(1, 0) = -1.0;
  p.w_in(0, 1) = 0.5;
  p.w_in(1, 1) = 0.5;
  p.bias_hidden = {0.0, -1.0};
  p.weights_out = {2.0, 1.0};
  p.bias_out = -0.5;
  // x = (2, 1): hidden pre (1, 0.5) -> relu (1, 0.5); logit 2 + 0.5 - 0.5 = 2.
  EXPECT_NEAR(MlpForward(p, std::vector<double>{2.0, 1.0}), 1.0 / (1.0 + std::exp(-2.0)),
              1e-15);
  // x = (0, 1): hidden pre (-1, -0.5) -> 0; logit -0.5.
  EXPECT_NEAR(MlpForward(p, std::vector<double>{0.0, 1.0}), 1.0 / (1.0 + std::exp(0.5)),
              1e-15);
  p.activation = Activation::kTanh;
  const double logit = 2.0 * std::tanh(1.0) + std::tanh(0.5) - 0.5;
  EXPECT_NEAR(MlpForward(p, std::vector<double>{2.0, 1.0}), 1.0 / (1.0 + std::exp(-logit)),
              1e-15);
  EXPECT_THROW(MlpForward(p, std::vector<double>{1.0}), std::invalid_argument);
}

TEST(MlpTest, GradientMatchesCentralDifferences) {
  Rng rng(31);
  for (int draw = 0; draw < 30; ++draw) {
    const Activation act = draw % 2 ? Activation::kTanh : Activation::kRelu;
    MlpParams p;
    std::vector<std::vector<double>> x(4, std::vector<double>(kNumFeatures));
    std::vector<double> y(4);
    do {
      p = MlpParams::Random(static_cast<int>(x[0].size()), rng.Next(), kHiddenUnits, act);
      for (double &b : p.bias_hidden) b = rng.Uniform() - 0.5;
      for (auto &row : x) {
        for (double &v : row) v = 2 * rng.Uniform() - 1;
      }
      for (double &l : y) l = static_cast<double>(rng.Below(2));
    } while (act == Activation::kRelu && testing::MinHiddenMargin(p, x) < 1e-3);
    EXPECT_LT(testing::MaxGradientRelativeError(p, x, y), 1e-4);
  }
}

TEST(MlpTest, SeparableDataReachesHighAccuracy) {
  const std::vector<LabeledVector> train = Blobs(200, 1), test = Blobs(200, 2);
  MlpTrainConfig config;
  config.epochs = 100;
  config.lr = 0.1;
  const MlpModel model = TrainMlp(train, config);
  EXPECT_GE(Accuracy(model, test), 0.95);
  EXPECT_LT(model.epoch_loss.back(), model.epoch_loss.front());
}

TEST(MlpTest, DuplicatedFullBatchGivesSameParameters) {
  std::vector<LabeledVector> data = Blobs(40, 3);
  std::vector<LabeledVector> doubled = data;
  doubled.insert(doubled.end(), data.begin(), data.end());
  MlpTrainConfig config;
  config.batch = 0;
  config.balance = false;
  config.standardize = false;
  config.epochs = 20;
  const MlpModel a = TrainMlp(data, config), b = TrainMlp(doubled, config);
  for (size_t i = 0; i < a.params.num_parameters(); ++i) {
    EXPECT_NEAR(const_cast<MlpParams &>(a.params).parameter(i),
                const_cast<MlpParams &>(b.params).parameter(i), 1e-12);
  }
}

TEST(MlpTest, SingleClassThrows) {
  std::vector<LabeledVector> data = Blobs(10, 4);
  for (LabeledVector &v : data) v.positive = true;
  EXPECT_THROW(TrainMlp(data, MlpTrainConfig{}), std::invalid_argument);
}

TEST(MlpTest, FlippedLabelsInvertPredictions) {
  const std::vector<LabeledVector> data = Blobs(200, 5);
  std::vector<LabeledVector> flipped = data;
  for (LabeledVector &v : flipped) v.positive = !v.positive;
  MlpTrainConfig config;
  config.epochs = 100;
  config.lr = 0.1;
  const MlpModel a = TrainMlp(data, config), b = TrainMlp(flipped, config);
  const std::vector<LabeledVector> probe = Blobs(100, 6);
  EXPECT_GE(Accuracy(a, probe), 0.95);
  EXPECT_LE(Accuracy(b, probe), 0.05);
}

TEST(MlpTest, DeterministicForSeed) {
  const std::vector<LabeledVector> data = Blobs(60, 7);
  const MlpModel a = TrainMlp(data, MlpTrainConfig{}), b = TrainMlp(data, MlpTrainConfig{});
  EXPECT_EQ(a.params.weights_in, b.params.weights_in);
  EXPECT_EQ(a.epoch_loss, b.epoch_loss);
}

TEST(MlpTest, BalancingDownsamplesMajority) {
  std::vector<LabeledVector> data = Blobs(40, 8);
  for (int i = 0; i < 30; ++i) data.push_back({{-2.0, 0.0, 0.0}, false});
  const MlpModel m = TrainMlp(data, MlpTrainConfig{});
  EXPECT_EQ(m.positives_used, 20);
  EXPECT_EQ(m.negatives_used, 20);
}

TEST(FeatureScalerTest, ZScoreAndConstantColumns) {
  const std::vector<LabeledVector> data = {{{1.0, 5.0}, true}, {{3.0, 5.0}, false}};
  const FeatureScaler s = FeatureScaler::Fit(data);
  const std::vector<double> z = s.Apply(std::vector<double>{3.0, 5.0});
  EXPECT_NEAR(z[0], 1.0, 1e-12);
  EXPECT_TRUE(std::isfinite(z[1]));
  EXPECT_NEAR(z[1], 0.0, 1e-12);
}

TEST(MlpModelTest, SaveLoadRoundTrip) {
  MlpTrainConfig config;
  config.activation = Activation::kTanh;
  const MlpModel m = TrainMlp(Blobs(50, 9), config);
  const std::string dir = testing::MakeTempDir("mlp");
  m.Save(dir + "/mlp.txt");
  const MlpModel loaded = MlpModel::Load(dir + "/mlp.txt");
  EXPECT_EQ(loaded.params.activation, Activation::kTanh);
  for (const LabeledVector &v : Blobs(20, 10)) {
    EXPECT_DOUBLE_EQ(loaded.Predict(v.x), m.Predict(v.x));
  }
  EXPECT_THROW(MlpModel::Load(dir + "/missing.txt"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace setxpand
