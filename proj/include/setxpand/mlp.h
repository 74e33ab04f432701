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

#ifndef SETXPAND_MLP_H_
#define SETXPAND_MLP_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace setxpand {

enum class Activation { kRelu, kTanh };

std::string_view ActivationName(Activation activation);

inline constexpr int kHiddenUnits = 4;

// One-hidden-layer binary classifier:
//   p = sigmoid(weights_out . act(weights_in^T x + bias_hidden) + bias_out)
struct MlpParams {
  int input_dim = 0;
  int hidden = kHiddenUnits;
  std::vector<double> weights_in;  // input_dim x hidden, row-major
  std::vector<double> bias_hidden;
  std::vector<double> weights_out;
  double bias_out = 0.0;
  Activation activation = Activation::kRelu;
  uint64_t seed = 0;

  static MlpParams Zeros(int input_dim, int hidden = kHiddenUnits,
                         Activation activation = Activation::kRelu);
  // Glorot-uniform weights, zero biases.
  static MlpParams Random(int input_dim, uint64_t seed,
                          int hidden = kHiddenUnits,
                          Activation activation = Activation::kRelu);

  double &w_in(int input, int unit) { return weights_in[input * hidden + unit]; }
  double w_in(int input, int unit) const {
    return weights_in[input * hidden + unit];
  }
  size_t num_parameters() const {
    return weights_in.size() + bias_hidden.size() + weights_out.size() + 1;
  }
  // Flat view over every parameter: weights_in, bias_hidden, weights_out,
  // bias_out.
  double &parameter(size_t i);
  bool AllFinite() const;
};

double MlpForward(const MlpParams &params, std::span<const double> x);

// Mean binary cross-entropy over the batch. When `gradient` is non-null it
// receives d loss / d params with the same shapes.
double MlpLoss(const MlpParams &params,
               std::span<const std::vector<double>> inputs,
               std::span<const double> labels, MlpParams *gradient);

struct LabeledVector {
  std::vector<double> x;
  bool positive = false;
};

struct MlpTrainConfig {
  int epochs = 300;
  double lr = 0.01;
  int batch = 32;  // <= 0 selects full-batch descent
  uint64_t seed = 1;
  Activation activation = Activation::kRelu;
  // Down-sample the majority class to a 1:1 ratio.
  bool balance = true;
  // Fit a per-feature z-score transform on the training inputs.
  bool standardize = true;
};

// Per-feature affine transform (x - mean) / scale.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> scale;

  static FeatureScaler Identity(int dim);
  static FeatureScaler Fit(std::span<const LabeledVector> examples);
  std::vector<double> Apply(std::span<const double> x) const;
};

struct MlpModel {
  FeatureScaler scaler;
  MlpParams params;
  std::vector<double> epoch_loss;  // training loss after every epoch
  int64_t positives_used = 0;
  int64_t negatives_used = 0;

  double Predict(std::span<const double> x) const;

  // Plain-text matrix dump, one "<name> <rows> <cols>" header per block.
  void Save(const std::string &path) const;
  static MlpModel Load(const std::string &path);
};

// Mini-batch gradient descent on binary cross-entropy. Deterministic for a
// given seed. Throws std::invalid_argument unless both classes are present.
MlpModel TrainMlp(std::span<const LabeledVector> examples,
                  const MlpTrainConfig &config);

}  // namespace setxpand

#endif  // SETXPAND_MLP_H_
