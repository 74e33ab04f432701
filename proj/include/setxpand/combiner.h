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

#ifndef SETXPAND_COMBINER_H_
#define SETXPAND_COMBINER_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "setxpand/expansion.h"
#include "setxpand/mlp.h"

namespace setxpand {

// One labeled candidate of one seed sample.
struct TrainingExample {
  std::array<double, kNumFeatures> features{};
  bool positive = false;
  std::string list;
  int sample_id = 0;
  int candidate = 0;
};

std::vector<LabeledVector> ToLabeledVectors(
    std::span<const TrainingExample> examples);

// Sorts by probability descending, ties by ascending candidate id, keeps n.
std::vector<Ranked> RankCandidates(const MlpModel &model,
                                   std::span<const FeatureVector> features,
                                   int n);

// Concatenation baseline input: the per-model centroid of the seed vectors
// followed by the candidate's vectors, in context-type order. Missing vectors
// are zero-filled. Length is 2 * sum of model dims.
std::vector<double> ConcatInput(const ModelSet &models, const SeedSet &seed,
                                int candidate);
int ConcatInputDim(const ModelSet &models);

double ConcatScore(const MlpModel &model, const ModelSet &models,
                   const SeedSet &seed, int candidate);

// Ranks `candidates` by the concatenation baseline.
std::vector<Ranked> RankConcat(const MlpModel &model, const ModelSet &models,
                               const SeedSet &seed,
                               std::span<const int> candidates, int n);

}  // namespace setxpand

#endif  // SETXPAND_COMBINER_H_
