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

#include <algorithm>

namespace setxpand {

std::vector<LabeledVector> ToLabeledVectors(
    std::span<const TrainingExample> examples) {
  std::vector<LabeledVector> out;
  out.reserve(examples.size());
  for (const TrainingExample &e : examples) {
    out.push_back({std::vector<double>(e.features.begin(), e.features.end()),
                   e.positive});
  }
  return out;
}

namespace {

std::vector<Ranked> SortAndTruncate(std::vector<Ranked> ranked, int n) {
  std::sort(ranked.begin(), ranked.end(), [](const Ranked &a, const Ranked &b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (n >= 0 && static_cast<int>(ranked.size()) > n) ranked.resize(n);
  return ranked;
}

}  // namespace

std::vector<Ranked> RankCandidates(const MlpModel &model,
                                   std::span<const FeatureVector> features,
                                   int n) {
  std::vector<Ranked> ranked;
  ranked.reserve(features.size());
  for (const FeatureVector &fv : features) {
    ranked.push_back({fv.candidate, model.Predict(fv.features)});
  }
  return SortAndTruncate(std::move(ranked), n);
}

int ConcatInputDim(const ModelSet &models) {
  int dim = 0;
  for (const EmbeddingModel *m : models.models) {
    if (m != nullptr) dim += m->dim();
  }
  return 2 * dim;
}

std::vector<double> ConcatInput(const ModelSet &models, const SeedSet &seed,
                                int candidate) {
  std::vector<double> seed_part, candidate_part;
  for (const EmbeddingModel *m : models.models) {
    if (m == nullptr) continue;
    std::vector<double> centroid(m->dim(), 0.0);
    int present = 0;
    for (int id : seed.terms) {
      if (!m->Contains(id)) continue;
      std::span<const float> v = m->Vector(id);
      for (int d = 0; d < m->dim(); ++d) centroid[d] += v[d];
      ++present;
    }
    if (present > 0) {
      for (double &c : centroid) c /= present;
    }
    seed_part.insert(seed_part.end(), centroid.begin(), centroid.end());
    if (m->Contains(candidate)) {
      std::span<const float> v = m->Vector(candidate);
      candidate_part.insert(candidate_part.end(), v.begin(), v.end());
    } else {
      candidate_part.insert(candidate_part.end(), m->dim(), 0.0);
    }
  }
  seed_part.insert(seed_part.end(), candidate_part.begin(), candidate_part.end());
  return seed_part;
}

double ConcatScore(const MlpModel &model, const ModelSet &models,
                   const SeedSet &seed, int candidate) {
  return model.Predict(ConcatInput(models, seed, candidate));
}

std::vector<Ranked> RankConcat(const MlpModel &model, const ModelSet &models,
                               const SeedSet &seed,
                               std::span<const int> candidates, int n) {
  std::vector<Ranked> ranked;
  ranked.reserve(candidates.size());
  for (int c : candidates) {
    ranked.push_back({c, ConcatScore(model, models, seed, c)});
  }
  return SortAndTruncate(std::move(ranked), n);
}

}  // namespace setxpand
