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
#include <ostream>
#include <set>
#include <stdexcept>

namespace setxpand {

std::string_view ScoringMethodName(ScoringMethod method) {
  return method == ScoringMethod::kCentroid ? "cent" : "csum";
}

std::string FeatureName(int index) {
  return std::string(ContextTypeName(kAllContextTypes[index / 2])) + "_" +
         std::string(ScoringMethodName(static_cast<ScoringMethod>(index % 2)));
}

bool ModelSet::Contains(int id) const {
  for (const EmbeddingModel *m : models) {
    if (m != nullptr && m->Contains(id)) return true;
  }
  return false;
}

SeedSet ResolveSeeds(std::span<const std::string> inputs,
                     const TermGroupTable &groups, const ModelSet &models) {
  SeedSet seed;
  std::set<int> ids;
  for (const std::string &input : inputs) {
    std::optional<int> id = groups.Find(input);
    if (id && models.Contains(*id)) {
      ids.insert(*id);
      seed.resolved_from.push_back(input);
    } else {
      seed.unresolved.push_back(input);
    }
  }
  seed.terms.assign(ids.begin(), ids.end());
  return seed;
}

SeedSet SeedSetFromIds(std::span<const int> ids) {
  SeedSet seed;
  seed.terms.assign(ids.begin(), ids.end());
  std::sort(seed.terms.begin(), seed.terms.end());
  seed.terms.erase(std::unique(seed.terms.begin(), seed.terms.end()),
                   seed.terms.end());
  return seed;
}

ScoreMap ScoreCentroid(const EmbeddingModel &model, const SeedSet &seed,
                       int k) {
  std::vector<double> centroid(model.dim(), 0.0);
  int present = 0;
  for (int id : seed.terms) {
    if (!model.Contains(id)) continue;
    std::span<const float> v = model.Vector(id);
    for (int d = 0; d < model.dim(); ++d) centroid[d] += v[d];
    ++present;
  }
  ScoreMap scores;
  if (present == 0) return scores;
  for (double &c : centroid) c /= present;
  for (const Neighbor &n : model.NearestToVector(centroid, k, seed.terms)) {
    scores[n.id] = n.cosine;
  }
  return scores;
}

ScoreMap ScoreCombSum(const EmbeddingModel &model, const SeedSet &seed,
                      int k_prime) {
  std::vector<int> present;
  for (int id : seed.terms) {
    if (model.Contains(id)) present.push_back(id);
  }
  ScoreMap scores;
  if (present.empty()) return scores;
  const int fetch = k_prime + static_cast<int>(present.size());
  for (int s : present) {
    std::vector<Neighbor> candidates;
    for (const Neighbor &n : model.Nearest(s, fetch)) {
      if (std::binary_search(seed.terms.begin(), seed.terms.end(), n.id)) {
        continue;
      }
      candidates.push_back(n);
      if (static_cast<int>(candidates.size()) == k_prime) break;
    }
    double l1 = 0.0;
    for (const Neighbor &n : candidates) l1 += std::abs(n.cosine);
    for (const Neighbor &n : candidates) {
      double normalized = l1 > 0.0 ? n.cosine / l1 : 0.0;
      scores[n.id] += normalized / static_cast<double>(present.size());
    }
  }
  return scores;
}

ScoreMap Score(const EmbeddingModel &model, const SeedSet &seed,
               ScoringMethod method, const ScoringParams &params) {
  return method == ScoringMethod::kCentroid
             ? ScoreCentroid(model, seed, params.k)
             : ScoreCombSum(model, seed, params.k_prime);
}

std::vector<double> Softmax(std::span<const double> values) {
  std::vector<double> out(values.size());
  if (values.empty()) return out;
  const double max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    out[i] = std::exp(values[i] - max);
    sum += out[i];
  }
  for (double &v : out) v /= sum;
  return out;
}

std::vector<FeatureVector> BuildFeatures(const ModelSet &models,
                                         const SeedSet &seed,
                                         const ScoringParamsByType &params,
                                         std::span<const int> extra_candidates) {
  std::array<ScoreMap, kNumFeatures> columns;
  std::set<int> universe;
  for (ContextType type : kAllContextTypes) {
    const EmbeddingModel *model = models.get(type);
    if (model == nullptr) continue;
    for (ScoringMethod method :
         {ScoringMethod::kCentroid, ScoringMethod::kCombSum}) {
      ScoreMap &column = columns[FeatureIndex(type, method)];
      column = Score(*model, seed, method, params[static_cast<int>(type)]);
      for (const auto &[id, score] : column) universe.insert(id);
    }
  }
  for (int id : extra_candidates) {
    if (!std::binary_search(seed.terms.begin(), seed.terms.end(), id)) {
      universe.insert(id);
    }
  }
  if (universe.empty()) {
    throw std::runtime_error("no candidates: no seed term resolves in any model");
  }
  std::vector<FeatureVector> out;
  out.reserve(universe.size());
  for (int id : universe) out.push_back({id, {}});
  std::vector<double> raw(out.size());
  for (int f = 0; f < kNumFeatures; ++f) {
    for (size_t i = 0; i < out.size(); ++i) {
      auto it = columns[f].find(out[i].candidate);
      raw[i] = it == columns[f].end() ? 0.0 : it->second;
    }
    std::vector<double> normalized = Softmax(raw);
    for (size_t i = 0; i < out.size(); ++i) out[i].features[f] = normalized[i];
  }
  return out;
}

std::vector<Ranked> RankScores(const ScoreMap &scores, int n) {
  std::vector<Ranked> ranked;
  ranked.reserve(scores.size());
  for (const auto &[id, score] : scores) ranked.push_back({id, score});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked &a, const Ranked &b) {
                     return a.score > b.score;
                   });
  if (n >= 0 && static_cast<int>(ranked.size()) > n) ranked.resize(n);
  return ranked;
}

std::vector<Ranked> RankBySingle(const ModelSet &models, const SeedSet &seed,
                                 ContextType type, ScoringMethod method,
                                 const ScoringParams &params, int n) {
  const EmbeddingModel *model = models.get(type);
  if (model == nullptr) return {};
  return RankScores(Score(*model, seed, method, params), n);
}

void WriteFeatureDump(std::ostream &out,
                      const std::vector<FeatureVector> &features,
                      const TermGroupTable &groups) {
  out << "candidate";
  for (int f = 0; f < kNumFeatures; ++f) out << '\t' << FeatureName(f);
  out << '\n';
  for (const FeatureVector &fv : features) {
    out << groups.group(fv.candidate).canonical;
    for (double v : fv.features) out << '\t' << v;
    out << '\n';
  }
}

}  // namespace setxpand
