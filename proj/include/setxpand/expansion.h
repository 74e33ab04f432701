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

#ifndef SETXPAND_EXPANSION_H_
#define SETXPAND_EXPANSION_H_

#include <array>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "setxpand/contexts.h"
#include "setxpand/embeddings.h"
#include "setxpand/term_groups.h"

namespace setxpand {

enum class ScoringMethod { kCentroid = 0, kCombSum = 1 };

inline constexpr int kNumFeatures = 2 * kNumContextTypes;

inline int FeatureIndex(ContextType type, ScoringMethod method) {
  return 2 * static_cast<int>(type) + static_cast<int>(method);
}

// "cent" / "csum"
std::string_view ScoringMethodName(ScoringMethod method);
// Column names in feature order: lin_cent, lin_csum, list_cent, ...
std::string FeatureName(int index);

// Non-owning view of the five per-context models; missing entries are null.
struct ModelSet {
  std::array<const EmbeddingModel *, kNumContextTypes> models{};

  const EmbeddingModel *get(ContextType type) const {
    return models[static_cast<int>(type)];
  }
  bool Contains(int id) const;
};

struct SeedSet {
  std::vector<int> terms;  // sorted, unique term-group ids
  std::vector<std::string> resolved_from;
  std::vector<std::string> unresolved;
};

// Resolves seed strings through the group table; strings unknown to the table
// or absent from every model are reported as unresolved.
SeedSet ResolveSeeds(std::span<const std::string> inputs,
                     const TermGroupTable &groups, const ModelSet &models);
SeedSet SeedSetFromIds(std::span<const int> ids);

struct ScoringParams {
  int k = 500;        // centroid cutoff
  int k_prime = 500;  // per-seed cutoff
};
using ScoringParamsByType = std::array<ScoringParams, kNumContextTypes>;

// Candidate id -> raw score. Terms not retrieved are absent (score 0).
using ScoreMap = std::map<int, double>;

// Cosine to the mean of the seed vectors, for the k nearest non-seed terms.
// Seeds outside the model are skipped; none present gives an empty map.
ScoreMap ScoreCentroid(const EmbeddingModel &model, const SeedSet &seed, int k);

// Mean over the seeds present in the model of the L1-normalized cosine among
// each seed's k' nearest non-seed terms.
ScoreMap ScoreCombSum(const EmbeddingModel &model, const SeedSet &seed,
                      int k_prime);

ScoreMap Score(const EmbeddingModel &model, const SeedSet &seed,
               ScoringMethod method, const ScoringParams &params);

// Max-subtracted softmax with unit temperature.
std::vector<double> Softmax(std::span<const double> values);

struct FeatureVector {
  int candidate = 0;
  std::array<double, kNumFeatures> features{};
};

// Ten softmax-normalized features per candidate. The candidate universe is
// the union of all retrieved candidates plus `extra_candidates`, minus the
// seeds. Sorted by candidate id. Throws std::runtime_error on an empty
// universe.
std::vector<FeatureVector> BuildFeatures(
    const ModelSet &models, const SeedSet &seed,
    const ScoringParamsByType &params,
    std::span<const int> extra_candidates = {});

struct Ranked {
  int id = 0;
  double score = 0.0;

  bool operator==(const Ranked &) const = default;
};

// Descending score, ties by ascending id, truncated to n.
std::vector<Ranked> RankScores(const ScoreMap &scores, int n);

// Ranking by a single (context type, method) column.
std::vector<Ranked> RankBySingle(const ModelSet &models, const SeedSet &seed,
                                 ContextType type, ScoringMethod method,
                                 const ScoringParams &params, int n);

// TSV with header "candidate<TAB>lin_cent<TAB>...".
void WriteFeatureDump(std::ostream &out,
                      const std::vector<FeatureVector> &features,
                      const TermGroupTable &groups);

}  // namespace setxpand

#endif  // SETXPAND_EXPANSION_H_
