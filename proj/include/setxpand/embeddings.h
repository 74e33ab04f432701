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

#ifndef SETXPAND_EMBEDDINGS_H_
#define SETXPAND_EMBEDDINGS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "setxpand/contexts.h"
#include "setxpand/term_groups.h"

namespace setxpand {

struct TrainConfig {
  int dim = 100;
  int negatives = 5;
  int epochs = 5;
  double initial_lr = 0.025;
  double subsample_threshold = 1e-4;
  int64_t min_pair_count = 5;
  // Epochs rise above `epochs` until at least this many pair occurrences are
  // presented. 0 disables the floor.
  int64_t min_updates = 0;
  uint64_t rng_seed = 1;
  // 1 = deterministic. More threads share the matrices without locks.
  int threads = 1;
  int64_t memory_budget_bytes = int64_t{8} << 30;
};

struct Neighbor {
  int id = 0;
  double cosine = 0.0;

  bool operator==(const Neighbor &) const = default;
};

// Term vectors of one context type. Rows are addressed by term-group id.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  EmbeddingModel(ContextType type, int dim, std::vector<int> ids,
                 std::vector<std::string> names, std::vector<float> vectors);

  ContextType context_type() const { return type_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<int> &ids() const { return ids_; }
  const std::string &name_of_row(int row) const { return names_[row]; }

  bool Contains(int id) const { return row_of_.count(id) > 0; }
  // Throws std::out_of_range for unknown ids.
  int RowOf(int id) const;
  std::span<const float> Vector(int id) const;
  std::span<const float> Row(int row) const {
    return {vectors_.data() + static_cast<size_t>(row) * dim_,
            static_cast<size_t>(dim_)};
  }
  double Norm(int id) const { return norms_[RowOf(id)]; }

  double Cosine(int a, int b) const;
  // Cosine between two terms addressed by normalized name; nullopt when
  // either is unknown.
  std::optional<double> CosineByName(const std::string &a,
                                     const std::string &b) const;

  // Top-k by cosine descending, ties by ascending id; the query id is
  // excluded.
  std::vector<Neighbor> Nearest(int id, int k) const;
  // Top-k to an arbitrary vector, skipping ids in `exclude` (sorted).
  std::vector<Neighbor> NearestToVector(std::span<const double> query, int k,
                                        std::span<const int> exclude) const;

  // Free-form JSON text describing training (config, fingerprint, seed).
  const std::string &metadata() const { return metadata_; }
  void set_metadata(std::string metadata) { metadata_ = std::move(metadata); }

  // "<vocab> <dim> <type>" header, then "canonical v1 .. vd" per row, plus a
  // "<path>.meta.json" sidecar holding the ids and metadata.
  void Save(const std::string &path) const;
  // Without a sidecar, names are resolved through `groups`.
  static EmbeddingModel Load(const std::string &path,
                             const TermGroupTable *groups = nullptr);

 private:
  void Index();

  ContextType type_ = ContextType::kLin;
  int dim_ = 0;
  std::vector<int> ids_;
  std::vector<std::string> names_;
  std::vector<float> vectors_;
  std::vector<double> norms_;
  std::unordered_map<int, int> row_of_;
  std::unordered_map<std::string, int> row_of_name_;
  std::string metadata_;
};

struct TrainResult {
  EmbeddingModel model;
  // Term rows before the first update.
  EmbeddingModel initial_model;
  std::vector<double> epoch_loss;  // mean loss per processed pair
  int64_t pairs_used = 0;
};

// Skip-gram with negative sampling over aggregated (focus, context) counts.
// Only term-group focus vectors are kept. Throws std::invalid_argument for an
// empty pair stream and std::length_error when the matrices exceed the memory
// budget.
TrainResult TrainEmbeddings(const PairCounter &pairs, ContextType type,
                            const TermGroupTable &groups,
                            const TrainConfig &config);

}  // namespace setxpand

#endif  // SETXPAND_EMBEDDINGS_H_
