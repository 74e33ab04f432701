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

#ifndef SETXPAND_TERM_GROUPS_H_
#define SETXPAND_TERM_GROUPS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace setxpand {

class EmbeddingModel;
struct Corpus;

// Lowercases ASCII letters, turns hyphens and underscores into spaces,
// collapses whitespace and strips surrounding punctuation. A trailing period
// survives when the last word is itself dotted ("u.k."). Idempotent.
std::string NormalizeTerm(std::string_view surface);

// Levenshtein distance over bytes.
int EditDistance(std::string_view a, std::string_view b);

// 1 - distance / max(|a|, |b|); 1 for two empty strings.
double EditSimilarity(std::string_view a, std::string_view b);

// A canonical term plus all its variations.
struct TermGroup {
  int id = 0;
  std::string canonical;             // most frequent member surface form
  std::vector<std::string> members;  // normalized strings, sorted
  int64_t corpus_frequency = 0;
};

// Immutable after construction apart from AddSingleton, which is used to keep
// unit conversion total for chunks not seen during grouping.
class TermGroupTable {
 public:
  TermGroupTable() = default;
  explicit TermGroupTable(std::vector<TermGroup> groups);

  int size() const { return static_cast<int>(groups_.size()); }
  const TermGroup &group(int id) const { return groups_.at(id); }
  const std::vector<TermGroup> &groups() const { return groups_; }

  // Looks up the group of a surface form (normalized first).
  std::optional<int> Find(std::string_view surface) const;
  std::optional<int> FindNormalized(const std::string &normalized) const;

  // Adds a singleton group for an unseen surface form, or returns the
  // existing group.
  int AddSingleton(std::string_view surface, int64_t frequency);

  // TSV: group_id TAB canonical TAB member1|member2|... TAB frequency
  void Save(const std::string &path) const;
  static TermGroupTable Load(const std::string &path);

 private:
  std::vector<TermGroup> groups_;
  std::unordered_map<std::string, int> by_member_;
};

struct GroupingOptions {
  bool use_acronyms = true;
  bool use_edit_distance = true;
  double min_edit_similarity = 0.9;
  // Applies only when an embedding hint is given and knows both terms.
  double min_embedding_cosine = 0.6;
};

// Partitions surface forms into variation groups. Two forms share a group when
// connected by identical normalization, the acronym rule, the edit-distance
// rule (gated by embedding cosine when `hint` is given) or an explicit link
// (e.g. a redirect table). Group ids are assigned by descending frequency,
// then canonical form, so the result does not depend on input order.
TermGroupTable GroupTermVariations(
    const std::map<std::string, int64_t> &frequencies,
    const GroupingOptions &options, const EmbeddingModel *hint = nullptr,
    const std::vector<std::pair<std::string, std::string>> &links = {});

// Counts chunk surface forms across the corpus.
std::map<std::string, int64_t> CountTermSurfaces(const Corpus &corpus);

// Acronym key of a single-token term ("U.N." -> "un"), empty if the term is
// not acronym-shaped.
std::string AcronymKey(std::string_view normalized);

// Initial-letter keys of a multiword term, with and without function words.
std::vector<std::string> InitialismKeys(std::string_view normalized);

}  // namespace setxpand

#endif  // SETXPAND_TERM_GROUPS_H_
