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

#ifndef SETXPAND_CONTEXTS_H_
#define SETXPAND_CONTEXTS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "setxpand/corpus.h"
#include "setxpand/units.h"

namespace setxpand {

enum class ContextType { kLin = 0, kList = 1, kDep = 2, kSp = 3, kUp = 4 };

inline constexpr int kNumContextTypes = 5;
inline constexpr std::array<ContextType, kNumContextTypes> kAllContextTypes = {
    ContextType::kLin, ContextType::kList, ContextType::kDep, ContextType::kSp,
    ContextType::kUp};

// "lin", "list", "dep", "sp", "up"
std::string_view ContextTypeName(ContextType type);
std::optional<ContextType> ParseContextType(std::string_view name);

struct ContextPair {
  Unit focus;
  std::string context;
  ContextType type = ContextType::kLin;

  bool operator==(const ContextPair &) const = default;
};

using PairSink = std::function<void(Unit focus, std::string_view context)>;

inline constexpr std::string_view kSentenceStart = "<S>";
inline constexpr std::string_view kSentenceEnd = "</S>";
inline constexpr std::string_view kPlaceholder = "__";

struct WindowConfig {
  int win = 5;
};

// Window pairs over units; a multiword term counts as one position.
void ExtractLinear(const UnitSequence &seq, const WindowConfig &config,
                   const UnitRenderer &renderer, const PairSink &sink);

// Comma/semicolon separated runs of at least three terms, optionally joined
// by "and"/"or" before the last item.
std::vector<std::vector<Unit>> DetectCommaLists(const UnitSequence &seq,
                                                const UnitRenderer &renderer);

// Runs of at least three consecutive bullet sentences of one document; the
// first term of every sentence is the item.
std::vector<std::vector<Unit>> DetectBulletLists(
    const std::vector<AnnotatedSentence> &sentences,
    const std::vector<UnitSequence> &sequences);

// Every ordered pair of distinct items of every list.
void ExtractListPairs(const std::vector<std::vector<Unit>> &lists,
                      const UnitRenderer &renderer, const PairSink &sink);

// Dependency contexts: (t, m/label) for modifiers m and (t, h/label-1) for the
// head h. A chunk is represented by its head token. Returns the number of
// tokens skipped because their arc is missing.
int ExtractDependency(const AnnotatedSentence &sentence,
                      const UnitSequence &seq, const UnitRenderer &renderer,
                      const PairSink &sink);

// Suffix marking the inverse direction of a dependency label.
inline constexpr std::string_view kInverseSuffix = "-1";

struct SymmetricPattern {
  std::string infix;  // lowercase words joined by single spaces
  int64_t support = 0;  // distinct unordered pairs seen
  double symmetry_score = 0.0;
};

struct PatternDiscoveryConfig {
  int max_infix_len = 3;
  int64_t min_support = 20;
  double min_symmetry = 0.4;
  int infix_vocab_size = 500;
  // Coordinations kept regardless of thresholds.
  std::vector<std::string> always_include = {"and", "or"};
};

// Candidate patterns are infixes of 1..max_infix_len high-frequency words
// between two terms. Result sorted by infix.
std::vector<SymmetricPattern> DiscoverSymmetricPatterns(
    const std::vector<UnitSequence> &sequences, const UnitRenderer &renderer,
    const PatternDiscoveryConfig &config);

// Emits (X, Y) and (Y, X) for every "X infix Y" match of a retained pattern.
void ExtractSymmetricPatternPairs(const UnitSequence &seq,
                                  const std::vector<SymmetricPattern> &patterns,
                                  const UnitRenderer &renderer,
                                  const PairSink &sink);

// The six n-gram frames around every term occurrence.
void ExtractUnaryPatterns(const UnitSequence &seq, const UnitRenderer &renderer,
                          const PairSink &sink);

void SavePatterns(const std::string &path,
                  const std::vector<SymmetricPattern> &patterns);
std::vector<SymmetricPattern> LoadPatterns(const std::string &path);

// Aggregated (focus, context) counts for one context type.
class PairCounter {
 public:
  struct Entry {
    Unit focus;
    int32_t context = 0;
    int64_t count = 0;
  };

  void Add(Unit focus, std::string_view context, int64_t count = 1);
  void Merge(const PairCounter &other);

  int32_t InternContext(std::string_view context);
  const std::string &context(int32_t id) const { return contexts_.at(id); }
  int32_t num_contexts() const { return static_cast<int32_t>(contexts_.size()); }
  size_t size() const { return counts_.size(); }
  int64_t total() const { return total_; }
  int64_t Count(Unit focus, std::string_view context) const;

  // Entries ordered by focus unit, then context string; independent of
  // insertion order.
  std::vector<Entry> SortedEntries() const;

  // TSV focus TAB context TAB count, sorted by rendered focus then context.
  void Save(const std::string &path, const UnitRenderer &renderer) const;
  // Focus strings equal to a canonical term resolve to that term, everything
  // else to a word.
  static PairCounter Load(const std::string &path, const TermGroupTable &groups,
                          WordVocab *words);

 private:
  struct KeyHash {
    size_t operator()(const std::pair<uint64_t, int32_t> &k) const {
      return std::hash<uint64_t>()(k.first * 0x9e3779b97f4a7c15ULL ^
                                   static_cast<uint64_t>(k.second));
    }
  };

  std::vector<std::string> contexts_;
  std::unordered_map<std::string, int32_t> context_ids_;
  std::unordered_map<std::pair<uint64_t, int32_t>, int64_t, KeyHash> counts_;
  int64_t total_ = 0;
};

struct ExtractionOptions {
  WindowConfig window;
  std::vector<SymmetricPattern> patterns;  // required for kSp
  int threads = 1;
};

struct ExtractionResult {
  PairCounter pairs;
  int64_t warnings = 0;
};

// Runs one extractor over the whole corpus, sharding sentences over threads.
ExtractionResult ExtractPairs(ContextType type,
                              const std::vector<AnnotatedSentence> &sentences,
                              const std::vector<UnitSequence> &sequences,
                              const UnitRenderer &renderer,
                              const ExtractionOptions &options);

}  // namespace setxpand

#endif  // SETXPAND_CONTEXTS_H_
