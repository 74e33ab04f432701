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

#ifndef SETXPAND_UNITS_H_
#define SETXPAND_UNITS_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "setxpand/corpus.h"
#include "setxpand/term_groups.h"

namespace setxpand {

enum class UnitKind : uint8_t { kTerm = 0, kWord = 1 };

// A term group or a plain word.
struct Unit {
  UnitKind kind = UnitKind::kWord;
  int32_t id = 0;

  static Unit Term(int32_t id) { return {UnitKind::kTerm, id}; }
  static Unit Word(int32_t id) { return {UnitKind::kWord, id}; }

  bool is_term() const { return kind == UnitKind::kTerm; }
  uint64_t Pack() const {
    return (static_cast<uint64_t>(kind) << 32) | static_cast<uint32_t>(id);
  }
  static Unit Unpack(uint64_t packed) {
    return {static_cast<UnitKind>(packed >> 32),
            static_cast<int32_t>(packed & 0xffffffffu)};
  }
  auto operator<=>(const Unit &) const = default;
};

class WordVocab {
 public:
  int32_t Intern(std::string_view surface);
  // -1 if absent.
  int32_t Find(std::string_view surface) const;
  const std::string &surface(int32_t id) const { return words_.at(id); }
  int32_t size() const { return static_cast<int32_t>(words_.size()); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int32_t> ids_;
};

struct UnitSequence {
  std::vector<Unit> units;
  // For every token, the position of the unit it belongs to.
  std::vector<int32_t> token_unit;
  size_t sentence_index = 0;
};

// Turns annotated sentences into unit sequences: every chunk becomes its term
// group, every other token a word. Chunks not covered by the group table are
// added as singleton groups.
class UnitEncoder {
 public:
  UnitEncoder(TermGroupTable *groups, WordVocab *words)
      : groups_(groups), words_(words) {}

  UnitSequence Encode(const AnnotatedSentence &sentence,
                      size_t sentence_index = 0);
  std::vector<UnitSequence> EncodeAll(
      const std::vector<AnnotatedSentence> &sentences);

 private:
  TermGroupTable *groups_;
  WordVocab *words_;
};

// Renders units as text: canonical form for terms, surface for words.
class UnitRenderer {
 public:
  UnitRenderer(const TermGroupTable &groups, const WordVocab &words)
      : groups_(&groups), words_(&words) {}

  const std::string &Render(Unit unit) const {
    return unit.is_term() ? groups_->group(unit.id).canonical
                          : words_->surface(unit.id);
  }
  const TermGroupTable &groups() const { return *groups_; }
  const WordVocab &words() const { return *words_; }

 private:
  const TermGroupTable *groups_;
  const WordVocab *words_;
};

}  // namespace setxpand

#endif  // SETXPAND_UNITS_H_
