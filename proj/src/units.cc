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

#include "setxpand/units.h"

namespace setxpand {

int32_t WordVocab::Intern(std::string_view surface) {
  auto it = ids_.find(std::string(surface));
  if (it != ids_.end()) return it->second;
  int32_t id = size();
  words_.emplace_back(surface);
  ids_.emplace(words_.back(), id);
  return id;
}

int32_t WordVocab::Find(std::string_view surface) const {
  auto it = ids_.find(std::string(surface));
  return it == ids_.end() ? -1 : it->second;
}

UnitSequence UnitEncoder::Encode(const AnnotatedSentence &sentence,
                                 size_t sentence_index) {
  UnitSequence seq;
  seq.sentence_index = sentence_index;
  const int n = static_cast<int>(sentence.tokens.size());
  seq.token_unit.assign(n, -1);
  size_t next_chunk = 0;
  for (int i = 0; i < n;) {
    if (next_chunk < sentence.chunks.size() &&
        sentence.chunks[next_chunk].start == i) {
      const ChunkSpan &chunk = sentence.chunks[next_chunk++];
      std::string text = ChunkText(sentence, chunk);
      std::optional<int> group = groups_->Find(text);
      int id = group ? *group : groups_->AddSingleton(text, 1);
      for (int t = chunk.start; t < chunk.end; ++t) {
        seq.token_unit[t] = static_cast<int32_t>(seq.units.size());
      }
      seq.units.push_back(Unit::Term(id));
      i = chunk.end;
    } else {
      seq.token_unit[i] = static_cast<int32_t>(seq.units.size());
      seq.units.push_back(Unit::Word(words_->Intern(sentence.tokens[i].surface)));
      ++i;
    }
  }
  return seq;
}

std::vector<UnitSequence> UnitEncoder::EncodeAll(
    const std::vector<AnnotatedSentence> &sentences) {
  std::vector<UnitSequence> out;
  out.reserve(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) {
    out.push_back(Encode(sentences[i], i));
  }
  return out;
}

}  // namespace setxpand
