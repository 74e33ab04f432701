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

#ifndef SETXPAND_CORPUS_H_
#define SETXPAND_CORPUS_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace setxpand {

// Sentence-relative head markers for Token::head_index.
inline constexpr int kRootHead = -1;
inline constexpr int kMissingHead = -2;

struct Token {
  std::string surface;
  std::string lemma;
  std::string pos_tag;
  int head_index = kRootHead;  // 0-based index, kRootHead or kMissingHead
  std::string dep_label;
};

// Half-open token range [start, end) of one noun-phrase chunk.
struct ChunkSpan {
  int start = 0;
  int end = 0;
  int head_token = 0;

  int length() const { return end - start; }
  bool Contains(int token) const { return token >= start && token < end; }
};

struct AnnotatedSentence {
  std::vector<Token> tokens;
  std::vector<ChunkSpan> chunks;  // sorted by start, pairwise disjoint
  std::string doc_id;
  bool is_bullet_item = false;

  // Index into chunks of the chunk covering `token`, or -1.
  int ChunkOf(int token) const;
};

// Surface text of a chunk, tokens joined by single spaces.
std::string ChunkText(const AnnotatedSentence &sentence, const ChunkSpan &chunk);

struct CorpusStats {
  int64_t sentences = 0;
  int64_t tokens = 0;
  int64_t chunks = 0;
  int64_t malformed = 0;
  std::vector<std::string> warnings;
};

struct IngestOptions {
  // Fail on the first malformed record instead of skipping it.
  bool strict = false;
  // Cap on retained warning messages; the malformed counter is exact.
  std::size_t max_warnings = 100;
};

using SentenceSink = std::function<void(AnnotatedSentence &&)>;

// Streams sentences of a corpus file in the column format
//   index TAB surface TAB lemma TAB pos TAB head TAB deplabel TAB chunk
// with 1-based indices, head 0 = root, "_" = missing arc and chunk tags
// O / B-NP / I-NP. "#doc <id>" and "#bullet" lines precede a sentence.
// Throws std::runtime_error when the file cannot be read, or on a malformed
// record in strict mode.
CorpusStats ReadCorpus(const std::string &path, const IngestOptions &options,
                       const SentenceSink &sink);
CorpusStats ReadCorpus(std::istream &in, const IngestOptions &options,
                       const SentenceSink &sink);

struct Corpus {
  std::vector<AnnotatedSentence> sentences;
  CorpusStats stats;
};

Corpus LoadCorpus(const std::string &path, const IngestOptions &options = {});
Corpus ParseCorpus(std::istream &in, const IngestOptions &options = {});

// Writes one sentence in the corpus format, including the #doc marker when
// `emit_doc` is set. Chunk heads are not serialized; they are recomputed
// from the arcs on read.
void WriteSentence(std::ostream &out, const AnnotatedSentence &sentence,
                   bool emit_doc);
void WriteCorpus(std::ostream &out,
                 const std::vector<AnnotatedSentence> &sentences);

// Picks the chunk head: the token whose head lies outside the chunk (last
// one if several), falling back to the last token.
int FindChunkHead(const AnnotatedSentence &sentence, int start, int end);

}  // namespace setxpand

#endif  // SETXPAND_CORPUS_H_
