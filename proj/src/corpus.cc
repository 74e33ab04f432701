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

#include "setxpand/corpus.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>

namespace setxpand {
namespace {

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

bool ParseInt(std::string_view text, int *value) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *value);
  return ec == std::errc() && ptr == text.data() + text.size();
}

// Accumulates the lines of one sentence and validates them as a unit.
class SentenceBuilder {
 public:
  void Reset() {
    sentence_ = AnnotatedSentence();
    chunk_tags_.clear();
    error_.clear();
    line_number_ = 0;
  }

  bool empty() const { return sentence_.tokens.empty() && error_.empty(); }

  void set_doc(std::string doc) { doc_ = std::move(doc); }
  void set_bullet() { sentence_.is_bullet_item = true; }
  void set_first_line(int64_t line) {
    if (line_number_ == 0) line_number_ = line;
  }
  int64_t first_line() const { return line_number_; }
  const std::string &error() const { return error_; }

  void AddLine(std::string_view line) {
    if (!error_.empty()) return;
    std::vector<std::string_view> f = SplitTabs(line);
    if (f.size() != 7) {
      error_ = "expected 7 columns, got " + std::to_string(f.size());
      return;
    }
    int index = 0;
    if (!ParseInt(f[0], &index) ||
        index != static_cast<int>(sentence_.tokens.size()) + 1) {
      error_ = "bad token index '" + std::string(f[0]) + "'";
      return;
    }
    Token token;
    token.surface = std::string(f[1]);
    token.lemma = std::string(f[2]);
    token.pos_tag = std::string(f[3]);
    token.dep_label = std::string(f[5]);
    if (token.surface.empty()) {
      error_ = "empty surface";
      return;
    }
    if (f[4] == "_") {
      token.head_index = kMissingHead;
    } else {
      int head = 0;
      if (!ParseInt(f[4], &head) || head < 0) {
        error_ = "bad head '" + std::string(f[4]) + "'";
        return;
      }
      token.head_index = head == 0 ? kRootHead : head - 1;
    }
    if (f[6] != "O" && f[6] != "B-NP" && f[6] != "I-NP") {
      error_ = "bad chunk tag '" + std::string(f[6]) + "'";
      return;
    }
    chunk_tags_.emplace_back(f[6]);
    sentence_.tokens.push_back(std::move(token));
  }

  // Returns false and sets error() when the sentence is inconsistent.
  bool Finish(AnnotatedSentence *out) {
    if (!error_.empty()) return false;
    const int n = static_cast<int>(sentence_.tokens.size());
    for (int i = 0; i < n; ++i) {
      int head = sentence_.tokens[i].head_index;
      if (head >= 0 && (head >= n || head == i)) {
        error_ = "head out of range at token " + std::to_string(i + 1);
        return false;
      }
    }
    int start = -1;
    for (int i = 0; i <= n; ++i) {
      const std::string tag = i < n ? chunk_tags_[i] : "O";
      if (tag == "I-NP") {
        if (start < 0) {
          error_ = "I-NP without B-NP at token " + std::to_string(i + 1);
          return false;
        }
        continue;
      }
      if (start >= 0) {
        sentence_.chunks.push_back(
            {start, i, FindChunkHead(sentence_, start, i)});
        start = -1;
      }
      if (tag == "B-NP") start = i;
    }
    sentence_.doc_id = doc_;
    *out = std::move(sentence_);
    return true;
  }

 private:
  AnnotatedSentence sentence_;
  std::vector<std::string> chunk_tags_;
  std::string doc_;
  std::string error_;
  int64_t line_number_ = 0;
};

}  // namespace

int AnnotatedSentence::ChunkOf(int token) const {
  for (size_t c = 0; c < chunks.size(); ++c) {
    if (chunks[c].Contains(token)) return static_cast<int>(c);
    if (chunks[c].start > token) break;
  }
  return -1;
}

std::string ChunkText(const AnnotatedSentence &sentence,
                      const ChunkSpan &chunk) {
  std::string text;
  for (int i = chunk.start; i < chunk.end; ++i) {
    if (i > chunk.start) text += ' ';
    text += sentence.tokens[i].surface;
  }
  return text;
}

int FindChunkHead(const AnnotatedSentence &sentence, int start, int end) {
  int head = -1;
  for (int i = start; i < end; ++i) {
    int h = sentence.tokens[i].head_index;
    if (h < start || h >= end) head = i;
  }
  return head >= 0 ? head : end - 1;
}

CorpusStats ReadCorpus(std::istream &in, const IngestOptions &options,
                       const SentenceSink &sink) {
  CorpusStats stats;
  SentenceBuilder builder;
  builder.Reset();
  bool pending_bullet = false;

  auto flush = [&]() {
    if (builder.empty()) {
      builder.Reset();
      return;
    }
    AnnotatedSentence sentence;
    if (builder.Finish(&sentence)) {
      stats.sentences++;
      stats.tokens += static_cast<int64_t>(sentence.tokens.size());
      stats.chunks += static_cast<int64_t>(sentence.chunks.size());
      sink(std::move(sentence));
    } else {
      std::string message = "line " + std::to_string(builder.first_line()) +
                            ": malformed sentence: " + builder.error();
      if (options.strict) throw std::runtime_error(message);
      stats.malformed++;
      if (stats.warnings.size() < options.max_warnings) {
        stats.warnings.push_back(std::move(message));
      }
    }
    builder.Reset();
  };

  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      pending_bullet = false;
      continue;
    }
    if (line[0] == '#') {
      if (line.rfind("#doc", 0) == 0) {
        flush();
        std::string_view id = std::string_view(line).substr(4);
        while (!id.empty() && id.front() == ' ') id.remove_prefix(1);
        builder.set_doc(std::string(id));
      } else if (line == "#bullet") {
        flush();
        pending_bullet = true;
      }
      continue;
    }
    builder.set_first_line(line_number);
    if (pending_bullet) {
      builder.set_bullet();
      pending_bullet = false;
    }
    builder.AddLine(line);
  }
  flush();
  return stats;
}

CorpusStats ReadCorpus(const std::string &path, const IngestOptions &options,
                       const SentenceSink &sink) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read corpus file: " + path);
  return ReadCorpus(in, options, sink);
}

Corpus ParseCorpus(std::istream &in, const IngestOptions &options) {
  Corpus corpus;
  corpus.stats = ReadCorpus(in, options, [&](AnnotatedSentence &&s) {
    corpus.sentences.push_back(std::move(s));
  });
  return corpus;
}

Corpus LoadCorpus(const std::string &path, const IngestOptions &options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read corpus file: " + path);
  return ParseCorpus(in, options);
}

void WriteSentence(std::ostream &out, const AnnotatedSentence &sentence,
                   bool emit_doc) {
  if (emit_doc) out << "#doc " << sentence.doc_id << '\n';
  if (sentence.is_bullet_item) out << "#bullet\n";
  size_t next_chunk = 0;
  for (size_t i = 0; i < sentence.tokens.size(); ++i) {
    const Token &t = sentence.tokens[i];
    const char *tag = "O";
    int idx = static_cast<int>(i);
    while (next_chunk < sentence.chunks.size() &&
           sentence.chunks[next_chunk].end <= idx) {
      ++next_chunk;
    }
    if (next_chunk < sentence.chunks.size() &&
        sentence.chunks[next_chunk].Contains(idx)) {
      tag = sentence.chunks[next_chunk].start == idx ? "B-NP" : "I-NP";
    }
    out << (i + 1) << '\t' << t.surface << '\t'
        << (t.lemma.empty() ? "_" : t.lemma) << '\t'
        << (t.pos_tag.empty() ? "_" : t.pos_tag) << '\t';
    if (t.head_index == kMissingHead) {
      out << '_';
    } else {
      out << (t.head_index == kRootHead ? 0 : t.head_index + 1);
    }
    out << '\t' << (t.dep_label.empty() ? "_" : t.dep_label) << '\t' << tag
        << '\n';
  }
  out << '\n';
}

void WriteCorpus(std::ostream &out,
                 const std::vector<AnnotatedSentence> &sentences) {
  const std::string *doc = nullptr;
  for (const AnnotatedSentence &s : sentences) {
    bool emit_doc = doc == nullptr || *doc != s.doc_id;
    WriteSentence(out, s, emit_doc);
    doc = &s.doc_id;
  }
}

}  // namespace setxpand
