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

#include "setxpand/contexts.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

namespace setxpand {
namespace {

std::string Lowercase(std::string_view text) {
  std::string out(text);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsWordIn(const UnitSequence &seq, size_t pos, const UnitRenderer &renderer,
              std::initializer_list<std::string_view> words) {
  if (pos >= seq.units.size() || seq.units[pos].is_term()) return false;
  std::string text = Lowercase(renderer.Render(seq.units[pos]));
  for (std::string_view w : words) {
    if (text == w) return true;
  }
  return false;
}

bool IsTermAt(const UnitSequence &seq, size_t pos) {
  return pos < seq.units.size() && seq.units[pos].is_term();
}

// Infix text at units [begin, end) when all of them are words, else empty.
std::string InfixText(const UnitSequence &seq, size_t begin, size_t end,
                      const UnitRenderer &renderer) {
  std::string text;
  for (size_t p = begin; p < end; ++p) {
    if (seq.units[p].is_term()) return "";
    if (p > begin) text += ' ';
    text += Lowercase(renderer.Render(seq.units[p]));
  }
  return text;
}

}  // namespace

std::string_view ContextTypeName(ContextType type) {
  switch (type) {
    case ContextType::kLin: return "lin";
    case ContextType::kList: return "list";
    case ContextType::kDep: return "dep";
    case ContextType::kSp: return "sp";
    case ContextType::kUp: return "up";
  }
  return "?";
}

std::optional<ContextType> ParseContextType(std::string_view name) {
  for (ContextType t : kAllContextTypes) {
    if (ContextTypeName(t) == name) return t;
  }
  return std::nullopt;
}

void ExtractLinear(const UnitSequence &seq, const WindowConfig &config,
                   const UnitRenderer &renderer, const PairSink &sink) {
  const int n = static_cast<int>(seq.units.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - config.win);
    const int hi = std::min(n - 1, i + config.win);
    for (int j = lo; j <= hi; ++j) {
      if (j != i) sink(seq.units[i], renderer.Render(seq.units[j]));
    }
  }
}

std::vector<std::vector<Unit>> DetectCommaLists(const UnitSequence &seq,
                                                const UnitRenderer &renderer) {
  std::vector<std::vector<Unit>> lists;
  const size_t n = seq.units.size();
  size_t i = 0;
  while (i < n) {
    if (!seq.units[i].is_term()) {
      ++i;
      continue;
    }
    std::vector<Unit> items = {seq.units[i]};
    size_t last = i;
    while (true) {
      const size_t k = last + 1;
      if (IsWordIn(seq, k, renderer, {",", ";"})) {
        if (IsTermAt(seq, k + 1)) {
          items.push_back(seq.units[k + 1]);
          last = k + 1;
          continue;
        }
        if (IsWordIn(seq, k + 1, renderer, {"and", "or"}) &&
            IsTermAt(seq, k + 2)) {
          items.push_back(seq.units[k + 2]);
          last = k + 2;
        }
        break;
      }
      if (IsWordIn(seq, k, renderer, {"and", "or"}) && IsTermAt(seq, k + 1)) {
        items.push_back(seq.units[k + 1]);
        last = k + 1;
      }
      break;
    }
    if (items.size() >= 3) {
      lists.push_back(std::move(items));
      i = last + 1;
    } else {
      ++i;
    }
  }
  return lists;
}

std::vector<std::vector<Unit>> DetectBulletLists(
    const std::vector<AnnotatedSentence> &sentences,
    const std::vector<UnitSequence> &sequences) {
  std::vector<std::vector<Unit>> lists;
  std::vector<Unit> run;
  const std::string *run_doc = nullptr;
  auto close = [&]() {
    if (run.size() >= 3) lists.push_back(run);
    run.clear();
    run_doc = nullptr;
  };
  for (const UnitSequence &seq : sequences) {
    const AnnotatedSentence &s = sentences.at(seq.sentence_index);
    if (!s.is_bullet_item) {
      close();
      continue;
    }
    auto first = std::find_if(seq.units.begin(), seq.units.end(),
                              [](Unit u) { return u.is_term(); });
    if (first == seq.units.end() || (run_doc != nullptr && *run_doc != s.doc_id)) {
      close();
    }
    if (first == seq.units.end()) continue;
    run.push_back(*first);
    run_doc = &s.doc_id;
  }
  close();
  return lists;
}

void ExtractListPairs(const std::vector<std::vector<Unit>> &lists,
                      const UnitRenderer &renderer, const PairSink &sink) {
  for (const std::vector<Unit> &list : lists) {
    for (size_t a = 0; a < list.size(); ++a) {
      for (size_t b = 0; b < list.size(); ++b) {
        if (a != b && list[a] != list[b]) sink(list[a], renderer.Render(list[b]));
      }
    }
  }
}

int ExtractDependency(const AnnotatedSentence &sentence,
                      const UnitSequence &seq, const UnitRenderer &renderer,
                      const PairSink &sink) {
  const int n = static_cast<int>(sentence.tokens.size());
  std::vector<std::vector<int>> children(n);
  std::vector<int> chunk_of(n, -1);
  for (size_t c = 0; c < sentence.chunks.size(); ++c) {
    for (int t = sentence.chunks[c].start; t < sentence.chunks[c].end; ++t) {
      chunk_of[t] = static_cast<int>(c);
    }
  }
  for (int i = 0; i < n; ++i) {
    int h = sentence.tokens[i].head_index;
    if (h >= 0 && h < n) children[h].push_back(i);
  }
  // The unit a token stands for as a context: its term if it heads a chunk,
  // else the word itself.
  auto context_text = [&](int token) -> std::string {
    int c = chunk_of[token];
    if (c >= 0 && sentence.chunks[c].head_token == token) {
      return renderer.Render(seq.units[seq.token_unit[token]]);
    }
    return sentence.tokens[token].surface;
  };
  int warnings = 0;
  for (int i = 0; i < n; ++i) {
    const int c = chunk_of[i];
    if (c >= 0 && sentence.chunks[c].head_token != i) continue;
    const Token &token = sentence.tokens[i];
    if (token.head_index == kMissingHead) {
      ++warnings;
      continue;
    }
    const Unit focus = seq.units[seq.token_unit[i]];
    auto same_chunk = [&](int other) { return c >= 0 && chunk_of[other] == c; };
    for (int m : children[i]) {
      if (same_chunk(m)) continue;
      sink(focus, context_text(m) + "/" + sentence.tokens[m].dep_label);
    }
    const int h = token.head_index;
    if (h >= 0 && !same_chunk(h)) {
      sink(focus, context_text(h) + "/" + token.dep_label +
                      std::string(kInverseSuffix));
    }
  }
  return warnings;
}

std::vector<SymmetricPattern> DiscoverSymmetricPatterns(
    const std::vector<UnitSequence> &sequences, const UnitRenderer &renderer,
    const PatternDiscoveryConfig &config) {
  std::unordered_map<std::string, int64_t> word_counts;
  for (const UnitSequence &seq : sequences) {
    for (Unit u : seq.units) {
      if (!u.is_term()) word_counts[Lowercase(renderer.Render(u))]++;
    }
  }
  std::vector<std::pair<std::string, int64_t>> ranked(word_counts.begin(),
                                                      word_counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto &a, const auto &b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::unordered_set<std::string> infix_vocab(config.always_include.begin(),
                                              config.always_include.end());
  for (size_t i = 0;
       i < ranked.size() && i < static_cast<size_t>(config.infix_vocab_size);
       ++i) {
    infix_vocab.insert(ranked[i].first);
  }

  // Ordered (x, y) term pairs observed per infix.
  std::map<std::string, std::set<std::pair<int32_t, int32_t>>> observed;
  for (const UnitSequence &seq : sequences) {
    const size_t n = seq.units.size();
    for (size_t i = 0; i < n; ++i) {
      if (!seq.units[i].is_term()) continue;
      for (int len = 1; len <= config.max_infix_len; ++len) {
        const size_t j = i + len + 1;
        if (j >= n) break;
        if (seq.units[i + len].is_term()) break;
        std::string word = Lowercase(renderer.Render(seq.units[i + len]));
        if (!infix_vocab.count(word)) break;
        if (!seq.units[j].is_term()) continue;
        if (seq.units[i] == seq.units[j]) continue;
        observed[InfixText(seq, i + 1, j, renderer)].emplace(seq.units[i].id,
                                                             seq.units[j].id);
      }
    }
  }

  std::vector<SymmetricPattern> patterns;
  std::set<std::string> included;
  for (const auto &[infix, pairs] : observed) {
    int64_t unordered = 0;
    int64_t both = 0;
    for (const auto &[x, y] : pairs) {
      const bool reversed = pairs.count({y, x}) > 0;
      if (x < y || !reversed) ++unordered;
      if (x < y && reversed) ++both;
    }
    SymmetricPattern p{infix, unordered,
                       unordered == 0 ? 0.0
                                      : static_cast<double>(both) /
                                            static_cast<double>(unordered)};
    const bool forced =
        std::find(config.always_include.begin(), config.always_include.end(),
                  infix) != config.always_include.end();
    if (forced ||
        (p.support >= config.min_support && p.symmetry_score >= config.min_symmetry)) {
      patterns.push_back(p);
      included.insert(infix);
    }
  }
  for (const std::string &infix : config.always_include) {
    if (!included.count(infix)) patterns.push_back({infix, 0, 0.0});
  }
  std::sort(patterns.begin(), patterns.end(),
            [](const SymmetricPattern &a, const SymmetricPattern &b) {
              return a.infix < b.infix;
            });
  return patterns;
}

void ExtractSymmetricPatternPairs(const UnitSequence &seq,
                                  const std::vector<SymmetricPattern> &patterns,
                                  const UnitRenderer &renderer,
                                  const PairSink &sink) {
  int max_len = 0;
  std::unordered_set<std::string> infixes;
  for (const SymmetricPattern &p : patterns) {
    infixes.insert(p.infix);
    max_len = std::max(
        max_len, static_cast<int>(std::count(p.infix.begin(), p.infix.end(), ' ')) + 1);
  }
  const size_t n = seq.units.size();
  for (size_t i = 0; i < n; ++i) {
    if (!seq.units[i].is_term()) continue;
    for (int len = 1; len <= max_len; ++len) {
      const size_t j = i + len + 1;
      if (j >= n || seq.units[i + len].is_term()) break;
      if (!seq.units[j].is_term() || seq.units[i] == seq.units[j]) continue;
      if (!infixes.count(InfixText(seq, i + 1, j, renderer))) continue;
      sink(seq.units[i], renderer.Render(seq.units[j]));
      sink(seq.units[j], renderer.Render(seq.units[i]));
    }
  }
}

void ExtractUnaryPatterns(const UnitSequence &seq, const UnitRenderer &renderer,
                          const PairSink &sink) {
  const int n = static_cast<int>(seq.units.size());
  for (int i = 0; i < n; ++i) {
    if (!seq.units[i].is_term()) continue;
    auto at = [&](int offset) -> std::string_view {
      const int pos = i + offset;
      if (pos < 0) return kSentenceStart;
      if (pos >= n) return kSentenceEnd;
      return renderer.Render(seq.units[pos]);
    };
    // Frames as offset ranges [from, to] around the focus.
    static constexpr int kFrames[6][2] = {{-3, 1}, {-2, 2}, {-2, 1},
                                          {-1, 3}, {-1, 2}, {-1, 1}};
    for (const auto &frame : kFrames) {
      std::string text;
      for (int k = frame[0]; k <= frame[1]; ++k) {
        if (!text.empty()) text += ' ';
        text += k == 0 ? kPlaceholder : at(k);
      }
      sink(seq.units[i], text);
    }
  }
}

void SavePatterns(const std::string &path,
                  const std::vector<SymmetricPattern> &patterns) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const SymmetricPattern &p : patterns) {
    out << p.infix << '\t' << p.support << '\t' << p.symmetry_score << '\n';
  }
}

std::vector<SymmetricPattern> LoadPatterns(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<SymmetricPattern> patterns;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    SymmetricPattern p;
    std::string support, score;
    if (!std::getline(ss, p.infix, '\t') || !std::getline(ss, support, '\t') ||
        !std::getline(ss, score)) {
      throw std::runtime_error("bad pattern line: " + line);
    }
    p.support = std::stoll(support);
    p.symmetry_score = std::stod(score);
    patterns.push_back(std::move(p));
  }
  return patterns;
}

int32_t PairCounter::InternContext(std::string_view context) {
  auto it = context_ids_.find(std::string(context));
  if (it != context_ids_.end()) return it->second;
  int32_t id = num_contexts();
  contexts_.emplace_back(context);
  context_ids_.emplace(contexts_.back(), id);
  return id;
}

void PairCounter::Add(Unit focus, std::string_view context, int64_t count) {
  counts_[{focus.Pack(), InternContext(context)}] += count;
  total_ += count;
}

void PairCounter::Merge(const PairCounter &other) {
  for (const auto &[key, count] : other.counts_) {
    Add(Unit::Unpack(key.first), other.contexts_[key.second], count);
  }
}

int64_t PairCounter::Count(Unit focus, std::string_view context) const {
  auto c = context_ids_.find(std::string(context));
  if (c == context_ids_.end()) return 0;
  auto it = counts_.find({focus.Pack(), c->second});
  return it == counts_.end() ? 0 : it->second;
}

std::vector<PairCounter::Entry> PairCounter::SortedEntries() const {
  std::vector<Entry> entries;
  entries.reserve(counts_.size());
  for (const auto &[key, count] : counts_) {
    entries.push_back({Unit::Unpack(key.first), key.second, count});
  }
  std::sort(entries.begin(), entries.end(), [&](const Entry &a, const Entry &b) {
    if (a.focus != b.focus) return a.focus < b.focus;
    return contexts_[a.context] < contexts_[b.context];
  });
  return entries;
}

void PairCounter::Save(const std::string &path,
                       const UnitRenderer &renderer) const {
  std::vector<std::tuple<std::string, std::string, int64_t>> rows;
  rows.reserve(counts_.size());
  for (const auto &[key, count] : counts_) {
    rows.emplace_back(renderer.Render(Unit::Unpack(key.first)),
                      contexts_[key.second], count);
  }
  std::sort(rows.begin(), rows.end());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto &[focus, context, count] : rows) {
    out << focus << '\t' << context << '\t' << count << '\n';
  }
}

PairCounter PairCounter::Load(const std::string &path,
                              const TermGroupTable &groups, WordVocab *words) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  PairCounter counter;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t t1 = line.find('\t');
    size_t t2 = line.rfind('\t');
    if (t1 == std::string::npos || t2 == t1) {
      throw std::runtime_error("bad pair line: " + line);
    }
    std::string focus = line.substr(0, t1);
    std::string context = line.substr(t1 + 1, t2 - t1 - 1);
    int64_t count = std::stoll(line.substr(t2 + 1));
    Unit unit;
    std::optional<int> group = groups.Find(focus);
    if (group && groups.group(*group).canonical == focus) {
      unit = Unit::Term(*group);
    } else {
      unit = Unit::Word(words->Intern(focus));
    }
    counter.Add(unit, context, count);
  }
  return counter;
}

ExtractionResult ExtractPairs(ContextType type,
                              const std::vector<AnnotatedSentence> &sentences,
                              const std::vector<UnitSequence> &sequences,
                              const UnitRenderer &renderer,
                              const ExtractionOptions &options) {
  const int threads = std::max(
      1, std::min<int>(options.threads, static_cast<int>(sequences.size())));
  std::vector<ExtractionResult> shards(threads);
  auto run_shard = [&](int shard) {
    ExtractionResult &result = shards[shard];
    PairSink sink = [&](Unit focus, std::string_view context) {
      result.pairs.Add(focus, context);
    };
    for (size_t i = shard; i < sequences.size(); i += threads) {
      const UnitSequence &seq = sequences[i];
      switch (type) {
        case ContextType::kLin:
          ExtractLinear(seq, options.window, renderer, sink);
          break;
        case ContextType::kList:
          ExtractListPairs(DetectCommaLists(seq, renderer), renderer, sink);
          break;
        case ContextType::kDep:
          result.warnings += ExtractDependency(
              sentences.at(seq.sentence_index), seq, renderer, sink);
          break;
        case ContextType::kSp:
          ExtractSymmetricPatternPairs(seq, options.patterns, renderer, sink);
          break;
        case ContextType::kUp:
          ExtractUnaryPatterns(seq, renderer, sink);
          break;
      }
    }
  };
  if (threads == 1) {
    run_shard(0);
  } else {
    std::vector<std::thread> workers;
    for (int t = 0; t < threads; ++t) workers.emplace_back(run_shard, t);
    for (std::thread &w : workers) w.join();
  }
  ExtractionResult merged = std::move(shards[0]);
  for (int t = 1; t < threads; ++t) {
    merged.pairs.Merge(shards[t].pairs);
    merged.warnings += shards[t].warnings;
  }
  if (type == ContextType::kList) {
    ExtractListPairs(DetectBulletLists(sentences, sequences), renderer,
                     [&](Unit focus, std::string_view context) {
                       merged.pairs.Add(focus, context);
                     });
  }
  return merged;
}

}  // namespace setxpand
