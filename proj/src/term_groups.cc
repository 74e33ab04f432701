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

#include "setxpand/term_groups.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "setxpand/corpus.h"
#include "setxpand/disjoint_set.h"
#include "setxpand/embeddings.h"

namespace setxpand {
namespace {

bool IsPunct(char c) { return std::ispunct(static_cast<unsigned char>(c)); }

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::string CollapseSpaces(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

// Edit distance, or bound + 1 as soon as the distance provably exceeds it.
int BoundedEditDistance(std::string_view a, std::string_view b, int bound) {
  const int m = static_cast<int>(a.size());
  const int n = static_cast<int>(b.size());
  if (std::abs(m - n) > bound) return bound + 1;
  std::vector<int> prev(n + 1), curr(n + 1);
  for (int j = 0; j <= n; ++j) prev[j] = j;
  for (int i = 0; i < m; ++i) {
    curr[0] = i + 1;
    int row_min = curr[0];
    for (int j = 0; j < n; ++j) {
      int cost = a[i] == b[j] ? prev[j] : prev[j] + 1;
      cost = std::min({cost, prev[j + 1] + 1, curr[j] + 1});
      curr[j + 1] = cost;
      row_min = std::min(row_min, cost);
    }
    if (row_min > bound) return bound + 1;
    prev.swap(curr);
  }
  return prev[n];
}

const char *const kFunctionWords[] = {"of", "the", "and", "for", "in",
                                      "on", "at",  "de",  "a",   "an", "to"};

bool IsFunctionWord(std::string_view word) {
  for (const char *w : kFunctionWords) {
    if (word == w) return true;
  }
  return false;
}

struct Node {
  std::string normalized;
  std::string best_surface;
  int64_t best_surface_count = 0;
  int64_t frequency = 0;
};

}  // namespace

std::string NormalizeTerm(std::string_view surface) {
  std::string text;
  text.reserve(surface.size());
  for (char c : surface) {
    if (c == '-' || c == '_') {
      text += ' ';
    } else {
      text += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  text = CollapseSpaces(text);
  while (true) {
    size_t before = text.size();
    size_t lead = 0;
    while (lead < text.size() && (IsPunct(text[lead]) || IsSpace(text[lead]))) {
      ++lead;
    }
    text.erase(0, lead);
    while (!text.empty()) {
      char c = text.back();
      if (IsSpace(c)) {
        text.pop_back();
        continue;
      }
      if (!IsPunct(c)) break;
      if (c == '.') {
        size_t word_start = text.rfind(' ');
        word_start = word_start == std::string::npos ? 0 : word_start + 1;
        std::string_view word =
            std::string_view(text).substr(word_start, text.size() - 1 - word_start);
        // Keep the period of dotted abbreviations such as "u.k.".
        if (word.find('.') != std::string_view::npos) break;
      }
      text.pop_back();
    }
    if (text.size() == before) break;
  }
  return text;
}

int EditDistance(std::string_view a, std::string_view b) {
  return BoundedEditDistance(a, b, static_cast<int>(std::max(a.size(), b.size())));
}

double EditSimilarity(std::string_view a, std::string_view b) {
  size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(EditDistance(a, b)) /
                   static_cast<double>(longest);
}

std::string AcronymKey(std::string_view normalized) {
  if (normalized.find(' ') != std::string_view::npos) return "";
  std::string key;
  for (char c : normalized) {
    if (c == '.') continue;
    if (!std::isalpha(static_cast<unsigned char>(c))) return "";
    key += c;
  }
  if (key.size() < 2 || key.size() > 10) return "";
  return key;
}

std::vector<std::string> InitialismKeys(std::string_view normalized) {
  std::vector<std::string_view> words;
  size_t start = 0;
  while (start < normalized.size()) {
    size_t space = normalized.find(' ', start);
    if (space == std::string_view::npos) space = normalized.size();
    if (space > start) words.push_back(normalized.substr(start, space - start));
    start = space + 1;
  }
  std::vector<std::string> keys;
  if (words.size() < 2) return keys;
  std::string all, content;
  for (std::string_view w : words) {
    auto it = std::find_if(w.begin(), w.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c));
    });
    if (it == w.end()) continue;
    all += *it;
    if (!IsFunctionWord(w)) content += *it;
  }
  if (all.size() >= 2) keys.push_back(all);
  if (content.size() >= 2 && content != all) keys.push_back(content);
  return keys;
}

TermGroupTable::TermGroupTable(std::vector<TermGroup> groups)
    : groups_(std::move(groups)) {
  for (size_t i = 0; i < groups_.size(); ++i) {
    if (groups_[i].id != static_cast<int>(i)) {
      throw std::invalid_argument("term group ids must be dense and ordered");
    }
    for (const std::string &m : groups_[i].members) {
      if (!by_member_.emplace(m, static_cast<int>(i)).second) {
        throw std::invalid_argument("member '" + m + "' in two groups");
      }
    }
  }
}

std::optional<int> TermGroupTable::FindNormalized(
    const std::string &normalized) const {
  auto it = by_member_.find(normalized);
  if (it == by_member_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> TermGroupTable::Find(std::string_view surface) const {
  return FindNormalized(NormalizeTerm(surface));
}

int TermGroupTable::AddSingleton(std::string_view surface, int64_t frequency) {
  std::string normalized = NormalizeTerm(surface);
  if (auto id = FindNormalized(normalized)) return *id;
  TermGroup group;
  group.id = size();
  group.canonical = std::string(surface);
  group.members = {normalized};
  group.corpus_frequency = frequency;
  by_member_.emplace(normalized, group.id);
  groups_.push_back(std::move(group));
  return groups_.back().id;
}

void TermGroupTable::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const TermGroup &g : groups_) {
    out << g.id << '\t' << g.canonical << '\t';
    for (size_t i = 0; i < g.members.size(); ++i) {
      if (i > 0) out << '|';
      out << g.members[i];
    }
    out << '\t' << g.corpus_frequency << '\n';
  }
}

TermGroupTable TermGroupTable::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<TermGroup> groups;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 4) throw std::runtime_error("bad group line: " + line);
    TermGroup g;
    g.id = std::stoi(f[0]);
    g.canonical = f[1];
    std::stringstream ms(f[2]);
    while (std::getline(ms, field, '|')) g.members.push_back(field);
    g.corpus_frequency = std::stoll(f[3]);
    groups.push_back(std::move(g));
  }
  return TermGroupTable(std::move(groups));
}

TermGroupTable GroupTermVariations(
    const std::map<std::string, int64_t> &frequencies,
    const GroupingOptions &options, const EmbeddingModel *hint,
    const std::vector<std::pair<std::string, std::string>> &links) {
  // Identical normalization merges forms into one node up front.
  std::vector<Node> nodes;
  std::unordered_map<std::string, int> node_of;
  for (const auto &[surface, count] : frequencies) {
    std::string normalized = NormalizeTerm(surface);
    if (normalized.empty()) continue;
    auto [it, inserted] =
        node_of.emplace(normalized, static_cast<int>(nodes.size()));
    if (inserted) nodes.push_back(Node{normalized, surface, count, 0});
    Node &node = nodes[it->second];
    node.frequency += count;
    if (count > node.best_surface_count ||
        (count == node.best_surface_count && surface < node.best_surface)) {
      node.best_surface = surface;
      node.best_surface_count = count;
    }
  }
  DisjointSet sets(static_cast<int>(nodes.size()));

  if (options.use_acronyms) {
    std::unordered_map<std::string, std::vector<int>> by_acronym;
    for (size_t i = 0; i < nodes.size(); ++i) {
      std::string key = AcronymKey(nodes[i].normalized);
      if (!key.empty()) by_acronym[key].push_back(static_cast<int>(i));
    }
    for (size_t i = 0; i < nodes.size(); ++i) {
      for (const std::string &key : InitialismKeys(nodes[i].normalized)) {
        auto it = by_acronym.find(key);
        if (it == by_acronym.end()) continue;
        for (int j : it->second) sets.Union(static_cast<int>(i), j);
      }
    }
  }

  if (options.use_edit_distance && options.min_edit_similarity < 1.0) {
    // TODO: q-gram blocking; the length-window scan is quadratic in the
    // number of long terms and only suits desk-scale vocabularies.
    const double slack = 1.0 - options.min_edit_similarity;
    std::vector<int> by_length;
    for (size_t i = 0; i < nodes.size(); ++i) {
      // Shorter strings cannot reach a nonzero allowed distance.
      if (static_cast<double>(nodes[i].normalized.size()) * slack >= 1.0) {
        by_length.push_back(static_cast<int>(i));
      }
    }
    std::sort(by_length.begin(), by_length.end(), [&](int a, int b) {
      return std::make_pair(nodes[a].normalized.size(), a) <
             std::make_pair(nodes[b].normalized.size(), b);
    });
    for (size_t x = 0; x < by_length.size(); ++x) {
      const std::string &a = nodes[by_length[x]].normalized;
      for (size_t y = x + 1; y < by_length.size(); ++y) {
        const std::string &b = nodes[by_length[y]].normalized;
        const double longest = static_cast<double>(b.size());
        const int bound = static_cast<int>(longest * slack + 1e-9);
        if (static_cast<int>(b.size() - a.size()) > bound) break;
        int distance = BoundedEditDistance(a, b, bound);
        if (distance > bound) continue;
        if (1.0 - distance / longest < options.min_edit_similarity) continue;
        if (hint != nullptr) {
          std::optional<double> cos = hint->CosineByName(a, b);
          if (cos && *cos < options.min_embedding_cosine) continue;
        }
        sets.Union(by_length[x], by_length[y]);
      }
    }
  }

  for (const auto &[from, to] : links) {
    auto a = node_of.find(NormalizeTerm(from));
    auto b = node_of.find(NormalizeTerm(to));
    if (a != node_of.end() && b != node_of.end()) {
      sets.Union(a->second, b->second);
    }
  }

  std::map<int, std::vector<int>> components;
  for (size_t i = 0; i < nodes.size(); ++i) {
    components[sets.Find(static_cast<int>(i))].push_back(static_cast<int>(i));
  }
  std::vector<TermGroup> groups;
  groups.reserve(components.size());
  for (const auto &[root, members] : components) {
    TermGroup g;
    const Node *best = nullptr;
    for (int i : members) {
      const Node &node = nodes[i];
      g.members.push_back(node.normalized);
      g.corpus_frequency += node.frequency;
      if (best == nullptr || node.best_surface_count > best->best_surface_count ||
          (node.best_surface_count == best->best_surface_count &&
           node.best_surface < best->best_surface)) {
        best = &node;
      }
    }
    g.canonical = best->best_surface;
    std::sort(g.members.begin(), g.members.end());
    groups.push_back(std::move(g));
  }
  std::sort(groups.begin(), groups.end(),
            [](const TermGroup &a, const TermGroup &b) {
              if (a.corpus_frequency != b.corpus_frequency) {
                return a.corpus_frequency > b.corpus_frequency;
              }
              return a.canonical < b.canonical;
            });
  for (size_t i = 0; i < groups.size(); ++i) groups[i].id = static_cast<int>(i);
  return TermGroupTable(std::move(groups));
}

std::map<std::string, int64_t> CountTermSurfaces(const Corpus &corpus) {
  std::map<std::string, int64_t> counts;
  for (const AnnotatedSentence &s : corpus.sentences) {
    for (const ChunkSpan &c : s.chunks) counts[ChunkText(s, c)]++;
  }
  return counts;
}

}  // namespace setxpand
