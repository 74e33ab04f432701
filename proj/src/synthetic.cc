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

#include "setxpand/synthetic.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <string_view>

#include "setxpand/random.h"
#include "setxpand/term_groups.h"

namespace setxpand {
namespace {

constexpr int kUnsetHead = -100;
constexpr int kDepGap = 6;
constexpr int kNumChannels = 6;  // five context types plus noise

class NameFactory {
 public:
  explicit NameFactory(Rng *rng) : rng_(rng) {}

  std::string Word() {
    for (;;) {
      std::string w = Draw();
      if (used_.insert(w).second) return w;
    }
  }

  // Two capitalized words, kept apart from earlier terms in edit distance
  // so that variation grouping never merges two planted terms.
  std::string Term() {
    for (;;) {
      std::string a = Draw(), b = Draw();
      a[0] = static_cast<char>(std::toupper(a[0]));
      b[0] = static_cast<char>(std::toupper(b[0]));
      std::string term = a + " " + b;
      const std::string norm = NormalizeTerm(term);
      bool close = false;
      for (const std::string &other : terms_) {
        const size_t la = other.size(), lb = norm.size();
        if ((la > lb ? la - lb : lb - la) > 3) continue;
        if (EditSimilarity(other, norm) >= 0.8) {
          close = true;
          break;
        }
      }
      if (close) continue;
      terms_.push_back(norm);
      return term;
    }
  }

 private:
  std::string Draw() {
    static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
    static constexpr std::string_view kVowels = "aeiou";
    std::string w;
    const int syllables = 2 + static_cast<int>(rng_->Below(2));
    for (int s = 0; s < syllables; ++s) {
      w += kConsonants[rng_->Below(kConsonants.size())];
      w += kVowels[rng_->Below(kVowels.size())];
    }
    if (rng_->Below(2) == 0) w += kConsonants[rng_->Below(kConsonants.size())];
    return w;
  }

  Rng *rng_;
  std::set<std::string> used_;
  std::vector<std::string> terms_;
};

class SentenceBuilder {
 public:
  int Word(const std::string &surface, const char *pos) {
    Token t;
    t.surface = surface;
    t.lemma = surface;
    for (char &c : t.lemma) c = static_cast<char>(std::tolower(c));
    t.pos_tag = pos;
    t.head_index = kUnsetHead;
    s_.tokens.push_back(std::move(t));
    return static_cast<int>(s_.tokens.size()) - 1;
  }

  // Appends a two-token chunk; returns its head token.
  int Term(const std::string &name) {
    const size_t space = name.find(' ');
    const int first = Word(name.substr(0, space), "NNP");
    const int second = Word(name.substr(space + 1), "NNP");
    Attach(first, second, "compound");
    s_.chunks.push_back({first, second + 1, second});
    return second;
  }

  void Attach(int token, int head, const char *label) {
    s_.tokens[token].head_index = head;
    s_.tokens[token].dep_label = label;
  }

  // Unattached tokens hang off `root` with label "dep".
  AnnotatedSentence Finish(int root, const std::string &doc, bool bullet) {
    for (int i = 0; i < static_cast<int>(s_.tokens.size()); ++i) {
      Token &t = s_.tokens[i];
      if (i == root) {
        t.head_index = kRootHead;
        t.dep_label = "root";
      } else if (t.head_index == kUnsetHead) {
        t.head_index = root;
        t.dep_label = "dep";
      }
    }
    s_.doc_id = doc;
    s_.is_bullet_item = bullet;
    return std::move(s_);
  }

 private:
  AnnotatedSentence s_;
};

struct ClassVocab {
  std::vector<std::string> topic;
  std::vector<std::string> verbs;
  std::vector<std::array<std::string, 6>> frames;  // L3 L2 L1 | R1 R2 R3
  std::vector<int> terms;                          // global term indices
  std::array<std::vector<int>, kNumContextTypes> by_channel;
};

void CheckSpec(const SyntheticSpec &spec) {
  if (spec.num_classes < 1) throw std::invalid_argument("num_classes must be >= 1");
  if (spec.terms_per_class < 2) {
    throw std::invalid_argument("terms_per_class must be >= 2");
  }
  if (spec.sentences < 0) throw std::invalid_argument("sentences must be >= 0");
  if (spec.profiles.empty()) throw std::invalid_argument("no term profiles");
  for (const ChannelMix &m : spec.profiles) {
    double sum = m.noise;
    for (ContextType t : kAllContextTypes) {
      if (m.weight(t) < 0) throw std::invalid_argument("negative channel weight");
      sum += m.weight(t);
    }
    if (m.noise < 0 || sum <= 0) {
      throw std::invalid_argument("profile without a positive weight");
    }
  }
  const int64_t terms = int64_t{spec.num_classes} * spec.terms_per_class;
  if (spec.sentences > 0 && spec.sentences < terms) {
    throw std::invalid_argument("fewer sentences than planted terms");
  }
  if (spec.filler_words < 8 || spec.topic_words_per_class < 4 ||
      spec.verbs_per_class < 1 || spec.frames_per_class < 1 ||
      spec.sentences_per_doc < 1) {
    throw std::invalid_argument("vocabulary sizes too small");
  }
  if (spec.decoy_rate < 0 || spec.decoy_rate > 1 || spec.decoy_share < 0 ||
      spec.decoy_share > 1) {
    throw std::invalid_argument("decoy rates outside [0, 1]");
  }
  if (spec.bullet_fraction < 0 || spec.bullet_fraction > 1) {
    throw std::invalid_argument("bullet_fraction outside [0, 1]");
  }
}

int PickChannel(const ChannelMix &mix, Rng *rng) {
  std::array<double, kNumChannels> w = {mix.lin, mix.list, mix.dep,
                                        mix.sp,  mix.up,   mix.noise};
  double total = 0;
  for (double x : w) total += x;
  double r = rng->Uniform() * total;
  for (int i = 0; i < kNumChannels; ++i) {
    if (r < w[i]) return i;
    r -= w[i];
  }
  for (int i = kNumChannels - 1; i >= 0; --i) {
    if (w[i] > 0) return i;
  }
  return kNumChannels - 1;
}

}  // namespace

double ChannelMix::weight(ContextType type) const {
  switch (type) {
    case ContextType::kLin: return lin;
    case ContextType::kList: return list;
    case ContextType::kDep: return dep;
    case ContextType::kSp: return sp;
    case ContextType::kUp: return up;
  }
  return 0.0;
}

ChannelMix ChannelMix::Only(ContextType type, double noise) {
  ChannelMix m{0, 0, 0, 0, 0, noise};
  switch (type) {
    case ContextType::kLin: m.lin = 1; break;
    case ContextType::kList: m.list = 1; break;
    case ContextType::kDep: m.dep = 1; break;
    case ContextType::kSp: m.sp = 1; break;
    case ContextType::kUp: m.up = 1; break;
  }
  return m;
}

SyntheticCorpus GenerateSyntheticCorpus(const SyntheticSpec &spec) {
  CheckSpec(spec);
  Rng rng(spec.rng_seed);
  NameFactory names(&rng);

  std::vector<std::string> fillers(spec.filler_words);
  for (std::string &w : fillers) w = names.Word();
  std::vector<ClassVocab> classes(spec.num_classes);
  std::vector<std::string> term_names;
  std::vector<int> term_class;
  std::vector<int> term_profile;
  for (int c = 0; c < spec.num_classes; ++c) {
    ClassVocab &v = classes[c];
    for (int i = 0; i < spec.topic_words_per_class; ++i) v.topic.push_back(names.Word());
    for (int i = 0; i < spec.verbs_per_class; ++i) v.verbs.push_back(names.Word());
    for (int i = 0; i < spec.frames_per_class; ++i) {
      std::array<std::string, 6> frame;
      for (std::string &w : frame) w = names.Word();
      v.frames.push_back(frame);
    }
    for (int i = 0; i < spec.terms_per_class; ++i) {
      const int id = static_cast<int>(term_names.size());
      const int profile = i % static_cast<int>(spec.profiles.size());
      term_names.push_back(names.Term());
      term_class.push_back(c);
      term_profile.push_back(profile);
      v.terms.push_back(id);
      for (ContextType t : kAllContextTypes) {
        if (spec.profiles[profile].weight(t) > 0) {
          v.by_channel[static_cast<int>(t)].push_back(id);
        }
      }
    }
  }

  const int num_terms = static_cast<int>(term_names.size());
  // Per term and channel, the class whose material it borrows, or -1.
  std::vector<std::array<int, kNumContextTypes>> decoy(num_terms);
  for (int id = 0; id < num_terms; ++id) {
    for (int &d : decoy[id]) {
      d = -1;
      if (spec.num_classes > 1 && rng.Uniform() < spec.decoy_rate) {
        d = static_cast<int>(rng.Below(spec.num_classes - 1));
        if (d >= term_class[id]) ++d;
      }
    }
  }
  const int64_t total = spec.sentences > 0 ? spec.sentences : int64_t{30} * num_terms;
  SyntheticCorpus out;
  std::vector<int64_t> frequency(num_terms, 0);
  int64_t doc_counter = 0;
  int64_t in_doc = 0;
  std::string doc = "synth-0";
  auto next_doc = [&] {
    if (in_doc >= spec.sentences_per_doc) {
      doc = "synth-" + std::to_string(++doc_counter);
      in_doc = 0;
    }
  };
  auto emit = [&](SentenceBuilder &b, int root, bool bullet = false) {
    out.sentences.push_back(b.Finish(root, doc, bullet));
    ++in_doc;
  };
  auto filler = [&] { return fillers[rng.Below(fillers.size())]; };
  auto term = [&](SentenceBuilder &b, int id) {
    ++frequency[id];
    return b.Term(term_names[id]);
  };
  // Up to `n` class members other than `focus` that carry the channel.
  auto co_members = [&](int focus, int cls, ContextType type, size_t n) {
    std::vector<int> pool;
    for (int id : classes[cls].by_channel[static_cast<int>(type)]) {
      if (id != focus) pool.push_back(id);
    }
    return rng.Sample(pool, std::min(n, pool.size()));
  };

  std::vector<int> order(num_terms);
  for (int i = 0; i < num_terms; ++i) order[i] = i;
  for (int64_t s = 0; s < total; ++s) {
    if (s % num_terms == 0) rng.Shuffle(order);
    next_doc();
    const int focus = order[s % num_terms];
    int channel = PickChannel(spec.profiles[term_profile[focus]], &rng);
    int source = term_class[focus];
    if (channel < kNumContextTypes && decoy[focus][channel] >= 0 &&
        rng.Uniform() < spec.decoy_share) {
      source = decoy[focus][channel];
    }
    const ClassVocab &cls = classes[source];
    SentenceBuilder b;
    switch (channel) {
      case 0: {  // LIN: class topic words around the term.
        b.Word(filler(), "NN");
        for (int i = 0; i < 2; ++i) b.Word(cls.topic[rng.Below(cls.topic.size())], "NN");
        term(b, focus);
        for (int i = 0; i < 2; ++i) b.Word(cls.topic[rng.Below(cls.topic.size())], "NN");
        b.Word(filler(), "NN");
        b.Word(".", ".");
        emit(b, 0);
        break;
      }
      case 1: {  // LIST: comma list or bullet block of class members.
        std::vector<int> items = co_members(focus, source, ContextType::kList,
                                            2 + rng.Below(3));
        if (items.size() < 2) {
          channel = 5;
          break;
        }
        items.insert(items.begin() + static_cast<long>(rng.Below(items.size() + 1)),
                     focus);
        if (rng.Uniform() < spec.bullet_fraction) {
          b.Word(filler(), "NN");
          b.Word(filler(), "NN");
          b.Word(":", ":");
          emit(b, 0);
          for (int id : items) {
            SentenceBuilder item;
            term(item, id);
            item.Word(filler(), "NN");
            item.Word(filler(), "NN");
            item.Word(".", ".");
            emit(item, 1, true);
          }
          break;
        }
        b.Word(filler(), "NN");
        b.Word(filler(), "NN");
        b.Word(":", ":");
        for (size_t i = 0; i < items.size(); ++i) {
          if (i + 1 == items.size()) {
            b.Word("and", "CC");
          } else if (i > 0) {
            b.Word(",", ",");
          }
          term(b, items[i]);
        }
        b.Word(".", ".");
        emit(b, 0);
        break;
      }
      case 2: {  // DEP: class verb governs the term from a distance.
        const int subject = b.Word(filler(), "NN");
        const int verb = b.Word(cls.verbs[rng.Below(cls.verbs.size())], "VB");
        b.Attach(subject, verb, "nsubj");
        for (int i = 0; i < kDepGap; ++i) b.Attach(b.Word(filler(), "RB"), verb, "advmod");
        const int head = term(b, focus);
        b.Attach(head, verb, "dobj");
        b.Attach(b.Word(".", "."), verb, "punct");
        emit(b, verb);
        break;
      }
      case 3: {  // SP: "X and Y" with a class co-member.
        std::vector<int> other = co_members(focus, source, ContextType::kSp, 1);
        if (other.empty()) {
          channel = 5;
          break;
        }
        int x = focus, y = other[0];
        if (rng.Below(2) == 1) std::swap(x, y);
        b.Word(filler(), "NN");
        b.Word(filler(), "NN");
        term(b, x);
        const uint64_t r = rng.Below(10);
        if (r < 4) {
          b.Word("and", "CC");
        } else if (r < 7) {
          b.Word("or", "CC");
        } else {
          b.Word("rather", "RB");
          b.Word("than", "IN");
        }
        term(b, y);
        b.Word(filler(), "NN");
        b.Word(".", ".");
        emit(b, 0);
        break;
      }
      case 4: {  // UP: class n-gram frame around the term.
        const auto &frame = cls.frames[rng.Below(cls.frames.size())];
        for (int i = 0; i < 3; ++i) b.Word(frame[i], "NN");
        term(b, focus);
        for (int i = 3; i < 6; ++i) b.Word(frame[i], "NN");
        emit(b, 0);
        break;
      }
      default:
        break;
    }
    if (channel == 5) {  // noise
      for (int i = 0; i < 3; ++i) b.Word(filler(), "NN");
      term(b, focus);
      for (int i = 0; i < 3; ++i) b.Word(filler(), "NN");
      b.Word(".", ".");
      emit(b, 0);
    }
  }

  for (int id = 0; id < num_terms; ++id) {
    if (frequency[id] < spec.min_term_frequency) {
      throw std::runtime_error("planted term " + term_names[id] + " occurs only " +
                               std::to_string(frequency[id]) +
                               " times; raise the sentence count");
    }
    out.term_frequency[term_names[id]] = frequency[id];
  }
  for (int c = 0; c < spec.num_classes; ++c) {
    RawTermList list;
    char name[32];
    std::snprintf(name, sizeof(name), "class_%02d", c);
    list.name = name;
    for (int id : classes[c].terms) list.terms.push_back(term_names[id]);
    out.gold.push_back(std::move(list));
  }
  return out;
}

}  // namespace setxpand
