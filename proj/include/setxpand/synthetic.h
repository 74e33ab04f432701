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

#ifndef SETXPAND_SYNTHETIC_H_
#define SETXPAND_SYNTHETIC_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "setxpand/contexts.h"
#include "setxpand/corpus.h"
#include "setxpand/dataset.h"

namespace setxpand {

// Relative sentence weights of one term profile. A term emits class evidence
// through the channels with positive weight; `noise` sentences carry none.
struct ChannelMix {
  double lin = 1.0;
  double list = 1.0;
  double dep = 1.0;
  double sp = 1.0;
  double up = 1.0;
  double noise = 1.0;

  double weight(ContextType type) const;
  static ChannelMix Only(ContextType type, double noise = 1.0);
};

struct SyntheticSpec {
  int num_classes = 20;
  int terms_per_class = 40;
  // Term i of every class follows profiles[i % profiles.size()].
  std::vector<ChannelMix> profiles = {ChannelMix{}};
  // Total sentences; 0 picks 30 per planted term.
  int64_t sentences = 0;
  uint64_t rng_seed = 1;
  // Share of LIST evidence emitted as bullet items instead of comma lists.
  double bullet_fraction = 0.5;
  // Share of (term, channel) combinations that borrow their material from a
  // random other class for `decoy_share` of the term's sentences. Decoys are
  // drawn independently per channel.
  double decoy_rate = 0.0;
  double decoy_share = 0.5;
  int filler_words = 3000;
  int topic_words_per_class = 10;
  int verbs_per_class = 3;
  int frames_per_class = 3;
  int sentences_per_doc = 20;
  int64_t min_term_frequency = 10;
};

struct SyntheticCorpus {
  std::vector<AnnotatedSentence> sentences;
  std::vector<RawTermList> gold;  // one list per class, "class_NN"
  std::map<std::string, int64_t> term_frequency;
};

// Planted-class corpus. Terms are two-token noun chunks; every class has its
// own topic words (LIN), co-member lists (LIST), governing verbs reached over
// six intervening tokens (DEP), "X and Y" style pairs (SP) and n-gram frames
// (UP). Deterministic for a given spec. Throws std::invalid_argument on an
// inconsistent spec and std::runtime_error when a planted term ends below
// `min_term_frequency`.
SyntheticCorpus GenerateSyntheticCorpus(const SyntheticSpec &spec);

}  // namespace setxpand

#endif  // SETXPAND_SYNTHETIC_H_
