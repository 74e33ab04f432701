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

#ifndef SETXPAND_DATASET_H_
#define SETXPAND_DATASET_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "setxpand/term_groups.h"

namespace setxpand {

enum class Split { kTrain, kDev, kTest };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

// A term list as delivered: a name and surface forms.
struct RawTermList {
  std::string name;
  std::vector<std::string> terms;
};

// Variation surface form -> target surface form.
using RedirectTable = std::vector<std::pair<std::string, std::string>>;

struct TermList {
  std::string name;
  Split split = Split::kTest;
  std::vector<int> terms;      // after pruning, sorted
  std::vector<int> all_terms;  // resolved before pruning, sorted
  std::vector<std::string> unresolved;
  size_t raw_size = 0;
};

struct SeedSample {
  int id = 0;
  int size = 0;
  std::vector<int> seed;  // in sampling order
  std::vector<int> expanded_gold;  // sorted
  std::vector<int> negatives;      // sorted, train split only
};

struct ListSamples {
  TermList list;
  std::vector<SeedSample> samples;
};

struct DatasetConfig {
  int64_t min_frequency = 10;
  int top_frequent = 30;
  std::vector<int> seed_sizes = {2, 5, 10};
  int samples_per_size = 5;
  // Negative values pick counts proportional to 5/5/18.
  int train_lists = -1;
  int dev_lists = -1;
  int min_list_terms = 50;
  int max_list_terms = 800;
  uint64_t rng_seed = 1;
};

struct DatasetBundle {
  DatasetConfig config;
  std::vector<ListSamples> lists;  // sorted by name
  RedirectTable redirects;
  std::vector<std::string> warnings;

  std::vector<const ListSamples *> InSplit(Split split) const;
};

// Hex digest of the configuration, recorded in the bundle manifest.
std::string ConfigHash(const DatasetConfig &config);

// Resolves, prunes and splits the lists and draws the seed samples.
// Deterministic for a given configuration.
DatasetBundle BuildDataset(std::span<const RawTermList> lists,
                           const RedirectTable &redirects,
                           const TermGroupTable &groups,
                           const DatasetConfig &config);

// Layout: lists/<name>.txt, redirects.tsv, splits.tsv, seeds/<name>.tsv,
// manifest.json.
void WriteDataset(const DatasetBundle &bundle, const TermGroupTable &groups,
                  const std::string &dir);
DatasetBundle ReadDataset(const std::string &dir, const TermGroupTable &groups);

// Every <dir>/*.txt file is one list named after the file stem.
std::vector<RawTermList> ReadTermLists(const std::string &dir);
void WriteTermLists(std::span<const RawTermList> lists, const std::string &dir);
RedirectTable ReadRedirects(const std::string &path);

}  // namespace setxpand

#endif  // SETXPAND_DATASET_H_
