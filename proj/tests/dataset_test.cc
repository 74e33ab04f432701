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

#include "setxpand/dataset.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace setxpand {
namespace {

namespace fs = std::filesystem;

// Lists l00..l27 with 20 frequent members each plus one member at frequency 9,
// and 10 frequent unlisted groups.
struct Fixture {
  std::vector<RawTermList> lists;
  TermGroupTable groups;
};

std::string Name(int list, int term) {
  return "t" + std::to_string(list) + "x" + std::to_string(term);
}

Fixture MakeFixture(int num_lists = 28) {
  std::vector<TermGroup> groups;
  std::vector<RawTermList> lists;
  auto add = [&](const std::string &name, int64_t freq) {
    const int id = static_cast<int>(groups.size());
    groups.push_back({id, name, {name}, freq});
  };
  for (int l = 0; l < num_lists; ++l) {
    RawTermList raw;
    raw.name = (l < 10 ? "l0" : "l") + std::to_string(l);
    for (int t = 0; t < 21; ++t) {
      add(Name(l, t), t == 20 ? 9 : 10 + t);
      raw.terms.push_back(Name(l, t));
    }
    raw.terms.push_back("unknown" + std::to_string(l));
    lists.push_back(raw);
  }
  for (int i = 0; i < 10; ++i) add("free" + std::to_string(i), 50);
  return {lists, TermGroupTable(std::move(groups))};
}

DatasetConfig SmallConfig() {
  DatasetConfig config;
  config.top_frequent = 15;
  config.min_list_terms = 1;
  config.rng_seed = 11;
  return config;
}

TEST(DatasetTest, SplitsSamplesAndPruning) {
  const Fixture f = MakeFixture();
  const DatasetBundle bundle = BuildDataset(f.lists, {}, f.groups, SmallConfig());
  EXPECT_EQ(bundle.InSplit(Split::kTrain).size(), 5u);
  EXPECT_EQ(bundle.InSplit(Split::kDev).size(), 5u);
  EXPECT_EQ(bundle.InSplit(Split::kTest).size(), 18u);
  for (const ListSamples &ls : bundle.lists) {
    EXPECT_EQ(ls.list.terms.size(), 20u);
    EXPECT_EQ(ls.list.all_terms.size(), 21u);
    EXPECT_EQ(ls.list.unresolved.size(), 1u);
    ASSERT_EQ(ls.samples.size(), 15u);
    std::map<int, int> by_size;
    for (const SeedSample &s : ls.samples) {
      by_size[s.size]++;
      ASSERT_EQ(static_cast<int>(s.seed.size()), s.size);
      // Seed and expanded gold partition the pruned list.
      std::vector<int> seed = s.seed;
      std::sort(seed.begin(), seed.end());
      EXPECT_EQ(std::set<int>(seed.begin(), seed.end()).size(), seed.size());
      std::vector<int> merged;
      std::merge(seed.begin(), seed.end(), s.expanded_gold.begin(), s.expanded_gold.end(),
                 std::back_inserter(merged));
      EXPECT_EQ(merged, ls.list.terms);
      // Seeds come from the 15 most frequent members (frequencies 15..29).
      for (int id : s.seed) EXPECT_GE(f.groups.group(id).corpus_frequency, 15);
      if (ls.list.split == Split::kTrain) {
        EXPECT_EQ(s.negatives.size(), s.expanded_gold.size());
        for (int id : s.negatives) {
          EXPECT_FALSE(std::binary_search(ls.list.all_terms.begin(), ls.list.all_terms.end(), id));
          EXPECT_GE(f.groups.group(id).corpus_frequency, 10);
        }
      } else {
        EXPECT_TRUE(s.negatives.empty());
      }
    }
    EXPECT_EQ(by_size, (std::map<int, int>{{2, 5}, {5, 5}, {10, 5}}));
  }
}

TEST(DatasetTest, DeterministicAndSeedSensitive) {
  const Fixture f = MakeFixture();
  DatasetConfig config = SmallConfig();
  const DatasetBundle a = BuildDataset(f.lists, {}, f.groups, config);
  const DatasetBundle b = BuildDataset(f.lists, {}, f.groups, config);
  config.rng_seed = 12;
  const DatasetBundle c = BuildDataset(f.lists, {}, f.groups, config);
  bool differs = false;
  for (size_t l = 0; l < a.lists.size(); ++l) {
    EXPECT_EQ(a.lists[l].list.split, b.lists[l].list.split);
    for (size_t s = 0; s < a.lists[l].samples.size(); ++s) {
      EXPECT_EQ(a.lists[l].samples[s].seed, b.lists[l].samples[s].seed);
      differs = differs || a.lists[l].samples[s].seed != c.lists[l].samples[s].seed;
    }
  }
  EXPECT_TRUE(differs);
  EXPECT_NE(ConfigHash(config), ConfigHash(SmallConfig()));
}

TEST(DatasetTest, ListTooSmallAfterPruningIsSkipped) {
  Fixture f = MakeFixture(3);
  f.lists[1].terms.resize(10);
  f.lists[1].terms.push_back(Name(1, 20));
  const DatasetBundle bundle = BuildDataset(f.lists, {}, f.groups, SmallConfig());
  ASSERT_EQ(bundle.lists.size(), 2u);
  for (const ListSamples &ls : bundle.lists) EXPECT_NE(ls.list.name, "l01");
  const bool warned = std::any_of(bundle.warnings.begin(), bundle.warnings.end(),
                                  [](const std::string &w) {
                                    return w.find("l01 skipped") != std::string::npos;
                                  });
  EXPECT_TRUE(warned);
}

TEST(DatasetTest, RedirectsResolveVariations) {
  Fixture f = MakeFixture(1);
  f.lists[0].terms.back() = "Alias Zero";
  const RedirectTable redirects = {{"alias zero", Name(0, 0)}};
  const DatasetBundle bundle = BuildDataset(f.lists, redirects, f.groups, SmallConfig());
  ASSERT_EQ(bundle.lists.size(), 1u);
  EXPECT_TRUE(bundle.lists[0].list.unresolved.empty());
  EXPECT_EQ(bundle.lists[0].list.all_terms.size(), 21u);
}

TEST(DatasetTest, WriteReadRoundTripAndByteIdenticalRerun) {
  const Fixture f = MakeFixture();
  const DatasetBundle bundle = BuildDataset(f.lists, {{"a b", Name(0, 1)}}, f.groups, SmallConfig());
  const std::string a = testing::MakeTempDir("ds_a"), b = testing::MakeTempDir("ds_b");
  WriteDataset(bundle, f.groups, a);
  WriteDataset(BuildDataset(f.lists, {{"a b", Name(0, 1)}}, f.groups, SmallConfig()), f.groups,
               b);
  for (const char *file : {"splits.tsv", "redirects.tsv", "manifest.json", "seeds/l00.tsv",
                           "lists/l27.txt"}) {
    const std::string content = testing::ReadFile(a + "/" + file);
    EXPECT_FALSE(content.empty()) << file;
    EXPECT_EQ(content, testing::ReadFile(b + "/" + file)) << file;
  }
  const DatasetBundle read = ReadDataset(a, f.groups);
  ASSERT_EQ(read.lists.size(), bundle.lists.size());
  EXPECT_EQ(read.redirects, bundle.redirects);
  EXPECT_EQ(ConfigHash(read.config), ConfigHash(bundle.config));
  for (size_t l = 0; l < read.lists.size(); ++l) {
    EXPECT_EQ(read.lists[l].list.name, bundle.lists[l].list.name);
    EXPECT_EQ(read.lists[l].list.split, bundle.lists[l].list.split);
    EXPECT_EQ(read.lists[l].list.terms, bundle.lists[l].list.terms);
    ASSERT_EQ(read.lists[l].samples.size(), bundle.lists[l].samples.size());
    for (size_t s = 0; s < read.lists[l].samples.size(); ++s) {
      EXPECT_EQ(read.lists[l].samples[s].seed, bundle.lists[l].samples[s].seed);
      EXPECT_EQ(read.lists[l].samples[s].expanded_gold,
                bundle.lists[l].samples[s].expanded_gold);
      EXPECT_EQ(read.lists[l].samples[s].negatives, bundle.lists[l].samples[s].negatives);
    }
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(DatasetTest, TermListDirectoryRoundTrip) {
  const Fixture f = MakeFixture(2);
  const std::string dir = testing::MakeTempDir("lists");
  WriteTermLists(f.lists, dir);
  const std::vector<RawTermList> read = ReadTermLists(dir);
  ASSERT_EQ(read.size(), 2u);
  EXPECT_EQ(read[0].name, "l00");
  EXPECT_EQ(read[1].terms, f.lists[1].terms);
  std::ofstream(dir + "/bad.tsv") << "only-one-field\n";
  EXPECT_THROW(ReadRedirects(dir + "/bad.tsv"), std::runtime_error);
  fs::remove_all(dir);
}

TEST(SplitTest, NamesRoundTrip) {
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest}) {
    EXPECT_EQ(ParseSplit(SplitName(s)), s);
  }
  EXPECT_FALSE(ParseSplit("validation").has_value());
}

}  // namespace
}  // namespace setxpand
