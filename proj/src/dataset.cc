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
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "setxpand/random.h"

namespace setxpand {
namespace fs = std::filesystem;
namespace {

nlohmann::json ConfigJson(const DatasetConfig &c) {
  return {{"min_frequency", c.min_frequency},
          {"top_frequent", c.top_frequent},
          {"seed_sizes", c.seed_sizes},
          {"samples_per_size", c.samples_per_size},
          {"train_lists", c.train_lists},
          {"dev_lists", c.dev_lists},
          {"min_list_terms", c.min_list_terms},
          {"max_list_terms", c.max_list_terms},
          {"rng_seed", c.rng_seed}};
}

DatasetConfig ConfigFromJson(const nlohmann::json &j) {
  DatasetConfig c;
  c.min_frequency = j.at("min_frequency");
  c.top_frequent = j.at("top_frequent");
  c.seed_sizes = j.at("seed_sizes").get<std::vector<int>>();
  c.samples_per_size = j.at("samples_per_size");
  c.train_lists = j.at("train_lists");
  c.dev_lists = j.at("dev_lists");
  c.min_list_terms = j.at("min_list_terms");
  c.max_list_terms = j.at("max_list_terms");
  c.rng_seed = j.at("rng_seed");
  return c;
}

std::string JoinTerms(const std::vector<int> &ids, const TermGroupTable &groups) {
  std::string out;
  for (size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += '|';
    out += groups.group(ids[i]).canonical;
  }
  return out;
}

std::vector<int> ResolveTerms(const std::string &field,
                              const TermGroupTable &groups) {
  std::vector<int> ids;
  std::stringstream ss(field);
  std::string term;
  while (std::getline(ss, term, '|')) {
    if (term.empty()) continue;
    std::optional<int> id = groups.Find(term);
    if (!id) throw std::runtime_error("unknown term in dataset: " + term);
    ids.push_back(*id);
  }
  return ids;
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, '\t')) fields.push_back(f);
  if (!line.empty() && line.back() == '\t') fields.emplace_back();
  return fields;
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "?";
}

std::optional<Split> ParseSplit(std::string_view name) {
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest}) {
    if (SplitName(s) == name) return s;
  }
  return std::nullopt;
}

std::vector<const ListSamples *> DatasetBundle::InSplit(Split split) const {
  std::vector<const ListSamples *> out;
  for (const ListSamples &l : lists) {
    if (l.list.split == split) out.push_back(&l);
  }
  return out;
}

std::string ConfigHash(const DatasetConfig &config) {
  const std::string text = ConfigJson(config).dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(h));
  return buffer;
}

DatasetBundle BuildDataset(std::span<const RawTermList> lists,
                           const RedirectTable &redirects,
                           const TermGroupTable &groups,
                           const DatasetConfig &config) {
  DatasetBundle bundle;
  bundle.config = config;
  bundle.redirects = redirects;
  const int max_seed =
      config.seed_sizes.empty()
          ? 0
          : *std::max_element(config.seed_sizes.begin(), config.seed_sizes.end());

  std::unordered_map<std::string, std::string> redirect_of;
  for (const auto &[from, to] : redirects) redirect_of[NormalizeTerm(from)] = to;

  std::vector<RawTermList> sorted(lists.begin(), lists.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const RawTermList &a, const RawTermList &b) { return a.name < b.name; });

  std::vector<ListSamples> kept;
  for (const RawTermList &raw : sorted) {
    TermList list;
    list.name = raw.name;
    list.raw_size = raw.terms.size();
    if (static_cast<int>(raw.terms.size()) < config.min_list_terms ||
        static_cast<int>(raw.terms.size()) > config.max_list_terms) {
      bundle.warnings.push_back("list " + raw.name + " has " +
                                std::to_string(raw.terms.size()) +
                                " terms, outside the expected range");
    }
    std::set<int> all;
    for (const std::string &surface : raw.terms) {
      std::string target = surface;
      auto r = redirect_of.find(NormalizeTerm(surface));
      if (r != redirect_of.end()) target = r->second;
      std::optional<int> id = groups.Find(target);
      if (!id) id = groups.Find(surface);
      if (id) {
        all.insert(*id);
      } else {
        list.unresolved.push_back(surface);
      }
    }
    list.all_terms.assign(all.begin(), all.end());
    for (int id : list.all_terms) {
      if (groups.group(id).corpus_frequency >= config.min_frequency) {
        list.terms.push_back(id);
      }
    }
    if (static_cast<int>(list.terms.size()) < max_seed + 1) {
      bundle.warnings.push_back("list " + raw.name + " skipped: only " +
                                std::to_string(list.terms.size()) +
                                " terms survive pruning");
      continue;
    }
    kept.push_back({std::move(list), {}});
  }

  Rng rng(config.rng_seed);
  const int n = static_cast<int>(kept.size());
  int train_n = config.train_lists;
  int dev_n = config.dev_lists;
  if (train_n < 0) train_n = static_cast<int>(std::lround(n * 5.0 / 28.0));
  if (dev_n < 0) dev_n = static_cast<int>(std::lround(n * 5.0 / 28.0));
  train_n = std::min(train_n, n);
  dev_n = std::min(dev_n, n - train_n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  rng.Shuffle(order);
  for (int i = 0; i < n; ++i) {
    kept[order[i]].list.split =
        i < train_n ? Split::kTrain : (i < train_n + dev_n ? Split::kDev : Split::kTest);
  }

  // Negative pool: every sufficiently frequent group.
  std::vector<int> frequent;
  for (const TermGroup &g : groups.groups()) {
    if (g.corpus_frequency >= config.min_frequency) frequent.push_back(g.id);
  }

  for (ListSamples &ls : kept) {
    TermList &list = ls.list;
    std::vector<int> by_frequency = list.terms;
    std::sort(by_frequency.begin(), by_frequency.end(), [&](int a, int b) {
      const int64_t fa = groups.group(a).corpus_frequency;
      const int64_t fb = groups.group(b).corpus_frequency;
      return fa != fb ? fa > fb : a < b;
    });
    if (static_cast<int>(by_frequency.size()) < config.top_frequent) {
      bundle.warnings.push_back("list " + list.name + " has fewer than " +
                                std::to_string(config.top_frequent) +
                                " terms; seeds drawn from all of them");
    } else {
      by_frequency.resize(config.top_frequent);
    }
    std::vector<int> negative_pool;
    if (list.split == Split::kTrain) {
      for (int id : frequent) {
        if (!std::binary_search(list.all_terms.begin(), list.all_terms.end(), id)) {
          negative_pool.push_back(id);
        }
      }
    }
    int sample_id = 0;
    for (int size : config.seed_sizes) {
      for (int s = 0; s < config.samples_per_size; ++s) {
        SeedSample sample;
        sample.id = sample_id++;
        sample.size = size;
        sample.seed = rng.Sample(by_frequency, static_cast<size_t>(size));
        std::vector<int> seed_sorted = sample.seed;
        std::sort(seed_sorted.begin(), seed_sorted.end());
        std::set_difference(list.terms.begin(), list.terms.end(),
                            seed_sorted.begin(), seed_sorted.end(),
                            std::back_inserter(sample.expanded_gold));
        if (list.split == Split::kTrain) {
          if (negative_pool.size() < sample.expanded_gold.size()) {
            bundle.warnings.push_back("list " + list.name +
                                      ": negative pool smaller than gold set");
          }
          sample.negatives = rng.Sample(negative_pool, sample.expanded_gold.size());
          std::sort(sample.negatives.begin(), sample.negatives.end());
        }
        ls.samples.push_back(std::move(sample));
      }
    }
  }
  bundle.lists = std::move(kept);
  return bundle;
}

void WriteDataset(const DatasetBundle &bundle, const TermGroupTable &groups,
                  const std::string &dir) {
  fs::create_directories(fs::path(dir) / "lists");
  fs::create_directories(fs::path(dir) / "seeds");
  auto open = [](const fs::path &p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
  };
  {
    std::ofstream out = open(fs::path(dir) / "redirects.tsv");
    for (const auto &[from, to] : bundle.redirects) out << from << '\t' << to << '\n';
  }
  std::ofstream splits = open(fs::path(dir) / "splits.tsv");
  for (const ListSamples &ls : bundle.lists) {
    splits << ls.list.name << '\t' << SplitName(ls.list.split) << '\n';
    std::ofstream list = open(fs::path(dir) / "lists" / (ls.list.name + ".txt"));
    for (int id : ls.list.terms) list << groups.group(id).canonical << '\n';
    std::ofstream seeds = open(fs::path(dir) / "seeds" / (ls.list.name + ".tsv"));
    for (const SeedSample &s : ls.samples) {
      seeds << s.id << '\t' << s.size << '\t' << JoinTerms(s.seed, groups) << '\t'
            << JoinTerms(s.expanded_gold, groups) << '\t'
            << JoinTerms(s.negatives, groups) << '\n';
    }
  }
  nlohmann::json manifest;
  manifest["rng_seed"] = bundle.config.rng_seed;
  manifest["config_hash"] = ConfigHash(bundle.config);
  manifest["config"] = ConfigJson(bundle.config);
  manifest["lists"] = bundle.lists.size();
  manifest["warnings"] = bundle.warnings;
  std::ofstream out = open(fs::path(dir) / "manifest.json");
  out << manifest.dump(2) << '\n';
}

DatasetBundle ReadDataset(const std::string &dir, const TermGroupTable &groups) {
  DatasetBundle bundle;
  std::ifstream manifest_in(fs::path(dir) / "manifest.json");
  if (!manifest_in) throw std::runtime_error("no manifest.json in " + dir);
  nlohmann::json manifest = nlohmann::json::parse(manifest_in);
  bundle.config = ConfigFromJson(manifest.at("config"));
  bundle.warnings = manifest.value("warnings", std::vector<std::string>{});
  bundle.redirects = ReadRedirects((fs::path(dir) / "redirects.tsv").string());

  std::ifstream splits(fs::path(dir) / "splits.tsv");
  if (!splits) throw std::runtime_error("no splits.tsv in " + dir);
  std::string line;
  while (std::getline(splits, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = SplitTabs(line);
    std::optional<Split> split = f.size() == 2 ? ParseSplit(f[1]) : std::nullopt;
    if (!split) throw std::runtime_error("bad splits.tsv line: " + line);
    ListSamples ls;
    ls.list.name = f[0];
    ls.list.split = *split;
    std::ifstream list(fs::path(dir) / "lists" / (f[0] + ".txt"));
    std::string term;
    while (std::getline(list, term)) {
      if (term.empty()) continue;
      std::optional<int> id = groups.Find(term);
      if (!id) throw std::runtime_error("unknown term in list " + f[0] + ": " + term);
      ls.list.terms.push_back(*id);
    }
    std::sort(ls.list.terms.begin(), ls.list.terms.end());
    ls.list.all_terms = ls.list.terms;
    ls.list.raw_size = ls.list.terms.size();
    std::ifstream seeds(fs::path(dir) / "seeds" / (f[0] + ".tsv"));
    while (std::getline(seeds, term)) {
      if (term.empty()) continue;
      std::vector<std::string> s = SplitTabs(term);
      if (s.size() != 5) throw std::runtime_error("bad seed line: " + term);
      SeedSample sample;
      sample.id = std::stoi(s[0]);
      sample.size = std::stoi(s[1]);
      sample.seed = ResolveTerms(s[2], groups);
      sample.expanded_gold = ResolveTerms(s[3], groups);
      sample.negatives = ResolveTerms(s[4], groups);
      ls.samples.push_back(std::move(sample));
    }
    bundle.lists.push_back(std::move(ls));
  }
  std::sort(bundle.lists.begin(), bundle.lists.end(),
            [](const ListSamples &a, const ListSamples &b) {
              return a.list.name < b.list.name;
            });
  return bundle;
}

std::vector<RawTermList> ReadTermLists(const std::string &dir) {
  std::vector<RawTermList> lists;
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  for (const fs::path &p : files) {
    RawTermList list;
    list.name = p.stem().string();
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) list.terms.push_back(line);
    }
    lists.push_back(std::move(list));
  }
  return lists;
}

void WriteTermLists(std::span<const RawTermList> lists, const std::string &dir) {
  fs::create_directories(dir);
  for (const RawTermList &list : lists) {
    std::ofstream out(fs::path(dir) / (list.name + ".txt"));
    if (!out) throw std::runtime_error("cannot write list " + list.name);
    for (const std::string &t : list.terms) out << t << '\n';
  }
}

RedirectTable ReadRedirects(const std::string &path) {
  RedirectTable table;
  std::ifstream in(path);
  if (!in) return table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = SplitTabs(line);
    if (f.size() != 2) throw std::runtime_error("bad redirect line: " + line);
    table.emplace_back(f[0], f[1]);
  }
  return table;
}

}  // namespace setxpand
