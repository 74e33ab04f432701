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

#include "setxpand/embeddings.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "setxpand/kernels.h"
#include "setxpand/random.h"

namespace setxpand {

EmbeddingModel::EmbeddingModel(ContextType type, int dim, std::vector<int> ids,
                               std::vector<std::string> names,
                               std::vector<float> vectors)
    : type_(type),
      dim_(dim),
      ids_(std::move(ids)),
      names_(std::move(names)),
      vectors_(std::move(vectors)) {
  if (dim_ < 1) throw std::invalid_argument("embedding dim must be >= 1");
  if (names_.size() != ids_.size() ||
      vectors_.size() != ids_.size() * static_cast<size_t>(dim_)) {
    throw std::invalid_argument("embedding model shape mismatch");
  }
  Index();
}

void EmbeddingModel::Index() {
  row_of_.clear();
  row_of_name_.clear();
  norms_.assign(ids_.size(), 0.0);
  for (size_t r = 0; r < ids_.size(); ++r) {
    if (!row_of_.emplace(ids_[r], static_cast<int>(r)).second) {
      throw std::invalid_argument("duplicate id in embedding model");
    }
    row_of_name_.emplace(NormalizeTerm(names_[r]), static_cast<int>(r));
    std::span<const float> row = Row(static_cast<int>(r));
    norms_[r] = std::sqrt(kernels::DotF64(row, row));
  }
}

int EmbeddingModel::RowOf(int id) const {
  auto it = row_of_.find(id);
  if (it == row_of_.end()) {
    throw std::out_of_range("term id " + std::to_string(id) +
                            " not in embedding model");
  }
  return it->second;
}

std::span<const float> EmbeddingModel::Vector(int id) const {
  return Row(RowOf(id));
}

double EmbeddingModel::Cosine(int a, int b) const {
  const int ra = RowOf(a);
  const int rb = RowOf(b);
  const double denom = norms_[ra] * norms_[rb];
  if (denom == 0.0) return 0.0;
  return kernels::DotF64(Row(ra), Row(rb)) / denom;
}

std::optional<double> EmbeddingModel::CosineByName(const std::string &a,
                                                   const std::string &b) const {
  auto ia = row_of_name_.find(a);
  auto ib = row_of_name_.find(b);
  if (ia == row_of_name_.end() || ib == row_of_name_.end()) return std::nullopt;
  return Cosine(ids_[ia->second], ids_[ib->second]);
}

namespace {

std::vector<Neighbor> TopK(std::vector<Neighbor> all, int k) {
  auto better = [](const Neighbor &a, const Neighbor &b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.id < b.id;
  };
  const size_t keep = std::min(all.size(), static_cast<size_t>(std::max(k, 0)));
  std::partial_sort(all.begin(), all.begin() + keep, all.end(), better);
  all.resize(keep);
  return all;
}

}  // namespace

std::vector<Neighbor> EmbeddingModel::Nearest(int id, int k) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  const int query_row = RowOf(id);
  std::span<const float> query = Row(query_row);
  const double query_norm = norms_[query_row];
  std::vector<Neighbor> all;
  all.reserve(ids_.size());
  for (int r = 0; r < size(); ++r) {
    if (r == query_row) continue;
    const double denom = query_norm * norms_[r];
    const double cos = denom == 0.0 ? 0.0 : kernels::DotF64(query, Row(r)) / denom;
    all.push_back({ids_[r], cos});
  }
  return TopK(std::move(all), k);
}

std::vector<Neighbor> EmbeddingModel::NearestToVector(
    std::span<const double> query, int k, std::span<const int> exclude) const {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (static_cast<int>(query.size()) != dim_) {
    throw std::invalid_argument("query dimension mismatch");
  }
  double query_norm = 0.0;
  for (double q : query) query_norm += q * q;
  query_norm = std::sqrt(query_norm);
  std::vector<Neighbor> all;
  all.reserve(ids_.size());
  for (int r = 0; r < size(); ++r) {
    if (std::binary_search(exclude.begin(), exclude.end(), ids_[r])) continue;
    const double denom = query_norm * norms_[r];
    const double cos =
        denom == 0.0 ? 0.0 : kernels::DotMixed(query, Row(r)) / denom;
    all.push_back({ids_[r], cos});
  }
  return TopK(std::move(all), k);
}

void EmbeddingModel::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << size() << ' ' << dim_ << ' ' << ContextTypeName(type_) << '\n';
  char buffer[32];
  for (int r = 0; r < size(); ++r) {
    out << names_[r];
    for (float v : Row(r)) {
      std::snprintf(buffer, sizeof(buffer), " %.9g", static_cast<double>(v));
      out << buffer;
    }
    out << '\n';
  }
  nlohmann::json meta;
  meta["ids"] = ids_;
  meta["context_type"] = std::string(ContextTypeName(type_));
  meta["training"] = metadata_.empty() ? nlohmann::json::object()
                                       : nlohmann::json::parse(metadata_);
  std::ofstream sidecar(path + ".meta.json");
  if (!sidecar) throw std::runtime_error("cannot write " + path + ".meta.json");
  sidecar << meta.dump(2) << '\n';
}

EmbeddingModel EmbeddingModel::Load(const std::string &path,
                                    const TermGroupTable *groups) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  int vocab = 0, dim = 0;
  std::string type_name;
  if (!(hs >> vocab >> dim >> type_name)) {
    throw std::runtime_error("bad model header in " + path);
  }
  std::optional<ContextType> type = ParseContextType(type_name);
  if (!type) throw std::runtime_error("unknown context type " + type_name);

  std::vector<std::string> names;
  std::vector<float> vectors;
  names.reserve(vocab);
  vectors.reserve(static_cast<size_t>(vocab) * dim);
  std::string line;
  while (static_cast<int>(names.size()) < vocab && std::getline(in, line)) {
    // The canonical form may contain spaces; the last `dim` fields are floats.
    size_t end = line.size();
    std::vector<float> row(dim);
    for (int d = dim - 1; d >= 0; --d) {
      size_t space = line.rfind(' ', end - 1);
      if (space == std::string::npos) {
        throw std::runtime_error("short vector line in " + path);
      }
      row[d] = std::strtof(line.c_str() + space + 1, nullptr);
      end = space;
    }
    names.push_back(line.substr(0, end));
    vectors.insert(vectors.end(), row.begin(), row.end());
  }
  if (static_cast<int>(names.size()) != vocab) {
    throw std::runtime_error("truncated model file " + path);
  }

  std::vector<int> ids;
  std::string metadata;
  std::ifstream sidecar(path + ".meta.json");
  if (sidecar) {
    nlohmann::json meta = nlohmann::json::parse(sidecar);
    ids = meta.at("ids").get<std::vector<int>>();
    if (meta.contains("training")) metadata = meta["training"].dump();
  } else if (groups != nullptr) {
    for (const std::string &name : names) {
      std::optional<int> id = groups->Find(name);
      if (!id) throw std::runtime_error("unknown term in model: " + name);
      ids.push_back(*id);
    }
  } else {
    throw std::runtime_error("no sidecar and no group table for " + path);
  }
  EmbeddingModel model(*type, dim, std::move(ids), std::move(names),
                       std::move(vectors));
  model.set_metadata(std::move(metadata));
  return model;
}

namespace {

// log(1 + exp(x)) without overflow.
double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

uint64_t Fingerprint(const PairCounter &pairs,
                     const std::vector<PairCounter::Entry> &entries) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void *data, size_t n) {
    const auto *bytes = static_cast<const unsigned char *>(data);
    for (size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const PairCounter::Entry &e : entries) {
    uint64_t focus = e.focus.Pack();
    mix(&focus, sizeof(focus));
    const std::string &ctx = pairs.context(e.context);
    mix(ctx.data(), ctx.size());
    mix(&e.count, sizeof(e.count));
  }
  return h;
}

}  // namespace

TrainResult TrainEmbeddings(const PairCounter &pairs, ContextType type,
                            const TermGroupTable &groups,
                            const TrainConfig &config) {
  if (config.dim < 1 || config.negatives < 1 || config.epochs < 1) {
    throw std::invalid_argument("dim, negatives and epochs must be >= 1");
  }
  std::vector<PairCounter::Entry> entries;
  for (const PairCounter::Entry &e : pairs.SortedEntries()) {
    if (e.count >= config.min_pair_count) entries.push_back(e);
  }
  if (entries.empty()) throw std::invalid_argument("empty pair stream");

  // Dense focus and context indices in a canonical order.
  std::vector<Unit> focus_units;
  std::vector<int32_t> focus_index(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    if (focus_units.empty() || focus_units.back() != entries[i].focus) {
      focus_units.push_back(entries[i].focus);
    }
    focus_index[i] = static_cast<int32_t>(focus_units.size() - 1);
  }
  std::vector<int32_t> context_ids;
  for (const PairCounter::Entry &e : entries) context_ids.push_back(e.context);
  std::sort(context_ids.begin(), context_ids.end(), [&](int32_t a, int32_t b) {
    return pairs.context(a) < pairs.context(b);
  });
  context_ids.erase(std::unique(context_ids.begin(), context_ids.end()),
                    context_ids.end());
  std::unordered_map<int32_t, int32_t> context_index;
  for (size_t i = 0; i < context_ids.size(); ++i) {
    context_index[context_ids[i]] = static_cast<int32_t>(i);
  }

  const size_t dim = static_cast<size_t>(config.dim);
  const size_t n_focus = focus_units.size();
  const size_t n_context = context_ids.size();
  const long double bytes =
      static_cast<long double>(n_focus + n_context) * dim * sizeof(float);
  if (bytes > static_cast<long double>(config.memory_budget_bytes)) {
    throw std::length_error("embedding matrices exceed memory budget");
  }

  std::vector<int64_t> context_counts(n_context, 0);
  int64_t total = 0;
  std::vector<int32_t> pair_context(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    pair_context[i] = context_index[entries[i].context];
    context_counts[pair_context[i]] += entries[i].count;
    total += entries[i].count;
  }

  // Unigram^0.75 noise table.
  const size_t table_size = std::clamp<size_t>(n_context * 100, 100000, 10000000);
  std::vector<int32_t> noise_table(table_size);
  {
    double norm = 0.0;
    for (int64_t c : context_counts) norm += std::pow(static_cast<double>(c), 0.75);
    size_t c = 0;
    double cumulative = std::pow(static_cast<double>(context_counts[0]), 0.75) / norm;
    for (size_t i = 0; i < table_size; ++i) {
      noise_table[i] = static_cast<int32_t>(c);
      if (static_cast<double>(i + 1) / table_size > cumulative && c + 1 < n_context) {
        ++c;
        cumulative += std::pow(static_cast<double>(context_counts[c]), 0.75) / norm;
      }
    }
  }

  std::vector<double> keep_probability(n_context, 1.0);
  if (config.subsample_threshold > 0) {
    for (size_t c = 0; c < n_context; ++c) {
      const double f = static_cast<double>(context_counts[c]) / total;
      const double t = config.subsample_threshold;
      keep_probability[c] = std::min(1.0, (std::sqrt(f / t) + 1.0) * t / f);
    }
  }

  Rng init_rng(config.rng_seed);
  std::vector<float> focus(n_focus * dim);
  for (float &v : focus) {
    v = static_cast<float>((init_rng.Uniform() - 0.5) / config.dim);
  }
  std::vector<float> context(n_context * dim, 0.0f);

  auto term_rows = [&](const std::vector<float> &matrix) {
    std::vector<int> ids;
    std::vector<std::string> names;
    std::vector<float> vectors;
    for (size_t f = 0; f < n_focus; ++f) {
      if (!focus_units[f].is_term()) continue;
      ids.push_back(focus_units[f].id);
      names.push_back(groups.group(focus_units[f].id).canonical);
      vectors.insert(vectors.end(), matrix.begin() + f * dim,
                     matrix.begin() + (f + 1) * dim);
    }
    return EmbeddingModel(type, config.dim, std::move(ids), std::move(names),
                          std::move(vectors));
  };

  std::vector<uint32_t> occurrences;
  occurrences.reserve(static_cast<size_t>(total));
  for (size_t i = 0; i < entries.size(); ++i) {
    occurrences.insert(occurrences.end(), static_cast<size_t>(entries[i].count),
                       static_cast<uint32_t>(i));
  }

  TrainResult result;
  result.initial_model = term_rows(focus);
  Rng shuffle_rng(config.rng_seed ^ 0x5bd1e995ULL);
  int epochs = config.epochs;
  if (config.min_updates > 0 && !occurrences.empty()) {
    const int64_t n = static_cast<int64_t>(occurrences.size());
    epochs = static_cast<int>(std::max<int64_t>(epochs, (config.min_updates + n - 1) / n));
  }
  const double total_steps = static_cast<double>(occurrences.size()) * epochs;
  const int threads = std::max(1, config.threads);
  const kernels::KernelTable &k = kernels::ActiveKernels();

  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (size_t i = occurrences.size(); i > 1; --i) {
      std::swap(occurrences[i - 1], occurrences[shuffle_rng.Below(i)]);
    }
    std::vector<double> loss(threads, 0.0);
    std::vector<int64_t> processed(threads, 0);
    auto worker = [&](int t) {
      Rng rng(config.rng_seed * 0x9e3779b97f4a7c15ULL + epoch * 1000003ULL + t);
      std::vector<float> gradient(dim);
      const size_t begin = occurrences.size() * t / threads;
      const size_t end = occurrences.size() * (t + 1) / threads;
      const double base_step = static_cast<double>(epoch) * occurrences.size();
      for (size_t o = begin; o < end; ++o) {
        const uint32_t p = occurrences[o];
        const int32_t ctx = pair_context[p];
        if (keep_probability[ctx] < 1.0 && rng.Uniform() >= keep_probability[ctx]) {
          continue;
        }
        // Progress is approximated per thread as if shards ran in lockstep.
        const double step = base_step + static_cast<double>(o - begin) * threads;
        const float lr = static_cast<float>(
            config.initial_lr * std::max(1e-4, 1.0 - step / total_steps));
        float *v = focus.data() + focus_index[p] * dim;
        std::fill(gradient.begin(), gradient.end(), 0.0f);
        for (int d = 0; d <= config.negatives; ++d) {
          int32_t target = ctx;
          float label = 1.0f;
          if (d > 0) {
            target = noise_table[rng.Below(table_size)];
            if (target == ctx) continue;
            label = 0.0f;
          }
          float *u = context.data() + target * dim;
          const double dot = k.dot(v, u, dim);
          const double sig = 1.0 / (1.0 + std::exp(-dot));
          loss[t] += label > 0 ? Softplus(-dot) : Softplus(dot);
          const float g = static_cast<float>((label - sig) * lr);
          k.axpy(g, u, gradient.data(), dim);
          k.axpy(g, v, u, dim);
        }
        k.axpy(1.0f, gradient.data(), v, dim);
        ++processed[t];
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
      for (std::thread &th : pool) th.join();
    }
    double epoch_loss = 0.0;
    int64_t epoch_pairs = 0;
    for (int t = 0; t < threads; ++t) {
      epoch_loss += loss[t];
      epoch_pairs += processed[t];
    }
    result.epoch_loss.push_back(epoch_pairs > 0 ? epoch_loss / epoch_pairs : 0.0);
    result.pairs_used += epoch_pairs;
  }

  result.model = term_rows(focus);
  nlohmann::json meta;
  meta["dim"] = config.dim;
  meta["negatives"] = config.negatives;
  meta["epochs"] = epochs;
  meta["min_updates"] = config.min_updates;
  meta["initial_lr"] = config.initial_lr;
  meta["subsample_threshold"] = config.subsample_threshold;
  meta["min_pair_count"] = config.min_pair_count;
  meta["rng_seed"] = config.rng_seed;
  meta["threads"] = config.threads;
  char fingerprint[17];
  std::snprintf(fingerprint, sizeof(fingerprint), "%016llx",
                static_cast<unsigned long long>(Fingerprint(pairs, entries)));
  meta["corpus_fingerprint"] = fingerprint;
  meta["distinct_pairs"] = entries.size();
  meta["kernels"] = k.name;
  result.model.set_metadata(meta.dump());
  return result;
}

}  // namespace setxpand
