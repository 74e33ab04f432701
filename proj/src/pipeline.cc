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

#include "setxpand/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace setxpand {
namespace fs = std::filesystem;
namespace {

struct SingleMethod {
  ContextType type;
  ScoringMethod method;
};

std::optional<SingleMethod> ParseSingleMethod(const std::string &name) {
  const size_t dash = name.rfind('-');
  if (dash == std::string::npos) return std::nullopt;
  std::optional<ContextType> type = ParseContextType(name.substr(0, dash));
  if (!type) return std::nullopt;
  const std::string method = name.substr(dash + 1);
  if (method == "cent") return SingleMethod{*type, ScoringMethod::kCentroid};
  if (method == "csum") return SingleMethod{*type, ScoringMethod::kCombSum};
  return std::nullopt;
}

std::string ReadFile(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<std::string> SingleMethodNames() {
  std::vector<std::string> names;
  for (ContextType t : kAllContextTypes) {
    for (ScoringMethod m : {ScoringMethod::kCentroid, ScoringMethod::kCombSum}) {
      names.push_back(std::string(ContextTypeName(t)) + "-" +
                      std::string(ScoringMethodName(m)));
    }
  }
  return names;
}

std::vector<std::string> AllMethodNames() {
  std::vector<std::string> names = {"mlp", "concat"};
  for (std::string &n : SingleMethodNames()) names.push_back(std::move(n));
  return names;
}

bool IsKnownMethod(const std::string &method) {
  return method == "mlp" || method == "concat" ||
         ParseSingleMethod(method).has_value();
}

ExpansionEngine::ExpansionEngine(TermGroupTable groups, ModelArray models,
                                 ScoringParamsByType params)
    : groups_(std::move(groups)), models_(std::move(models)), params_(params) {}

ModelSet ExpansionEngine::models() const {
  ModelSet set;
  for (int t = 0; t < kNumContextTypes; ++t) {
    set.models[t] = models_[t] ? &*models_[t] : nullptr;
  }
  return set;
}

const EmbeddingModel *ExpansionEngine::model(ContextType type) const {
  const auto &m = models_[static_cast<int>(type)];
  return m ? &*m : nullptr;
}

bool ExpansionEngine::IsAvailable(const std::string &method) const {
  if (method == "mlp") return mlp_.has_value();
  if (method == "concat") return concat_.has_value();
  std::optional<SingleMethod> single = ParseSingleMethod(method);
  return single && model(single->type) != nullptr;
}

SeedSet ExpansionEngine::Resolve(std::span<const std::string> inputs) const {
  return ResolveSeeds(inputs, groups_, models());
}

std::vector<int> ExpansionEngine::RankIds(const SeedSet &seed,
                                          const std::string &method,
                                          int top_n) const {
  if (!IsKnownMethod(method)) throw std::invalid_argument("unknown method " + method);
  if (!IsAvailable(method)) {
    throw std::invalid_argument("method " + method + " is not available");
  }
  std::vector<int> ids;
  if (std::optional<SingleMethod> single = ParseSingleMethod(method)) {
    for (const Ranked &r :
         RankBySingle(models(), seed, single->type, single->method,
                      params_[static_cast<int>(single->type)], top_n)) {
      ids.push_back(r.id);
    }
    return ids;
  }
  for (const Ranked &r : Expand(seed, method, top_n).ranked) ids.push_back(r.id);
  return ids;
}

Expansion ExpansionEngine::Expand(const SeedSet &seed, const std::string &method,
                                  int top_n) const {
  if (!IsKnownMethod(method)) throw std::invalid_argument("unknown method " + method);
  if (!IsAvailable(method)) {
    throw std::invalid_argument("method " + method + " is not available");
  }
  Expansion out;
  out.seed = seed;
  if (seed.terms.empty()) return out;
  const ModelSet set = models();
  std::vector<FeatureVector> features;
  try {
    features = BuildFeatures(set, seed, params_);
  } catch (const std::runtime_error &) {
    return out;
  }
  if (method == "mlp") {
    out.ranked = RankCandidates(*mlp_, features, top_n);
  } else if (method == "concat") {
    std::vector<int> candidates;
    for (const FeatureVector &fv : features) candidates.push_back(fv.candidate);
    out.ranked = RankConcat(*concat_, set, seed, candidates, top_n);
  } else {
    const SingleMethod single = *ParseSingleMethod(method);
    out.ranked = RankBySingle(set, seed, single.type, single.method,
                              params_[static_cast<int>(single.type)], top_n);
  }
  for (const Ranked &r : out.ranked) {
    auto it = std::lower_bound(
        features.begin(), features.end(), r.id,
        [](const FeatureVector &fv, int id) { return fv.candidate < id; });
    out.features.push_back(it != features.end() && it->candidate == r.id
                               ? *it
                               : FeatureVector{r.id, {}});
  }
  return out;
}

void ExpansionEngine::SaveDir(const std::string &dir) const {
  fs::create_directories(fs::path(dir) / "models");
  groups_.Save((fs::path(dir) / "groups.tsv").string());
  for (ContextType t : kAllContextTypes) {
    if (const EmbeddingModel *m = model(t)) {
      m->Save((fs::path(dir) / "models" /
               (std::string(ContextTypeName(t)) + ".vec"))
                  .string());
    }
  }
  std::ofstream scoring(fs::path(dir) / "scoring.json");
  scoring << ScoringParamsJson(params_) << '\n';
  if (mlp_) mlp_->Save((fs::path(dir) / "mlp.txt").string());
  if (concat_) concat_->Save((fs::path(dir) / "concat.txt").string());
}

ExpansionEngine ExpansionEngine::LoadDir(const std::string &dir) {
  const fs::path root(dir);
  TermGroupTable groups = TermGroupTable::Load((root / "groups.tsv").string());
  ModelArray models;
  for (ContextType t : kAllContextTypes) {
    const fs::path p = root / "models" / (std::string(ContextTypeName(t)) + ".vec");
    if (fs::exists(p)) {
      models[static_cast<int>(t)] = EmbeddingModel::Load(p.string(), &groups);
    }
  }
  ScoringParamsByType params{};
  if (fs::exists(root / "scoring.json")) {
    params = ParseScoringParams(ReadFile(root / "scoring.json"));
  }
  ExpansionEngine engine(std::move(groups), std::move(models), params);
  if (fs::exists(root / "mlp.txt")) {
    engine.set_mlp(MlpModel::Load((root / "mlp.txt").string()));
  }
  if (fs::exists(root / "concat.txt")) {
    engine.set_concat(MlpModel::Load((root / "concat.txt").string()));
  }
  return engine;
}

std::string ScoringParamsJson(const ScoringParamsByType &params) {
  nlohmann::ordered_json j;
  for (ContextType t : kAllContextTypes) {
    const ScoringParams &p = params[static_cast<int>(t)];
    j[std::string(ContextTypeName(t))] = {{"k", p.k}, {"k_prime", p.k_prime}};
  }
  return j.dump(2);
}

ScoringParamsByType ParseScoringParams(const std::string &json) {
  const nlohmann::json j = nlohmann::json::parse(json);
  ScoringParamsByType params{};
  for (ContextType t : kAllContextTypes) {
    const std::string name(ContextTypeName(t));
    if (!j.contains(name)) continue;
    params[static_cast<int>(t)].k = j[name].value("k", ScoringParams{}.k);
    params[static_cast<int>(t)].k_prime =
        j[name].value("k_prime", ScoringParams{}.k_prime);
  }
  return params;
}

TermGroupTable BuildTermGroups(const Corpus &corpus,
                               const GroupingOptions &options,
                               const RedirectTable &links) {
  return GroupTermVariations(CountTermSurfaces(corpus), options, nullptr, links);
}

EncodedCorpus EncodeCorpus(const std::vector<AnnotatedSentence> &sentences,
                           TermGroupTable *groups) {
  EncodedCorpus encoded;
  UnitEncoder encoder(groups, &encoded.words);
  encoded.sequences = encoder.EncodeAll(sentences);
  return encoded;
}

TuningResult TuneScoringParams(const ModelSet &models,
                               const DatasetBundle &bundle,
                               const TuningConfig &config) {
  TuningResult result;
  const std::vector<int> cutoff = {config.cutoff};
  for (ContextType t : kAllContextTypes) {
    const EmbeddingModel *model = models.get(t);
    if (model == nullptr) continue;
    for (ScoringMethod m : {ScoringMethod::kCentroid, ScoringMethod::kCombSum}) {
      const std::string name = std::string(ContextTypeName(t)) + "-" +
                               std::string(ScoringMethodName(m));
      double best = -1.0;
      int best_value = m == ScoringMethod::kCentroid ? ScoringParams{}.k
                                                     : ScoringParams{}.k_prime;
      for (int value : config.grid) {
        ScoringParams p;
        p.k = value;
        p.k_prime = value;
        Expander expander = [&](const SeedSample &sample) {
          std::vector<int> ids;
          for (const Ranked &r : RankBySingle(models, SeedSetFromIds(sample.seed),
                                              t, m, p, config.cutoff)) {
            ids.push_back(r.id);
          }
          return ids;
        };
        const double map =
            EvaluateMethod(name, expander, bundle, cutoff, Split::kTrain)
                .Map(config.cutoff);
        result.table.emplace_back(name, value, map);
        if (map >= best) {
          best = map;
          best_value = value;
        }
      }
      ScoringParams &chosen = result.params[static_cast<int>(t)];
      (m == ScoringMethod::kCentroid ? chosen.k : chosen.k_prime) = best_value;
    }
  }
  return result;
}

std::vector<TrainingExample> CollectTrainingExamples(
    const ModelSet &models, const ScoringParamsByType &params,
    const DatasetBundle &bundle, Split split) {
  std::vector<TrainingExample> examples;
  for (const ListSamples *ls : bundle.InSplit(split)) {
    for (const SeedSample &sample : ls->samples) {
      std::vector<int> extra = sample.expanded_gold;
      extra.insert(extra.end(), sample.negatives.begin(), sample.negatives.end());
      const SeedSet seed = SeedSetFromIds(sample.seed);
      std::vector<FeatureVector> features;
      try {
        features = BuildFeatures(models, seed, params, extra);
      } catch (const std::runtime_error &) {
        continue;
      }
      for (const FeatureVector &fv : features) {
        const bool positive = std::binary_search(sample.expanded_gold.begin(),
                                                 sample.expanded_gold.end(),
                                                 fv.candidate);
        const bool negative = std::binary_search(
            sample.negatives.begin(), sample.negatives.end(), fv.candidate);
        if (!positive && !negative) continue;
        examples.push_back({fv.features, positive, ls->list.name, sample.id,
                            fv.candidate});
      }
    }
  }
  return examples;
}

std::vector<LabeledVector> CollectConcatExamples(const ModelSet &models,
                                                 const DatasetBundle &bundle,
                                                 Split split) {
  std::vector<LabeledVector> examples;
  for (const ListSamples *ls : bundle.InSplit(split)) {
    for (const SeedSample &sample : ls->samples) {
      const SeedSet seed = SeedSetFromIds(sample.seed);
      for (int id : sample.expanded_gold) {
        examples.push_back({ConcatInput(models, seed, id), true});
      }
      for (int id : sample.negatives) {
        examples.push_back({ConcatInput(models, seed, id), false});
      }
    }
  }
  return examples;
}

Expander MakeExpander(const ExpansionEngine &engine, const std::string &method,
                      int depth) {
  return [&engine, method, depth](const SeedSample &sample) {
    return engine.RankIds(SeedSetFromIds(sample.seed), method, depth);
  };
}

ExperimentResult RunExperiment(const std::vector<AnnotatedSentence> &sentences,
                               std::span<const RawTermList> lists,
                               const RedirectTable &redirects,
                               const PipelineConfig &config) {
  ExperimentResult result;
  Corpus corpus;
  corpus.sentences = sentences;
  TermGroupTable groups = BuildTermGroups(corpus, config.grouping, redirects);
  corpus.sentences.clear();
  EncodedCorpus encoded = EncodeCorpus(sentences, &groups);
  const UnitRenderer renderer(groups, encoded.words);

  ExtractionOptions extraction = config.extraction;
  extraction.patterns =
      DiscoverSymmetricPatterns(encoded.sequences, renderer, config.patterns);
  ModelArray models;
  for (ContextType t : kAllContextTypes) {
    ExtractionResult pairs =
        ExtractPairs(t, sentences, encoded.sequences, renderer, extraction);
    try {
      models[static_cast<int>(t)] =
          TrainEmbeddings(pairs.pairs, t, groups, config.train).model;
    } catch (const std::invalid_argument &e) {
      result.warnings.push_back(std::string(ContextTypeName(t)) +
                                " model not trained: " + e.what());
    }
  }

  result.bundle = BuildDataset(lists, redirects, groups, config.dataset);
  result.engine = ExpansionEngine(std::move(groups), std::move(models), {});
  const ExpansionEngine &engine = result.engine;
  result.tuning = TuneScoringParams(engine.models(), result.bundle, config.tuning);
  result.engine.set_params(result.tuning.params);

  const std::vector<TrainingExample> examples = CollectTrainingExamples(
      engine.models(), engine.params(), result.bundle);
  result.engine.set_mlp(TrainMlp(ToLabeledVectors(examples), config.mlp));
  if (config.fit_concat) {
    result.engine.set_concat(
        TrainMlp(CollectConcatExamples(engine.models(), result.bundle), config.mlp));
  }

  const int depth = *std::max_element(config.cutoffs.begin(), config.cutoffs.end());
  for (const std::string &name : SingleMethodNames()) {
    Expander expander = engine.IsAvailable(name)
                            ? MakeExpander(engine, name, depth)
                            : Expander([](const SeedSample &) {
                                return std::vector<int>{};
                              });
    result.single_reports.push_back(
        EvaluateMethod(name, expander, result.bundle, config.cutoffs));
  }
  for (const std::string name : {"mlp", "concat"}) {
    if (!engine.IsAvailable(name)) continue;
    result.combined_reports.push_back(EvaluateMethod(
        name, MakeExpander(engine, name, depth), result.bundle, config.cutoffs));
  }
  return result;
}

}  // namespace setxpand
