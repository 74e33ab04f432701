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

#ifndef SETXPAND_PIPELINE_H_
#define SETXPAND_PIPELINE_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "setxpand/combiner.h"
#include "setxpand/contexts.h"
#include "setxpand/corpus.h"
#include "setxpand/dataset.h"
#include "setxpand/embeddings.h"
#include "setxpand/eval.h"
#include "setxpand/expansion.h"
#include "setxpand/mlp.h"
#include "setxpand/synthetic.h"
#include "setxpand/term_groups.h"
#include "setxpand/units.h"

namespace setxpand {

using ModelArray = std::array<std::optional<EmbeddingModel>, kNumContextTypes>;

// Method names accepted by the engine: "mlp", "concat" and "<type>-<method>"
// for the ten single-context rankers ("lin-cent", "sp-csum", ...).
std::vector<std::string> SingleMethodNames();
std::vector<std::string> AllMethodNames();
bool IsKnownMethod(const std::string &method);

struct Expansion {
  SeedSet seed;
  std::vector<Ranked> ranked;
  // Feature vector of each ranked candidate, aligned with `ranked`.
  std::vector<FeatureVector> features;
};

// Read-only bundle of everything needed to answer expansion queries.
class ExpansionEngine {
 public:
  ExpansionEngine() = default;
  ExpansionEngine(TermGroupTable groups, ModelArray models,
                  ScoringParamsByType params);

  const TermGroupTable &groups() const { return groups_; }
  ModelSet models() const;
  const EmbeddingModel *model(ContextType type) const;
  const ScoringParamsByType &params() const { return params_; }
  void set_params(const ScoringParamsByType &params) { params_ = params; }

  void set_mlp(MlpModel mlp) { mlp_ = std::move(mlp); }
  void set_concat(MlpModel concat) { concat_ = std::move(concat); }
  const std::optional<MlpModel> &mlp() const { return mlp_; }
  const std::optional<MlpModel> &concat() const { return concat_; }
  // Known and backed by the loaded artifacts.
  bool IsAvailable(const std::string &method) const;

  SeedSet Resolve(std::span<const std::string> inputs) const;

  // Throws std::invalid_argument for an unknown or unavailable method. An
  // empty seed yields an empty expansion.
  Expansion Expand(const SeedSet &seed, const std::string &method,
                   int top_n) const;
  std::vector<int> RankIds(const SeedSet &seed, const std::string &method,
                           int top_n) const;

  // Directory layout: groups.tsv, models/<type>.vec, scoring.json and, when
  // trained, mlp.txt and concat.txt.
  void SaveDir(const std::string &dir) const;
  static ExpansionEngine LoadDir(const std::string &dir);

 private:
  TermGroupTable groups_;
  ModelArray models_;
  ScoringParamsByType params_{};
  std::optional<MlpModel> mlp_;
  std::optional<MlpModel> concat_;
};

std::string ScoringParamsJson(const ScoringParamsByType &params);
ScoringParamsByType ParseScoringParams(const std::string &json);

struct EncodedCorpus {
  WordVocab words;
  std::vector<UnitSequence> sequences;
};

// Counts chunk surfaces and groups their variations.
TermGroupTable BuildTermGroups(const Corpus &corpus,
                               const GroupingOptions &options,
                               const RedirectTable &links = {});

EncodedCorpus EncodeCorpus(const std::vector<AnnotatedSentence> &sentences,
                           TermGroupTable *groups);

struct TuningConfig {
  std::vector<int> grid = {100, 250, 500, 1000};
  int cutoff = 10;
};

struct TuningResult {
  ScoringParamsByType params{};
  // MAP@cutoff on the train lists per single method and grid value.
  std::vector<std::tuple<std::string, int, double>> table;
};

// Picks k (centroid) and k' (CombSUM) per context type maximizing MAP on
// the train lists; ties go to the larger value.
TuningResult TuneScoringParams(const ModelSet &models,
                               const DatasetBundle &bundle,
                               const TuningConfig &config);

// Gold terms as positives and sampled negatives, featurized over the
// candidate universe extended by the labeled terms.
std::vector<TrainingExample> CollectTrainingExamples(
    const ModelSet &models, const ScoringParamsByType &params,
    const DatasetBundle &bundle, Split split = Split::kTrain);

std::vector<LabeledVector> CollectConcatExamples(const ModelSet &models,
                                                 const DatasetBundle &bundle,
                                                 Split split = Split::kTrain);

struct PipelineConfig {
  GroupingOptions grouping;
  ExtractionOptions extraction;
  PatternDiscoveryConfig patterns;
  TrainConfig train;
  DatasetConfig dataset;
  TuningConfig tuning;
  MlpTrainConfig mlp;
  bool fit_concat = true;
  std::vector<int> cutoffs = kDefaultCutoffs;
};

struct ExperimentResult {
  DatasetBundle bundle;
  ExpansionEngine engine;
  TuningResult tuning;
  std::vector<EvalReport> single_reports;  // SingleMethodNames() order
  std::vector<EvalReport> combined_reports;  // "mlp", then "concat"
  std::vector<std::string> warnings;
};

// Whole chain from annotated sentences and gold lists to test-split reports.
ExperimentResult RunExperiment(const std::vector<AnnotatedSentence> &sentences,
                               std::span<const RawTermList> lists,
                               const RedirectTable &redirects,
                               const PipelineConfig &config);

// Expander over the engine for one method, ranking `depth` candidates.
Expander MakeExpander(const ExpansionEngine &engine, const std::string &method,
                      int depth);

}  // namespace setxpand

#endif  // SETXPAND_PIPELINE_H_
