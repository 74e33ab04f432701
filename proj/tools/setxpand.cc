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

// Command-line driver for the term set expansion pipeline. Every stage reads
// and writes fixed file names inside a work directory and records a manifest
// under <work>/manifests/<stage>.json.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "setxpand/pipeline.h"
#include "setxpand/service.h"

namespace setxpand {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr int kExitFailure = 1;
constexpr int kExitNoSeed = 3;

struct WorkDir {
  fs::path root = "work";

  fs::path corpus() const { return root / "corpus.txt"; }
  fs::path groups() const { return root / "groups.tsv"; }
  fs::path pairs(ContextType t) const {
    return root / "pairs" / (std::string(ContextTypeName(t)) + ".tsv");
  }
  fs::path patterns() const { return root / "patterns.tsv"; }
  fs::path model(ContextType t) const {
    return root / "models" / (std::string(ContextTypeName(t)) + ".vec");
  }
  fs::path dataset() const { return root / "dataset"; }
  fs::path scoring() const { return root / "scoring.json"; }
  fs::path mlp() const { return root / "mlp.txt"; }
  fs::path concat() const { return root / "concat.txt"; }
  fs::path eval() const { return root / "eval"; }
};

std::string Fingerprint(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "missing";
  uint64_t h = 0xcbf29ce484222325ULL;
  char buffer[1 << 16];
  while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buffer[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

// Writes <work>/manifests/<stage>.json. Content depends only on the config
// and the bytes of the inputs and outputs.
void WriteManifest(const WorkDir &work, const std::string &stage,
                   const ordered_json &config, const std::vector<fs::path> &inputs,
                   const std::vector<fs::path> &outputs) {
  ordered_json manifest;
  manifest["stage"] = stage;
  manifest["config"] = config;
  const std::string config_text = config.dump();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config_text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  manifest["config_hash"] = hex;
  ordered_json in = ordered_json::object(), out = ordered_json::object();
  for (const fs::path &p : inputs) in[p.string()] = Fingerprint(p);
  for (const fs::path &p : outputs) out[p.string()] = Fingerprint(p);
  manifest["inputs"] = in;
  manifest["outputs"] = out;
  fs::create_directories(work.root / "manifests");
  std::ofstream file(work.root / "manifests" / (stage + ".json"));
  file << manifest.dump(2) << '\n';
  if (!file) throw std::runtime_error("cannot write manifest for " + stage);
}

std::vector<ContextType> TypesFromFlag(const std::string &flag) {
  if (flag == "all") {
    return {kAllContextTypes.begin(), kAllContextTypes.end()};
  }
  std::optional<ContextType> t = ParseContextType(flag);
  if (!t) throw CLI::ValidationError("--type", "unknown context type " + flag);
  return {*t};
}

std::vector<std::string> SplitComma(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t b = item.find_first_not_of(" \t");
    const size_t e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

struct CorpusState {
  Corpus corpus;
  TermGroupTable groups;
  EncodedCorpus encoded;
};

CorpusState LoadEncoded(const WorkDir &work) {
  CorpusState s;
  s.corpus = LoadCorpus(work.corpus().string());
  s.groups = TermGroupTable::Load(work.groups().string());
  s.encoded = EncodeCorpus(s.corpus.sentences, &s.groups);
  return s;
}

ordered_json TrainConfigJson(const TrainConfig &c) {
  return {{"dim", c.dim},           {"negatives", c.negatives},
          {"epochs", c.epochs},     {"initial_lr", c.initial_lr},
          {"subsample", c.subsample_threshold},
          {"min_pair_count", c.min_pair_count}, {"min_updates", c.min_updates},
          {"rng_seed", c.rng_seed}, {"threads", c.threads}};
}

ChannelMix ProfileFor(const std::string &name, double noise) {
  if (name == "all") {
    ChannelMix m;
    m.noise = noise;
    return m;
  }
  std::optional<ContextType> t = ParseContextType(name);
  if (!t) throw CLI::ValidationError("--profile", "unknown profile " + name);
  return ChannelMix::Only(*t, noise);
}

int Run(int argc, char **argv) {
  CLI::App app{"Corpus-based term set expansion"};
  app.require_subcommand(1);
  WorkDir work;
  std::string work_dir = "work";
  int threads = 1;
  uint64_t seed = 1;
  app.add_option("--work", work_dir, "Work directory")->envname("SETXPAND_WORK");
  app.add_option("--threads", threads, "Worker threads; 1 is deterministic")
      ->envname("SETXPAND_THREADS")
      ->check(CLI::PositiveNumber);
  app.add_option("--rng-seed", seed, "Random seed for every stochastic stage")
      ->envname("SETXPAND_RNG_SEED");

  // ingest
  CLI::App *ingest = app.add_subcommand("ingest", "Validate and normalize a corpus");
  std::string corpus_path;
  bool strict = false;
  ingest->add_option("--corpus", corpus_path, "Annotated corpus file")
      ->required()
      ->envname("SETXPAND_CORPUS");
  ingest->add_flag("--strict", strict, "Fail on the first malformed sentence");

  // group
  CLI::App *group = app.add_subcommand("group", "Group term variations");
  std::string links_path;
  GroupingOptions grouping;
  bool no_acronyms = false, no_edit = false;
  group->add_option("--links", links_path, "TSV of explicit variation links");
  group->add_option("--min-edit-similarity", grouping.min_edit_similarity);
  group->add_flag("--no-acronyms", no_acronyms);
  group->add_flag("--no-edit-distance", no_edit);

  // extract
  CLI::App *extract = app.add_subcommand("extract", "Extract context pairs");
  std::string extract_type = "all";
  ExtractionOptions extraction;
  PatternDiscoveryConfig patterns;
  extract->add_option("--type", extract_type, "lin, list, dep, sp, up or all")
      ->check(CLI::IsMember({"all", "lin", "list", "dep", "sp", "up"}));
  extract->add_option("--win", extraction.window.win, "Linear window")
      ->check(CLI::PositiveNumber);
  extract->add_option("--min-support", patterns.min_support);
  extract->add_option("--min-symmetry", patterns.min_symmetry);
  extract->add_option("--max-infix", patterns.max_infix_len);

  // train
  CLI::App *train = app.add_subcommand("train", "Train context embeddings");
  std::string train_type = "all";
  TrainConfig train_config;
  train->add_option("--type", train_type, "lin, list, dep, sp, up or all")
      ->check(CLI::IsMember({"all", "lin", "list", "dep", "sp", "up"}));
  train->add_option("--dim", train_config.dim)->check(CLI::PositiveNumber);
  train->add_option("--epochs", train_config.epochs)->check(CLI::PositiveNumber);
  train->add_option("--negatives", train_config.negatives)->check(CLI::PositiveNumber);
  train->add_option("--lr", train_config.initial_lr);
  train->add_option("--subsample", train_config.subsample_threshold);
  train->add_option("--min-count", train_config.min_pair_count);
  train->add_option("--min-updates", train_config.min_updates,
                    "Raise epochs until this many pairs are presented");

  // dataset
  CLI::App *dataset = app.add_subcommand("dataset", "Build seed samples and splits");
  std::string lists_dir, redirects_path;
  DatasetConfig dataset_config;
  dataset->add_option("--lists", lists_dir, "Directory of <name>.txt term lists")
      ->required();
  dataset->add_option("--redirects", redirects_path, "TSV variation -> term");
  dataset->add_option("--min-frequency", dataset_config.min_frequency);
  dataset->add_option("--train-lists", dataset_config.train_lists);
  dataset->add_option("--dev-lists", dataset_config.dev_lists);

  // tune
  CLI::App *tune = app.add_subcommand("tune", "Grid-search k and k' on train lists");
  TuningConfig tuning;
  tune->add_option("--grid", tuning.grid, "Candidate cutoffs");

  // fit-mlp
  CLI::App *fit = app.add_subcommand("fit-mlp", "Train the combiner and baseline");
  MlpTrainConfig mlp_config;
  bool no_concat = false;
  fit->add_option("--epochs", mlp_config.epochs)->check(CLI::PositiveNumber);
  fit->add_option("--lr", mlp_config.lr);
  fit->add_option("--batch", mlp_config.batch);
  fit->add_flag("--no-concat", no_concat, "Skip the concatenation baseline");

  // expand
  CLI::App *expand = app.add_subcommand("expand", "Expand a seed set");
  std::string seed_text, method = "mlp";
  int top = 20;
  expand->add_option("--seed", seed_text, "Comma-separated seed terms")->required();
  expand->add_option("--top", top)->check(CLI::PositiveNumber);
  expand->add_option("--method", method)->envname("SETXPAND_METHOD");

  // eval
  CLI::App *eval = app.add_subcommand("eval", "Evaluate on the test lists");
  std::vector<std::string> methods;
  std::string split_name = "test";
  eval->add_option("--methods", methods,
                   "Methods to evaluate; gold-echo checks the harness");
  eval->add_option("--split", split_name)->check(CLI::IsMember({"train", "dev", "test"}));

  // synth
  CLI::App *synth = app.add_subcommand("synth", "Generate a planted-class corpus");
  SyntheticSpec spec;
  std::string synth_out, profile = "all";
  double noise = 1.0;
  synth->add_option("--out", synth_out, "Output directory (default <work>/synth)");
  synth->add_option("--classes", spec.num_classes)->check(CLI::PositiveNumber);
  synth->add_option("--terms", spec.terms_per_class)->check(CLI::PositiveNumber);
  synth->add_option("--sentences", spec.sentences);
  synth->add_option("--profile", profile, "all or a single context type")
      ->check(CLI::IsMember({"all", "lin", "list", "dep", "sp", "up"}));
  synth->add_option("--noise", noise, "Weight of signal-free sentences");

  // serve
  CLI::App *serve = app.add_subcommand("serve", "Serve expansions over HTTP");
  int port = 8080;
  std::string host = "127.0.0.1";
  serve->add_option("--port", port)->envname("SETXPAND_PORT");
  serve->add_option("--host", host)->envname("SETXPAND_HOST");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }
  work.root = work_dir;
  fs::create_directories(work.root);

  if (ingest->parsed()) {
    IngestOptions options;
    options.strict = strict;
    Corpus corpus = LoadCorpus(corpus_path, options);
    std::ofstream out(work.corpus());
    WriteCorpus(out, corpus.sentences);
    out.close();
    std::cerr << "ingested " << corpus.stats.sentences << " sentences, "
              << corpus.stats.tokens << " tokens, " << corpus.stats.chunks
              << " chunks, " << corpus.stats.malformed << " malformed\n";
    for (const std::string &w : corpus.stats.warnings) std::cerr << "warning: " << w << '\n';
    WriteManifest(work, "ingest",
                  {{"strict", strict},
                   {"sentences", corpus.stats.sentences},
                   {"tokens", corpus.stats.tokens},
                   {"chunks", corpus.stats.chunks},
                   {"malformed", corpus.stats.malformed}},
                  {corpus_path}, {work.corpus()});
    return 0;
  }

  if (group->parsed()) {
    grouping.use_acronyms = !no_acronyms;
    grouping.use_edit_distance = !no_edit;
    const Corpus corpus = LoadCorpus(work.corpus().string());
    const RedirectTable links =
        links_path.empty() ? RedirectTable{} : ReadRedirects(links_path);
    const TermGroupTable groups = BuildTermGroups(corpus, grouping, links);
    groups.Save(work.groups().string());
    std::cerr << groups.size() << " term groups\n";
    std::vector<fs::path> inputs = {work.corpus()};
    if (!links_path.empty()) inputs.push_back(links_path);
    WriteManifest(work, "group",
                  {{"acronyms", grouping.use_acronyms},
                   {"edit_distance", grouping.use_edit_distance},
                   {"min_edit_similarity", grouping.min_edit_similarity}},
                  inputs, {work.groups()});
    return 0;
  }

  if (extract->parsed()) {
    CorpusState s = LoadEncoded(work);
    const UnitRenderer renderer(s.groups, s.encoded.words);
    extraction.threads = threads;
    extraction.patterns = DiscoverSymmetricPatterns(s.encoded.sequences, renderer, patterns);
    SavePatterns(work.patterns().string(), extraction.patterns);
    fs::create_directories(work.root / "pairs");
    std::vector<fs::path> outputs = {work.patterns()};
    for (ContextType t : TypesFromFlag(extract_type)) {
      ExtractionResult r =
          ExtractPairs(t, s.corpus.sentences, s.encoded.sequences, renderer, extraction);
      r.pairs.Save(work.pairs(t).string(), renderer);
      outputs.push_back(work.pairs(t));
      std::cerr << ContextTypeName(t) << ": " << r.pairs.size() << " distinct pairs, "
                << r.pairs.total() << " total, " << r.warnings << " warnings\n";
    }
    WriteManifest(work, "extract-" + extract_type,
                  {{"type", extract_type},
                   {"win", extraction.window.win},
                   {"min_support", patterns.min_support},
                   {"min_symmetry", patterns.min_symmetry},
                   {"max_infix", patterns.max_infix_len},
                   {"patterns", extraction.patterns.size()}},
                  {work.corpus(), work.groups()}, outputs);
    return 0;
  }

  if (train->parsed()) {
    const TermGroupTable groups = TermGroupTable::Load(work.groups().string());
    train_config.threads = threads;
    train_config.rng_seed = seed;
    fs::create_directories(work.root / "models");
    std::vector<fs::path> inputs = {work.groups()}, outputs;
    for (ContextType t : TypesFromFlag(train_type)) {
      WordVocab words;
      const PairCounter pairs = PairCounter::Load(work.pairs(t).string(), groups, &words);
      TrainResult r = TrainEmbeddings(pairs, t, groups, train_config);
      r.model.Save(work.model(t).string());
      inputs.push_back(work.pairs(t));
      outputs.push_back(work.model(t));
      std::cerr << ContextTypeName(t) << ": " << r.model.size() << " terms, loss "
                << (r.epoch_loss.empty() ? 0.0 : r.epoch_loss.back()) << '\n';
    }
    ordered_json config = TrainConfigJson(train_config);
    config["type"] = train_type;
    WriteManifest(work, "train-" + train_type, config, inputs, outputs);
    return 0;
  }

  if (dataset->parsed()) {
    const TermGroupTable groups = TermGroupTable::Load(work.groups().string());
    dataset_config.rng_seed = seed;
    const std::vector<RawTermList> lists = ReadTermLists(lists_dir);
    const RedirectTable redirects =
        redirects_path.empty() ? RedirectTable{} : ReadRedirects(redirects_path);
    const DatasetBundle bundle = BuildDataset(lists, redirects, groups, dataset_config);
    WriteDataset(bundle, groups, work.dataset().string());
    for (const std::string &w : bundle.warnings) std::cerr << "warning: " << w << '\n';
    std::cerr << bundle.lists.size() << " lists: "
              << bundle.InSplit(Split::kTrain).size() << " train, "
              << bundle.InSplit(Split::kDev).size() << " dev, "
              << bundle.InSplit(Split::kTest).size() << " test\n";
    std::vector<fs::path> inputs = {work.groups()};
    if (!redirects_path.empty()) inputs.push_back(redirects_path);
    WriteManifest(work, "dataset",
                  {{"config_hash", ConfigHash(dataset_config)}, {"lists", lists_dir}},
                  inputs, {work.dataset() / "manifest.json", work.dataset() / "splits.tsv"});
    return 0;
  }

  if (tune->parsed()) {
    ExpansionEngine engine = ExpansionEngine::LoadDir(work.root.string());
    const DatasetBundle bundle = ReadDataset(work.dataset().string(), engine.groups());
    const TuningResult result = TuneScoringParams(engine.models(), bundle, tuning);
    std::ofstream(work.scoring()) << ScoringParamsJson(result.params) << '\n';
    std::ofstream table(work.root / "tuning.tsv");
    table << "method\tvalue\tmap@" << tuning.cutoff << '\n';
    for (const auto &[name, value, map] : result.table) {
      table << name << '\t' << value << '\t' << map << '\n';
    }
    table.close();
    WriteManifest(work, "tune", {{"grid", tuning.grid}, {"cutoff", tuning.cutoff}},
                  {work.groups(), work.dataset() / "manifest.json"},
                  {work.scoring(), work.root / "tuning.tsv"});
    return 0;
  }

  if (fit->parsed()) {
    ExpansionEngine engine = ExpansionEngine::LoadDir(work.root.string());
    const DatasetBundle bundle = ReadDataset(work.dataset().string(), engine.groups());
    mlp_config.seed = seed;
    const std::vector<TrainingExample> examples =
        CollectTrainingExamples(engine.models(), engine.params(), bundle);
    const MlpModel mlp = TrainMlp(ToLabeledVectors(examples), mlp_config);
    mlp.Save(work.mlp().string());
    std::ofstream loss(work.root / "mlp_loss.tsv");
    loss << "epoch\tloss\n";
    for (size_t e = 0; e < mlp.epoch_loss.size(); ++e) {
      loss << e + 1 << '\t' << mlp.epoch_loss[e] << '\n';
    }
    loss.close();
    std::vector<fs::path> outputs = {work.mlp(), work.root / "mlp_loss.tsv"};
    if (!no_concat) {
      TrainMlp(CollectConcatExamples(engine.models(), bundle), mlp_config)
          .Save(work.concat().string());
      outputs.push_back(work.concat());
    }
    std::cerr << "trained on " << mlp.positives_used << " positives, "
              << mlp.negatives_used << " negatives\n";
    WriteManifest(work, "fit-mlp",
                  {{"epochs", mlp_config.epochs},
                   {"lr", mlp_config.lr},
                   {"batch", mlp_config.batch},
                   {"seed", mlp_config.seed},
                   {"activation", std::string(ActivationName(mlp_config.activation))},
                   {"concat", !no_concat}},
                  {work.scoring(), work.dataset() / "manifest.json"}, outputs);
    return 0;
  }

  if (expand->parsed()) {
    const std::vector<std::string> seeds = SplitComma(seed_text);
    if (seeds.empty()) {
      std::cerr << "error: --seed needs at least one term\n";
      return static_cast<int>(CLI::ExitCodes::ValidationError);
    }
    if (!IsKnownMethod(method)) {
      std::cerr << "error: unknown method " << method << '\n';
      return static_cast<int>(CLI::ExitCodes::ValidationError);
    }
    ExpansionEngine engine = ExpansionEngine::LoadDir(work.root.string());
    const SeedSet seed_set = engine.Resolve(seeds);
    for (const std::string &u : seed_set.unresolved) {
      std::cerr << "unresolved: " << u << '\n';
    }
    if (seed_set.terms.empty()) {
      std::cerr << "error: no seed term resolves\n";
      return kExitNoSeed;
    }
    const Expansion expansion = engine.Expand(seed_set, method, top);
    std::cout << "rank\tterm\tscore\n";
    for (size_t i = 0; i < expansion.ranked.size(); ++i) {
      std::cout << i + 1 << '\t'
                << engine.groups().group(expansion.ranked[i].id).canonical << '\t'
                << expansion.ranked[i].score << '\n';
    }
    return 0;
  }

  if (eval->parsed()) {
    ExpansionEngine engine = ExpansionEngine::LoadDir(work.root.string());
    const DatasetBundle bundle = ReadDataset(work.dataset().string(), engine.groups());
    const Split split = *ParseSplit(split_name);
    if (methods.empty()) {
      for (const std::string &m : AllMethodNames()) {
        if (engine.IsAvailable(m)) methods.push_back(m);
      }
    }
    const int depth = kDefaultCutoffs.back();
    std::vector<EvalReport> singles, combined;
    for (const std::string &m : methods) {
      Expander expander;
      if (m == "gold-echo") {
        expander = [](const SeedSample &s) { return s.expanded_gold; };
      } else if (engine.IsAvailable(m)) {
        expander = MakeExpander(engine, m, depth);
      } else {
        std::cerr << "error: method " << m << " is not available\n";
        return static_cast<int>(CLI::ExitCodes::ValidationError);
      }
      EvalReport report = EvaluateMethod(m, expander, bundle, kDefaultCutoffs, split);
      (m.find('-') != std::string::npos && m != "gold-echo" ? singles : combined)
          .push_back(std::move(report));
    }
    fs::create_directories(work.eval());
    std::vector<EvalReport> all = singles;
    all.insert(all.end(), combined.begin(), combined.end());
    std::ofstream tsv(work.eval() / "report.tsv");
    WriteReportTsv(tsv, all);
    tsv.close();
    std::ostringstream tables;
    if (!singles.empty()) {
      tables << "Context comparison, 5 seeds\n";
      WriteContextTable(tables, singles);
      tables << '\n';
    }
    tables << "Combination, 5 seeds\n";
    WriteCombinationTable(tables, singles.size() == SingleMethodNames().size()
                                      ? std::span<const EvalReport>(singles)
                                      : std::span<const EvalReport>(),
                          all);
    std::ofstream(work.eval() / "tables.txt") << tables.str();
    std::cout << tables.str();
    WriteManifest(work, "eval", {{"methods", methods}, {"split", split_name}},
                  {work.groups(), work.dataset() / "manifest.json"},
                  {work.eval() / "report.tsv", work.eval() / "tables.txt"});
    return 0;
  }

  if (synth->parsed()) {
    spec.rng_seed = seed;
    spec.profiles = {ProfileFor(profile, noise)};
    const fs::path out = synth_out.empty() ? work.root / "synth" : fs::path(synth_out);
    const SyntheticCorpus corpus = GenerateSyntheticCorpus(spec);
    fs::create_directories(out);
    std::ofstream file(out / "corpus.txt");
    WriteCorpus(file, corpus.sentences);
    file.close();
    WriteTermLists(corpus.gold, (out / "lists").string());
    std::cerr << corpus.sentences.size() << " sentences, " << corpus.gold.size()
              << " lists\n";
    WriteManifest(work, "synth",
                  {{"classes", spec.num_classes},
                   {"terms_per_class", spec.terms_per_class},
                   {"sentences", spec.sentences},
                   {"profile", profile},
                   {"noise", noise},
                   {"rng_seed", spec.rng_seed}},
                  {}, {out / "corpus.txt"});
    return 0;
  }

  if (serve->parsed()) {
    const ExpansionEngine engine = ExpansionEngine::LoadDir(work.root.string());
    std::cerr << "serving on http://" << host << ':' << port << '\n';
    if (!Serve(engine, host, port)) {
      std::cerr << "error: cannot listen on " << host << ':' << port << '\n';
      return kExitFailure;
    }
    return 0;
  }
  return kExitFailure;
}

}  // namespace
}  // namespace setxpand

int main(int argc, char **argv) {
  try {
    return setxpand::Run(argc, argv);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return setxpand::kExitFailure;
  }
}
