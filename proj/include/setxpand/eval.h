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

#ifndef SETXPAND_EVAL_H_
#define SETXPAND_EVAL_H_

#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "setxpand/dataset.h"

namespace setxpand {

inline const std::vector<int> kDefaultCutoffs = {10, 20, 50};

// Sum of precision@r over relevant ranks r <= n, divided by min(|gold|, n).
// Repeated ids count at their first occurrence only. Throws
// std::invalid_argument on an empty gold set or n < 1.
double AveragePrecisionAtN(std::span<const int> ranked,
                           std::span<const int> gold, int n);

// Returns term-group ids, best first. Seeds in the output are ignored.
using Expander = std::function<std::vector<int>(const SeedSample &sample)>;

struct QueryResult {
  std::string list;
  int sample_id = 0;
  int seed_size = 0;
  std::vector<double> ap;  // one per cutoff
};

// Seed-size key for aggregates over every sample of a list.
inline constexpr int kAllSizes = 0;

struct EvalReport {
  std::string method;
  std::vector<int> cutoffs;
  std::vector<QueryResult> queries;
  // list -> seed size (or kAllSizes) -> mean AP per cutoff
  std::map<std::string, std::map<int, std::vector<double>>> list_means;

  // Mean over lists of the per-list mean AP. Equals the per-query mean when
  // every list contributes the same number of queries.
  double Map(int n, int seed_size = kAllSizes) const;
  // Population standard deviation of the per-list means.
  double ListStdDev(int n, int seed_size = kAllSizes) const;
  double ListMap(const std::string &list, int n,
                 int seed_size = kAllSizes) const;
  std::vector<std::string> lists() const;
  int CutoffIndex(int n) const;
};

// Runs every sample of every list in `split` through the expander.
EvalReport EvaluateMethod(const std::string &method, const Expander &expander,
                          const DatasetBundle &bundle,
                          std::span<const int> cutoffs = kDefaultCutoffs,
                          Split split = Split::kTest);

// Aggregates precomputed queries (e.g. for fixtures).
EvalReport AggregateQueries(const std::string &method,
                            std::vector<QueryResult> queries,
                            std::span<const int> cutoffs);

// Per list the best per-list MAP@n over the reports, then the mean over
// lists. All reports must cover the same lists.
double OracleMap(std::span<const EvalReport> reports, int n,
                 int seed_size = kAllSizes);

// Fraction of lists on which each method attains the per-list maximum
// MAP@n; ties credit every tied method.
std::map<std::string, double> BestMethodShare(std::span<const EvalReport> reports,
                                              int n, int seed_size = kAllSizes);

// Long-format TSV: method, list ("*" for all), seed_size, n, value.
void WriteReportTsv(std::ostream &out, std::span<const EvalReport> reports);

// Per context type, the better of its two scoring methods at MAP@10 with
// `seed_size` seeds: context, method, MAP@10, std. dev., best share. Reports
// are matched by the names "<type>-cent" and "<type>-csum".
void WriteContextTable(std::ostream &out, std::span<const EvalReport> reports,
                       int seed_size = 5);

// MAP@10/20/50 rows for the listed methods plus the oracle over the
// single-context reports.
void WriteCombinationTable(std::ostream &out,
                           std::span<const EvalReport> single_reports,
                           std::span<const EvalReport> combined_reports,
                           int seed_size = 5);

}  // namespace setxpand

#endif  // SETXPAND_EVAL_H_
