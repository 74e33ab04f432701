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

#include "setxpand/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "setxpand/contexts.h"

namespace setxpand {
namespace {

std::string Fixed(double v, int digits = 3) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v);
  return buffer;
}

const EvalReport *FindReport(std::span<const EvalReport> reports,
                             const std::string &name) {
  for (const EvalReport &r : reports) {
    if (r.method == name) return &r;
  }
  return nullptr;
}

}  // namespace

double AveragePrecisionAtN(std::span<const int> ranked, std::span<const int> gold,
                           int n) {
  if (gold.empty()) throw std::invalid_argument("empty gold set");
  if (n < 1) throw std::invalid_argument("cutoff must be >= 1");
  const std::unordered_set<int> relevant(gold.begin(), gold.end());
  std::unordered_set<int> seen;
  int rank = 0;
  int hits = 0;
  double sum = 0.0;
  for (int id : ranked) {
    if (rank == n) break;
    if (!seen.insert(id).second) continue;
    ++rank;
    if (relevant.count(id) > 0) {
      ++hits;
      sum += static_cast<double>(hits) / rank;
    }
  }
  return sum / std::min<double>(static_cast<double>(relevant.size()), n);
}

int EvalReport::CutoffIndex(int n) const {
  auto it = std::find(cutoffs.begin(), cutoffs.end(), n);
  if (it == cutoffs.end()) {
    throw std::out_of_range("cutoff " + std::to_string(n) + " not evaluated");
  }
  return static_cast<int>(it - cutoffs.begin());
}

std::vector<std::string> EvalReport::lists() const {
  std::vector<std::string> names;
  for (const auto &[name, unused] : list_means) names.push_back(name);
  return names;
}

double EvalReport::ListMap(const std::string &list, int n, int seed_size) const {
  const int i = CutoffIndex(n);
  auto l = list_means.find(list);
  if (l == list_means.end()) throw std::out_of_range("no list " + list);
  auto s = l->second.find(seed_size);
  if (s == l->second.end()) {
    throw std::out_of_range("no seed size " + std::to_string(seed_size));
  }
  return s->second[i];
}

double EvalReport::Map(int n, int seed_size) const {
  double sum = 0.0;
  int count = 0;
  for (const auto &[name, by_size] : list_means) {
    if (!by_size.count(seed_size)) continue;
    sum += ListMap(name, n, seed_size);
    ++count;
  }
  return count == 0 ? 0.0 : sum / count;
}

double EvalReport::ListStdDev(int n, int seed_size) const {
  const double mean = Map(n, seed_size);
  double sq = 0.0;
  int count = 0;
  for (const auto &[name, by_size] : list_means) {
    if (!by_size.count(seed_size)) continue;
    const double d = ListMap(name, n, seed_size) - mean;
    sq += d * d;
    ++count;
  }
  return count == 0 ? 0.0 : std::sqrt(sq / count);
}

EvalReport AggregateQueries(const std::string &method,
                            std::vector<QueryResult> queries,
                            std::span<const int> cutoffs) {
  EvalReport report;
  report.method = method;
  report.cutoffs.assign(cutoffs.begin(), cutoffs.end());
  report.queries = std::move(queries);
  std::map<std::string, std::map<int, std::pair<std::vector<double>, int>>> sums;
  for (const QueryResult &q : report.queries) {
    for (int size : {q.seed_size, kAllSizes}) {
      auto &[total, count] = sums[q.list][size];
      total.resize(cutoffs.size(), 0.0);
      for (size_t i = 0; i < cutoffs.size(); ++i) total[i] += q.ap[i];
      ++count;
    }
  }
  for (auto &[list, by_size] : sums) {
    for (auto &[size, entry] : by_size) {
      std::vector<double> mean = entry.first;
      for (double &m : mean) m /= entry.second;
      report.list_means[list][size] = std::move(mean);
    }
  }
  return report;
}

EvalReport EvaluateMethod(const std::string &method, const Expander &expander,
                          const DatasetBundle &bundle,
                          std::span<const int> cutoffs, Split split) {
  std::vector<QueryResult> queries;
  for (const ListSamples *ls : bundle.InSplit(split)) {
    for (const SeedSample &sample : ls->samples) {
      std::vector<int> seed = sample.seed;
      std::sort(seed.begin(), seed.end());
      std::vector<int> ranked;
      for (int id : expander(sample)) {
        if (!std::binary_search(seed.begin(), seed.end(), id)) ranked.push_back(id);
      }
      QueryResult q;
      q.list = ls->list.name;
      q.sample_id = sample.id;
      q.seed_size = sample.size;
      for (int n : cutoffs) {
        q.ap.push_back(AveragePrecisionAtN(ranked, sample.expanded_gold, n));
      }
      queries.push_back(std::move(q));
    }
  }
  return AggregateQueries(method, std::move(queries), cutoffs);
}

double OracleMap(std::span<const EvalReport> reports, int n, int seed_size) {
  if (reports.empty()) return 0.0;
  double sum = 0.0;
  int count = 0;
  for (const auto &[list, by_size] : reports.front().list_means) {
    if (!by_size.count(seed_size)) continue;
    double best = 0.0;
    for (const EvalReport &r : reports) best = std::max(best, r.ListMap(list, n, seed_size));
    sum += best;
    ++count;
  }
  return count == 0 ? 0.0 : sum / count;
}

std::map<std::string, double> BestMethodShare(std::span<const EvalReport> reports,
                                              int n, int seed_size) {
  std::map<std::string, double> share;
  for (const EvalReport &r : reports) share[r.method] = 0.0;
  if (reports.empty()) return share;
  int count = 0;
  for (const auto &[list, by_size] : reports.front().list_means) {
    if (!by_size.count(seed_size)) continue;
    double best = 0.0;
    for (const EvalReport &r : reports) best = std::max(best, r.ListMap(list, n, seed_size));
    for (const EvalReport &r : reports) {
      if (r.ListMap(list, n, seed_size) == best) share[r.method] += 1.0;
    }
    ++count;
  }
  if (count > 0) {
    for (auto &[method, value] : share) value /= count;
  }
  return share;
}

void WriteReportTsv(std::ostream &out, std::span<const EvalReport> reports) {
  out << "method\tlist\tseed_size\tn\tvalue\n";
  for (const EvalReport &r : reports) {
    std::set<int> sizes;
    for (const auto &[list, by_size] : r.list_means) {
      for (const auto &[size, unused] : by_size) sizes.insert(size);
    }
    for (int size : sizes) {
      for (int n : r.cutoffs) {
        out << r.method << "\t*\t" << size << '\t' << n << '\t'
            << Fixed(r.Map(n, size), 6) << '\n';
      }
    }
    for (const auto &[list, by_size] : r.list_means) {
      for (const auto &[size, values] : by_size) {
        for (size_t i = 0; i < r.cutoffs.size(); ++i) {
          out << r.method << '\t' << list << '\t' << size << '\t' << r.cutoffs[i]
              << '\t' << Fixed(values[i], 6) << '\n';
        }
      }
    }
  }
}

void WriteContextTable(std::ostream &out, std::span<const EvalReport> reports,
                       int seed_size) {
  std::vector<EvalReport> singles;
  for (const EvalReport &r : reports) {
    for (ContextType t : kAllContextTypes) {
      const std::string base(ContextTypeName(t));
      if (r.method == base + "-cent" || r.method == base + "-csum") singles.push_back(r);
    }
  }
  const std::map<std::string, double> share = BestMethodShare(singles, 10, seed_size);
  char line[160];
  std::snprintf(line, sizeof(line), "%-8s %-8s %8s %8s %8s\n", "Context", "Scoring",
                "MAP@10", "Std", "Best%");
  out << line;
  for (ContextType t : kAllContextTypes) {
    const std::string base(ContextTypeName(t));
    const EvalReport *cent = FindReport(reports, base + "-cent");
    const EvalReport *csum = FindReport(reports, base + "-csum");
    const EvalReport *best = cent;
    if (best == nullptr || (csum != nullptr && csum->Map(10, seed_size) >
                                                   best->Map(10, seed_size))) {
      best = csum;
    }
    if (best == nullptr) continue;
    double best_share = 0.0;
    for (const EvalReport *r : {cent, csum}) {
      if (r != nullptr) best_share = std::max(best_share, share.at(r->method));
    }
    std::snprintf(line, sizeof(line), "%-8s %-8s %8s %8s %7.0f%%\n", base.c_str(),
                  best == cent ? "cent" : "csum",
                  Fixed(best->Map(10, seed_size)).c_str(),
                  Fixed(best->ListStdDev(10, seed_size)).c_str(), 100.0 * best_share);
    out << line;
  }
}

void WriteCombinationTable(std::ostream &out,
                           std::span<const EvalReport> single_reports,
                           std::span<const EvalReport> combined_reports,
                           int seed_size) {
  char line[160];
  std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s\n", "Method", "MAP@10",
                "MAP@20", "MAP@50");
  out << line;
  auto row = [&](const std::string &name, double a, double b, double c) {
    std::snprintf(line, sizeof(line), "%-10s %8s %8s %8s\n", name.c_str(),
                  Fixed(a).c_str(), Fixed(b).c_str(), Fixed(c).c_str());
    out << line;
  };
  for (const EvalReport &r : combined_reports) {
    row(r.method, r.Map(10, seed_size), r.Map(20, seed_size), r.Map(50, seed_size));
  }
  if (!single_reports.empty()) {
    row("oracle", OracleMap(single_reports, 10, seed_size),
        OracleMap(single_reports, 20, seed_size),
        OracleMap(single_reports, 50, seed_size));
  }
}

}  // namespace setxpand
