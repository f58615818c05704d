/*
 * Copyright 2026 The ecod-cpp Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "ecod/eval.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ecod/error.h"
#include "ecod/parallel.h"
#include "ecod/random.h"
#include "text_util.h"

namespace ecod {
namespace {

void CheckLengths(std::span<const double> scores,
                  std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw DataError("got " + std::to_string(scores.size()) + " scores and " +
                    std::to_string(labels.size()) + " labels");
  }
}

std::size_t CountPositives(std::span<const std::uint8_t> labels) {
  return static_cast<std::size_t>(
      std::count_if(labels.begin(), labels.end(),
                    [](std::uint8_t l) { return l != 0; }));
}

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string RankText(double rank) {
  if (rank == std::floor(rank)) {
    return std::to_string(static_cast<long long>(rank));
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", rank);
  return buf;
}

}  // namespace

double RocAuc(std::span<const double> scores,
              std::span<const std::uint8_t> labels) {
  CheckLengths(scores, labels);
  const std::size_t n = scores.size();
  const std::size_t positives = CountPositives(labels);
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw DataError("ROC-AUC needs both outlier and inlier labels");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });
  // Sum of (1-based) mid-ranks of the positives.
  double rank_sum = 0.0;
  std::size_t k = 0;
  while (k < n) {
    std::size_t end = k + 1;
    while (end < n && scores[order[end]] == scores[order[k]]) ++end;
    const double mid_rank = (static_cast<double>(k + 1 + end)) / 2.0;
    for (std::size_t t = k; t < end; ++t) {
      if (labels[order[t]]) rank_sum += mid_rank;
    }
    k = end;
  }
  const double p = static_cast<double>(positives);
  const double q = static_cast<double>(negatives);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

double AveragePrecision(std::span<const double> scores,
                        std::span<const std::uint8_t> labels) {
  CheckLengths(scores, labels);
  const std::size_t positives = CountPositives(labels);
  if (positives == 0) {
    throw DataError("average precision needs at least one outlier label");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  double precision_sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (!labels[order[k]]) continue;
    ++hits;
    precision_sum += static_cast<double>(hits) / static_cast<double>(k + 1);
  }
  return precision_sum / static_cast<double>(positives);
}

std::uint64_t AttemptSeed(std::uint64_t seed, std::size_t trial_index,
                          std::size_t attempt) {
  const std::uint64_t base = TrialSeed(seed, trial_index);
  if (attempt == 0) return base;
  return MixSeed(base ^ MixSeed(0xA5A5A5A5ULL + attempt));
}

std::vector<EvalResult> RunTrials(const LabeledDataset& ds,
                                  const SplitSpec& spec,
                                  std::span<const Variant> variants,
                                  const TrialOptions& options) {
  spec.Validate();
  if (variants.empty()) throw DataError("no variants requested");
  const std::size_t outliers = ds.outlier_count();
  if (outliers == 0 || outliers == ds.data.n()) {
    throw DataError(options.dataset_name +
                    ": evaluation needs both outlier and inlier labels");
  }

  const std::size_t trials = spec.trial_count;
  // metrics[t][v]
  std::vector<std::vector<TrialMetrics>> metrics(
      trials, std::vector<TrialMetrics>(variants.size()));

  auto run_trial = [&](std::size_t t) {
    for (std::size_t attempt = 0; attempt <= options.max_retries; ++attempt) {
      Split split = SplitWithSeed(ds, spec.train_fraction,
                                  AttemptSeed(spec.seed, t, attempt));
      const std::size_t test_out = split.test.outlier_count();
      if (test_out == 0 || test_out == split.test.data.n()) continue;
      const EcdfModel model = Fit(split.train);
      const ScoreReport report =
          Score(model, split.test.data, Variant::kEcod);
      for (std::size_t v = 0; v < variants.size(); ++v) {
        const std::vector<double> s = VariantScores(report, variants[v]);
        metrics[t][v] = {RocAuc(s, split.test.labels),
                         AveragePrecision(s, split.test.labels)};
      }
      return;
    }
    throw DataError(options.dataset_name + ": trial " + std::to_string(t) +
                    " found no test split with both classes after " +
                    std::to_string(options.max_retries) + " retries");
  };

  ParallelFor(
      WorkerPartition(trials, std::max<std::size_t>(options.workers, 1)),
      [&](IndexRange r) {
        for (std::size_t t = r.begin; t < r.end; ++t) run_trial(t);
      });

  std::vector<EvalResult> results;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    EvalResult r;
    r.dataset_name = options.dataset_name;
    r.variant = variants[v];
    double roc_sum = 0.0;
    double ap_sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      r.per_trial.push_back(metrics[t][v]);
      roc_sum += metrics[t][v].roc;
      ap_sum += metrics[t][v].ap;
    }
    r.mean_roc = roc_sum / static_cast<double>(trials);
    r.mean_ap = ap_sum / static_cast<double>(trials);
    results.push_back(std::move(r));
  }
  return results;
}

RankTable MakeRankTable(std::vector<std::string> datasets,
                        std::vector<std::string> methods,
                        const std::vector<std::vector<double>>& metrics) {
  if (metrics.size() != datasets.size()) {
    throw DataError("rank table: " + std::to_string(metrics.size()) +
                    " metric rows for " + std::to_string(datasets.size()) +
                    " datasets");
  }
  if (methods.empty()) throw DataError("rank table: no methods");
  RankTable table;
  table.average_rank.assign(methods.size(), 0.0);
  for (std::size_t k = 0; k < metrics.size(); ++k) {
    const auto& row = metrics[k];
    if (row.size() != methods.size()) {
      throw DataError("rank table: dataset '" + datasets[k] + "' has " +
                      std::to_string(row.size()) + " entries, expected " +
                      std::to_string(methods.size()));
    }
    std::vector<double> ranks(row.size());
    for (std::size_t m = 0; m < row.size(); ++m) {
      std::size_t greater = 0;
      std::size_t equal = 0;
      for (double other : row) {
        if (other > row[m]) ++greater;
        if (other == row[m]) ++equal;
      }
      ranks[m] = 1.0 + static_cast<double>(greater) +
                 static_cast<double>(equal - 1) / 2.0;
      table.average_rank[m] += ranks[m];
    }
    table.ranks.push_back(std::move(ranks));
  }
  if (!metrics.empty()) {
    for (double& r : table.average_rank) {
      r /= static_cast<double>(metrics.size());
    }
  }
  table.datasets = std::move(datasets);
  table.methods = std::move(methods);
  return table;
}

void WriteEvalCsv(const std::vector<EvalResult>& results,
                  const EvalReportHeader& header,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "# seed=" << header.seed << " trials=" << header.trial_count
      << " train_fraction=" << internal::FormatDouble(header.train_fraction)
      << '\n';
  out << "dataset,variant,trial,roc,ap\n";
  for (const EvalResult& r : results) {
    for (std::size_t t = 0; t < r.per_trial.size(); ++t) {
      out << r.dataset_name << ',' << VariantName(r.variant) << ',' << t << ','
          << internal::FormatDouble(r.per_trial[t].roc) << ','
          << internal::FormatDouble(r.per_trial[t].ap) << '\n';
    }
  }
  for (const EvalResult& r : results) {
    out << r.dataset_name << ',' << VariantName(r.variant) << ",mean,"
        << internal::FormatDouble(r.mean_roc) << ','
        << internal::FormatDouble(r.mean_ap) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string EvalMarkdown(const std::vector<EvalResult>& results,
                         const EvalReportHeader& header) {
  std::vector<std::string> datasets;
  std::vector<Variant> variants;
  for (const EvalResult& r : results) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset_name) ==
        datasets.end()) {
      datasets.push_back(r.dataset_name);
    }
    if (std::find(variants.begin(), variants.end(), r.variant) ==
        variants.end()) {
      variants.push_back(r.variant);
    }
  }
  std::vector<std::string> methods;
  for (Variant v : variants) methods.emplace_back(VariantName(v));

  auto lookup = [&](const std::string& ds, Variant v) -> const EvalResult& {
    for (const EvalResult& r : results) {
      if (r.dataset_name == ds && r.variant == v) return r;
    }
    throw DataError("missing result for dataset '" + ds + "', variant '" +
                    std::string(VariantName(v)) + "'");
  };

  std::ostringstream md;
  md << "Protocol: seed " << header.seed << ", " << header.trial_count
     << " trials, train fraction "
     << internal::FormatDouble(header.train_fraction) << "\n";

  for (const bool roc : {true, false}) {
    std::vector<std::vector<double>> values;
    for (const auto& ds : datasets) {
      std::vector<double> row;
      for (Variant v : variants) {
        const EvalResult& r = lookup(ds, v);
        row.push_back(roc ? r.mean_roc : r.mean_ap);
      }
      values.push_back(std::move(row));
    }
    const RankTable table = MakeRankTable(datasets, methods, values);
    std::vector<double> avg(variants.size(), 0.0);
    for (const auto& row : values) {
      for (std::size_t m = 0; m < row.size(); ++m) avg[m] += row[m];
    }
    for (double& a : avg) a /= static_cast<double>(values.size());
    const RankTable avg_rank = MakeRankTable({"AVG"}, methods, {avg});

    md << "\n### " << (roc ? "ROC" : "AP") << " (mean of "
       << header.trial_count << " trials, rank in parentheses)\n\n";
    md << "| Data |";
    for (const auto& m : methods) md << ' ' << m << " |";
    md << "\n|---|";
    for (std::size_t m = 0; m < methods.size(); ++m) md << "---|";
    md << '\n';
    for (std::size_t k = 0; k < datasets.size(); ++k) {
      md << "| " << datasets[k] << " |";
      for (std::size_t m = 0; m < methods.size(); ++m) {
        md << ' ' << Fixed3(values[k][m]) << " (" << RankText(table.ranks[k][m])
           << ") |";
      }
      md << '\n';
    }
    md << "| AVG |";
    for (std::size_t m = 0; m < methods.size(); ++m) {
      md << ' ' << Fixed3(avg[m]) << " (" << RankText(avg_rank.ranks[0][m])
         << ") |";
    }
    md << "\n| Avg. rank |";
    for (std::size_t m = 0; m < methods.size(); ++m) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.2f", table.average_rank[m]);
      md << ' ' << buf << " |";
    }
    md << '\n';
  }
  return md.str();
}

}  // namespace ecod
