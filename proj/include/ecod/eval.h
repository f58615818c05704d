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

// Evaluation harness: ROC-AUC, average precision, repeated train/test
// trials and rank tables.

#ifndef ECOD_EVAL_H_
#define ECOD_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ecod/dataset.h"
#include "ecod/scoring.h"

namespace ecod {

// Mann-Whitney form of the ROC area: probability that a random outlier
// outscores a random inlier, ties counted as one half. Uses mid-ranks.
// Throws DataError on length mismatch or when a class is missing.
double RocAuc(std::span<const double> scores,
              std::span<const std::uint8_t> labels);

// Sum over ranked positions k of (R_k - R_{k-1}) * P_k, ranking by score
// descending with ties broken by ascending original index. Throws DataError
// when there are no positives.
double AveragePrecision(std::span<const double> scores,
                        std::span<const std::uint8_t> labels);

struct TrialMetrics {
  double roc = 0.0;
  double ap = 0.0;
  friend bool operator==(const TrialMetrics&, const TrialMetrics&) = default;
};

struct EvalResult {
  std::string dataset_name;
  Variant variant = Variant::kEcod;
  std::vector<TrialMetrics> per_trial;
  double mean_roc = 0.0;
  double mean_ap = 0.0;
  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

struct TrialOptions {
  std::string dataset_name = "dataset";
  // Trials run on up to this many threads; results do not depend on it.
  std::size_t workers = 1;
  // Re-draws allowed per trial when the test part lacks a class.
  std::size_t max_retries = 100;
};

// Seed used for attempt `attempt` of a trial. Attempt 0 is the trial seed
// itself, so SplitDataset(ds, spec, t) reproduces the first draw.
std::uint64_t AttemptSeed(std::uint64_t seed, std::size_t trial_index,
                          std::size_t attempt);

// For every trial: split, fit on the unlabeled train part, score the test
// part, and compute ROC/AP for each requested variant. One EvalResult per
// variant, in the order requested. Throws DataError if the dataset lacks a
// class or a trial cannot find a two-class test part within the retry cap.
std::vector<EvalResult> RunTrials(const LabeledDataset& ds,
                                  const SplitSpec& spec,
                                  std::span<const Variant> variants,
                                  const TrialOptions& options = {});

struct RankTable {
  std::vector<std::string> datasets;
  std::vector<std::string> methods;
  // ranks[dataset][method]; 1 is best, ties share the mean rank.
  std::vector<std::vector<double>> ranks;
  std::vector<double> average_rank;  // per method
};

// Ranks methods per dataset by descending metric. `metrics[k][m]` is the
// score of method m on dataset k. Throws DataError on ragged input.
RankTable MakeRankTable(std::vector<std::string> datasets,
                        std::vector<std::string> methods,
                        const std::vector<std::vector<double>>& metrics);

struct EvalReportHeader {
  std::uint64_t seed = 42;
  std::size_t trial_count = 10;
  double train_fraction = 0.6;
};

// Long-format CSV: a comment line with the protocol, then
// "dataset,variant,trial,roc,ap" rows, one per trial plus one "mean" row per
// (dataset, variant).
void WriteEvalCsv(const std::vector<EvalResult>& results,
                  const EvalReportHeader& header,
                  const std::filesystem::path& path);

// Markdown with one ROC table and one AP table; rows are datasets, columns
// variants, cells "0.994 (1)" with the rank in parentheses, and an AVG row.
std::string EvalMarkdown(const std::vector<EvalResult>& results,
                         const EvalReportHeader& header);

}  // namespace ecod

#endif  // ECOD_EVAL_H_
