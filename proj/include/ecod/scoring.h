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

// Outlier scores from tail probabilities.
//
// Every point gets three aggregates, each a sum over dimensions of negative
// natural-log tail probabilities:
//   left_only  = -sum_j log F_left_j(x_j)
//   right_only = -sum_j log F_right_j(x_j)
//   auto       = -sum_j log(F_left_j(x_j)  if skew_j < 0,
//                           F_right_j(x_j) otherwise)
// and the ECOD score is the largest of the three. Tail probabilities of 0
// (points outside the training range) are raised to the model's prob_floor.

#ifndef ECOD_SCORING_H_
#define ECOD_SCORING_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ecod/dataset.h"
#include "ecod/ecdf.h"

namespace ecod {

enum class Variant { kLeftOnly, kRightOnly, kBothAveraged, kAuto, kEcod };

// "left", "right", "both", "auto", "ecod".
std::string_view VariantName(Variant v);
// Accepts the names above plus the tags "ecod-l", "ecod-r", "ecod-b".
std::optional<Variant> ParseVariant(std::string_view name);

// Which aggregate supplied the ECOD maximum for a point.
enum class Aggregate : unsigned char { kLeftOnly, kRightOnly, kAuto };

struct ScoreReport {
  Variant variant = Variant::kEcod;
  std::size_t n = 0;
  std::size_t d = 0;
  // Score of the requested variant, one per point.
  std::vector<double> final;
  std::vector<double> left_only;
  std::vector<double> right_only;
  std::vector<double> auto_score;
  // Column-major n x d per-dimension terms of the requested variant. For
  // kEcod these are the terms of the aggregate that attained the maximum
  // (ties prefer auto, then right, then left), so each row sums to `final`.
  std::vector<double> per_dimension;
  // For kEcod: the aggregate that won per point.
  std::vector<Aggregate> winner;

  double dim_score(std::size_t i, std::size_t j) const {
    return per_dimension[j * n + i];
  }
  std::span<const double> dim_column(std::size_t j) const {
    return {per_dimension.data() + j * n, n};
  }
};

struct ScoreOptions {
  std::size_t workers = 1;
};

// Scores `points` against a fitted model. Throws DataError when
// points.d() != model.d(). Output is bit-identical for every worker count.
ScoreReport Score(const EcdfModel& model, const Dataset& points,
                  Variant variant, const ScoreOptions& options = {});

// Fit on `train` and score the same rows.
ScoreReport FitScore(const Dataset& train, Variant variant,
                     const ScoreOptions& options = {});

// Score array a variant would produce, derived from the aggregates of any
// report: left_only, right_only, their mean, auto, or the three-way max.
std::vector<double> VariantScores(const ScoreReport& report, Variant variant);

// Empirical quantile without interpolation: the ceil(p * n)-th smallest
// value (1-based). Requires a non-empty input and 0 < p < 1.
double EmpiricalQuantile(std::span<const double> values, double p);

struct Explanation {
  std::size_t sample = 0;
  double band_percentile = 0.99;
  double final_score = 0.0;
  std::vector<double> scores;  // per dimension, length d
  std::vector<double> bands;   // per-dimension quantile over all points
  std::vector<bool> flagged;   // scores[j] >= bands[j]
};

// Per-dimension scores of one point next to the band_percentile quantile of
// each dimension's scores across the report. Throws DataError for an
// out-of-range sample or a percentile outside (0, 1).
Explanation Explain(const ScoreReport& report, std::size_t sample_index,
                    double band_percentile = 0.99);

// CSV with header "id,final,left_only,right_only,auto"; shortest round-trip
// decimal formatting.
void WriteScoreCsv(const ScoreReport& report,
                   const std::filesystem::path& path);

// JSON document for one explanation; `names` are the dimension names.
std::string ExplanationJson(const Explanation& e,
                            const std::vector<std::string>& names);

}  // namespace ecod

#endif  // ECOD_SCORING_H_
