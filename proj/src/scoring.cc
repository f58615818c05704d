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

#include "ecod/scoring.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <new>

#include "ecod/error.h"
#include "ecod/parallel.h"
#include "json.hpp"
#include "text_util.h"

namespace ecod {
namespace {

// Rows per block in the reduction pass; keeps the running sums in cache.
constexpr std::size_t kRowBlock = 4096;

// -log(p) with p = count / n, raised to `floor` when count is 0. Written as
// 0 - log so that p == 1 yields +0 rather than -0.
inline double NegLogTail(std::size_t count, double n, double floor) {
  const double p = count == 0 ? floor : static_cast<double>(count) / n;
  return 0.0 - std::log(p);
}

std::vector<double> Allocate(std::size_t count) {
  try {
    return std::vector<double>(count);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate " + std::to_string(count) +
                        " score terms");
  }
}

}  // namespace

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kLeftOnly:
      return "left";
    case Variant::kRightOnly:
      return "right";
    case Variant::kBothAveraged:
      return "both";
    case Variant::kAuto:
      return "auto";
    case Variant::kEcod:
      return "ecod";
  }
  return "?";
}

std::optional<Variant> ParseVariant(std::string_view name) {
  const std::string s = internal::ToLower(name);
  if (s == "left" || s == "ecod-l") return Variant::kLeftOnly;
  if (s == "right" || s == "ecod-r") return Variant::kRightOnly;
  if (s == "both" || s == "ecod-b") return Variant::kBothAveraged;
  if (s == "auto") return Variant::kAuto;
  if (s == "ecod") return Variant::kEcod;
  return std::nullopt;
}

ScoreReport Score(const EcdfModel& model, const Dataset& points,
                  Variant variant, const ScoreOptions& options) {
  if (points.d() != model.d()) {
    throw DataError("dimension mismatch: model expects d=" +
                    std::to_string(model.d()) + ", input has d=" +
                    std::to_string(points.d()));
  }
  const std::size_t n = points.n();
  const std::size_t d = points.d();
  const double n_train = static_cast<double>(model.n_train());
  const double floor = model.prob_floor();
  const std::size_t workers = std::max<std::size_t>(options.workers, 1);

  // Per-dimension terms, column-major like the input.
  std::vector<double> left = Allocate(n * d);
  std::vector<double> right = Allocate(n * d);
  ParallelFor(WorkerPartition(d, workers), [&](IndexRange r) {
    for (std::size_t j = r.begin; j < r.end; ++j) {
      const DimensionModel& dm = model.dim(j);
      const auto x = points.column(j);
      double* lcol = left.data() + j * n;
      double* rcol = right.data() + j * n;
      for (std::size_t i = 0; i < n; ++i) {
        lcol[i] = NegLogTail(dm.CountAtOrBelow(x[i]), n_train, floor);
        rcol[i] = NegLogTail(dm.CountAtOrAbove(x[i]), n_train, floor);
      }
    }
  });

  ScoreReport report;
  report.variant = variant;
  report.n = n;
  report.d = d;
  report.final.assign(n, 0.0);
  report.left_only.assign(n, 0.0);
  report.right_only.assign(n, 0.0);
  report.auto_score.assign(n, 0.0);
  report.winner.assign(n, Aggregate::kAuto);

  // Sums always run over j = 0..d-1 in order, whatever the row split.
  const std::size_t blocks = (n + kRowBlock - 1) / kRowBlock;
  ParallelFor(WorkerPartition(blocks, workers), [&](IndexRange r) {
    const std::size_t begin = r.begin * kRowBlock;
    const std::size_t end = std::min(n, r.end * kRowBlock);
    for (std::size_t j = 0; j < d; ++j) {
      const bool use_left = model.dim(j).use_left_tail();
      const double* lcol = left.data() + j * n;
      const double* rcol = right.data() + j * n;
      for (std::size_t i = begin; i < end; ++i) {
        report.left_only[i] += lcol[i];
        report.right_only[i] += rcol[i];
        report.auto_score[i] += use_left ? lcol[i] : rcol[i];
      }
    }
    for (std::size_t i = begin; i < end; ++i) {
      const double lo = report.left_only[i];
      const double ro = report.right_only[i];
      const double au = report.auto_score[i];
      const double best = std::max({lo, ro, au});
      report.winner[i] = best == au   ? Aggregate::kAuto
                         : best == ro ? Aggregate::kRightOnly
                                      : Aggregate::kLeftOnly;
      switch (variant) {
        case Variant::kLeftOnly:
          report.final[i] = lo;
          break;
        case Variant::kRightOnly:
          report.final[i] = ro;
          break;
        case Variant::kBothAveraged:
          report.final[i] = (lo + ro) / 2.0;
          break;
        case Variant::kAuto:
          report.final[i] = au;
          break;
        case Variant::kEcod:
          report.final[i] = best;
          break;
      }
    }
    // Overwrite the left buffer with the chosen per-dimension terms.
    for (std::size_t j = 0; j < d; ++j) {
      const bool use_left = model.dim(j).use_left_tail();
      double* lcol = left.data() + j * n;
      const double* rcol = right.data() + j * n;
      for (std::size_t i = begin; i < end; ++i) {
        Aggregate pick = Aggregate::kAuto;
        switch (variant) {
          case Variant::kLeftOnly:
            pick = Aggregate::kLeftOnly;
            break;
          case Variant::kRightOnly:
            pick = Aggregate::kRightOnly;
            break;
          case Variant::kBothAveraged:
            lcol[i] = (lcol[i] + rcol[i]) / 2.0;
            continue;
          case Variant::kAuto:
            break;
          case Variant::kEcod:
            pick = report.winner[i];
            break;
        }
        if (pick == Aggregate::kAuto) pick = use_left ? Aggregate::kLeftOnly
                                                      : Aggregate::kRightOnly;
        if (pick == Aggregate::kRightOnly) lcol[i] = rcol[i];
      }
    }
  });
  report.per_dimension = std::move(left);
  return report;
}

ScoreReport FitScore(const Dataset& train, Variant variant,
                     const ScoreOptions& options) {
  return Score(Fit(train, options.workers), train, variant, options);
}

std::vector<double> VariantScores(const ScoreReport& report, Variant variant) {
  std::vector<double> out(report.n);
  for (std::size_t i = 0; i < report.n; ++i) {
    const double lo = report.left_only[i];
    const double ro = report.right_only[i];
    const double au = report.auto_score[i];
    switch (variant) {
      case Variant::kLeftOnly:
        out[i] = lo;
        break;
      case Variant::kRightOnly:
        out[i] = ro;
        break;
      case Variant::kBothAveraged:
        out[i] = (lo + ro) / 2.0;
        break;
      case Variant::kAuto:
        out[i] = au;
        break;
      case Variant::kEcod:
        out[i] = std::max({lo, ro, au});
        break;
    }
  }
  return out;
}

double EmpiricalQuantile(std::span<const double> values, double p) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  if (!(p > 0.0 && p < 1.0)) {
    throw DataError("percentile must lie in (0, 1), got " +
                    internal::FormatDouble(p));
  }
  const std::size_t n = values.size();
  // The 1e-9 guard keeps p * n from rounding up past an exact integer.
  auto rank = static_cast<std::size_t>(
      std::ceil(p * static_cast<double>(n) - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::vector<double> copy(values.begin(), values.end());
  auto kth = copy.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(copy.begin(), kth, copy.end());
  return *kth;
}

Explanation Explain(const ScoreReport& report, std::size_t sample_index,
                    double band_percentile) {
  if (sample_index >= report.n) {
    throw DataError("sample index " + std::to_string(sample_index) +
                    " out of range (n=" + std::to_string(report.n) + ")");
  }
  if (!(band_percentile > 0.0 && band_percentile < 1.0)) {
    throw DataError("band percentile must lie in (0, 1), got " +
                    internal::FormatDouble(band_percentile));
  }
  Explanation e;
  e.sample = sample_index;
  e.band_percentile = band_percentile;
  e.final_score = report.final[sample_index];
  e.scores.resize(report.d);
  e.bands.resize(report.d);
  e.flagged.resize(report.d);
  for (std::size_t j = 0; j < report.d; ++j) {
    e.scores[j] = report.dim_score(sample_index, j);
    e.bands[j] = EmpiricalQuantile(report.dim_column(j), band_percentile);
    e.flagged[j] = e.scores[j] >= e.bands[j];
  }
  return e;
}

void WriteScoreCsv(const ScoreReport& report,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "id,final,left_only,right_only,auto\n";
  for (std::size_t i = 0; i < report.n; ++i) {
    out << i << ',' << internal::FormatDouble(report.final[i]) << ','
        << internal::FormatDouble(report.left_only[i]) << ','
        << internal::FormatDouble(report.right_only[i]) << ','
        << internal::FormatDouble(report.auto_score[i]) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string ExplanationJson(const Explanation& e,
                            const std::vector<std::string>& names) {
  nlohmann::json doc;
  doc["sample"] = e.sample;
  doc["band_percentile"] = e.band_percentile;
  doc["final"] = e.final_score;
  nlohmann::json dims = nlohmann::json::array();
  for (std::size_t j = 0; j < e.scores.size(); ++j) {
    dims.push_back({{"dim", j},
                    {"name", j < names.size() ? names[j]
                                              : "x" + std::to_string(j)},
                    {"score", e.scores[j]},
                    {"band", e.bands[j]},
                    {"flagged", static_cast<bool>(e.flagged[j])}});
  }
  doc["dimensions"] = std::move(dims);
  return doc.dump(2);
}

}  // namespace ecod
