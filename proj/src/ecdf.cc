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

#include "ecod/ecdf.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "ecod/error.h"
#include "ecod/parallel.h"

namespace ecod {

double Skewness(std::span<const double> column) {
  const std::size_t n = column.size();
  if (n < 2) return 0.0;
  // All-equal columns: the rounded mean can differ from the common value by
  // an ulp, which would turn 0/0 into noise.
  const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
  if (*lo == *hi) return 0.0;

  const double dn = static_cast<double>(n);
  double sum = 0.0;
  for (double x : column) sum += x;
  const double mean = sum / dn;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : column) {
    const double dev = x - mean;
    const double sq = dev * dev;
    m2 += sq;
    m3 += sq * dev;
  }
  const double variance = m2 / (dn - 1.0);
  if (!(variance > 0.0)) return 0.0;
  return (m3 / dn) / std::pow(variance, 1.5);
}

DimensionModel DimensionModel::Fit(std::span<const double> column) {
  if (column.empty()) throw DataError("cannot fit an empty column");
  std::vector<double> sorted(column.begin(), column.end());
  std::sort(sorted.begin(), sorted.end());
  return DimensionModel(std::move(sorted), Skewness(column));
}

DimensionModel::DimensionModel(std::vector<double> sorted_values,
                               double skewness)
    : sorted_(std::move(sorted_values)), skewness_(skewness) {
  if (sorted_.empty()) throw DataError("dimension model has no values");
  if (!std::is_sorted(sorted_.begin(), sorted_.end())) {
    throw DataError("dimension values are not sorted ascending");
  }
  if (!std::isfinite(sorted_.front()) || !std::isfinite(sorted_.back())) {
    throw DataError("dimension values must be finite");
  }
  if (!std::isfinite(skewness_)) throw DataError("skewness must be finite");
}

std::size_t DimensionModel::CountAtOrBelow(double z) const {
  return static_cast<std::size_t>(
      std::upper_bound(sorted_.begin(), sorted_.end(), z) - sorted_.begin());
}

std::size_t DimensionModel::CountAtOrAbove(double z) const {
  return static_cast<std::size_t>(
      sorted_.end() - std::lower_bound(sorted_.begin(), sorted_.end(), z));
}

double EvalLeft(const DimensionModel& dm, double z) {
  return static_cast<double>(dm.CountAtOrBelow(z)) /
         static_cast<double>(dm.n());
}

double EvalRight(const DimensionModel& dm, double z) {
  return static_cast<double>(dm.CountAtOrAbove(z)) /
         static_cast<double>(dm.n());
}

EcdfModel::EcdfModel(std::vector<DimensionModel> dims, double prob_floor)
    : dims_(std::move(dims)), n_train_(0), prob_floor_(prob_floor) {
  if (dims_.empty()) throw DataError("model has no dimensions");
  n_train_ = dims_.front().n();
  for (std::size_t j = 0; j < dims_.size(); ++j) {
    if (dims_[j].n() != n_train_) {
      throw DataError("dimension " + std::to_string(j) + " has " +
                      std::to_string(dims_[j].n()) + " values, expected " +
                      std::to_string(n_train_));
    }
  }
  if (!(prob_floor_ > 0.0 &&
        prob_floor_ <= 1.0 / static_cast<double>(n_train_))) {
    throw DataError("probability floor must lie in (0, 1/n_train]");
  }
}

EcdfModel Fit(const Dataset& train, std::size_t workers) {
  const std::size_t d = train.d();
  // DimensionModel has no default constructor; fill slots then move out.
  std::vector<std::optional<DimensionModel>> slots(d);
  ParallelFor(WorkerPartition(d, workers), [&](IndexRange r) {
    for (std::size_t j = r.begin; j < r.end; ++j) {
      slots[j].emplace(DimensionModel::Fit(train.column(j)));
    }
  });
  std::vector<DimensionModel> dims;
  dims.reserve(d);
  for (auto& s : slots) dims.push_back(std::move(*s));
  return EcdfModel(std::move(dims),
                   1.0 / (static_cast<double>(train.n()) + 1.0));
}

}  // namespace ecod
