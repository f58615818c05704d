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

// Per-dimension empirical CDFs and skewness: the fitted state of the
// detector.
//
// For a training column x_1..x_n the left tail is
//   F_left(z)  = #{i : x_i <= z} / n
// and the right tail uses the non-strict inequality as well,
//   F_right(z) = #{i : x_i >= z} / n,
// so F_left(z) + F_right(z) = 1 + #{i : x_i == z} / n.

#ifndef ECOD_ECDF_H_
#define ECOD_ECDF_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ecod/dataset.h"

namespace ecod {

// Sample skewness
//   (1/n) sum (x - mean)^3 / [(1/(n-1)) sum (x - mean)^2]^(3/2)
// computed with two passes in input order. Columns with fewer than two
// values or with all values equal have skewness 0.
double Skewness(std::span<const double> column);

class DimensionModel {
 public:
  // Sorts a copy of `column` and computes its skewness. Throws DataError
  // when the column is empty.
  static DimensionModel Fit(std::span<const double> column);

  // Rebuilds a model from stored state. Throws DataError if the values are
  // empty or not sorted ascending, or if `skewness` is not finite.
  DimensionModel(std::vector<double> sorted_values, double skewness);

  std::span<const double> sorted_values() const { return sorted_; }
  std::size_t n() const { return sorted_.size(); }
  double skewness() const { return skewness_; }
  // Negative skew: the left tail is the long one. Zero routes right.
  bool use_left_tail() const { return skewness_ < 0.0; }

  // #{i : x_i <= z}
  std::size_t CountAtOrBelow(double z) const;
  // #{i : x_i >= z}
  std::size_t CountAtOrAbove(double z) const;

  friend bool operator==(const DimensionModel&,
                         const DimensionModel&) = default;

 private:
  std::vector<double> sorted_;
  double skewness_;
};

// Left-tail ECDF, a value in {0, 1/n, ..., 1}.
double EvalLeft(const DimensionModel& dm, double z);
// Right-tail ECDF, a value in {0, 1/n, ..., 1}.
double EvalRight(const DimensionModel& dm, double z);

class EcdfModel {
 public:
  // Checks that every dimension has n_train values and that
  // 0 < prob_floor <= 1 / n_train.
  EcdfModel(std::vector<DimensionModel> dims, double prob_floor);

  std::size_t d() const { return dims_.size(); }
  std::size_t n_train() const { return n_train_; }
  double prob_floor() const { return prob_floor_; }
  const DimensionModel& dim(std::size_t j) const { return dims_[j]; }
  const std::vector<DimensionModel>& dims() const { return dims_; }

  friend bool operator==(const EcdfModel&, const EcdfModel&) = default;

 private:
  std::vector<DimensionModel> dims_;
  std::size_t n_train_;
  double prob_floor_;
};

// Fits every column; prob_floor is 1 / (n + 1). Dimensions are split over
// `workers` threads and the result does not depend on the worker count.
EcdfModel Fit(const Dataset& train, std::size_t workers = 1);

// Model files. The format follows the extension: ".json" writes a JSON
// document, anything else the little-endian binary layout
//   magic "ECODMDL\0", u32 version, u64 n_train, u64 d, f64 prob_floor,
//   then per dimension: f64 skewness, n_train x f64 sorted values.
inline constexpr std::uint32_t kModelFormatVersion = 1;

void SaveModel(const EcdfModel& model, const std::filesystem::path& path);
// Throws IoError if the file cannot be read and DataError on a bad magic,
// version mismatch, truncation or invariant violation.
EcdfModel LoadModel(const std::filesystem::path& path);

}  // namespace ecod

#endif  // ECOD_ECDF_H_
