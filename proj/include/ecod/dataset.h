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

// Numeric datasets consumed by the detector and the evaluation harness:
// CSV/ARFF loading, synthetic generators and seeded train/test splits.

#ifndef ECOD_DATASET_H_
#define ECOD_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ecod {

// Column-major n x d matrix of finite doubles. Immutable after construction;
// the constructor validates shape and finiteness.
class Dataset {
 public:
  // `values` is column-major: element (i, j) lives at values[j * n + i].
  // Throws DataError if n or d is zero, the size does not match, a value is
  // not finite, or `column_names` is non-empty with size != d.
  Dataset(std::size_t n, std::size_t d, std::vector<double> values,
          std::vector<std::string> column_names = {});

  // Builds from row-major storage (element (i, j) at values[i * d + j]).
  static Dataset FromRowMajor(std::size_t n, std::size_t d,
                              std::span<const double> row_major,
                              std::vector<std::string> column_names = {});

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }

  double at(std::size_t i, std::size_t j) const { return values_[j * n_ + i]; }
  std::span<const double> column(std::size_t j) const {
    return {values_.data() + j * n_, n_};
  }
  std::span<const double> values() const { return values_; }

  // Empty when the source carried no names.
  const std::vector<std::string>& column_names() const { return column_names_; }
  // Column name if known, otherwise "x<j>".
  std::string column_name(std::size_t j) const;

  // Returns a new dataset holding rows `rows` in the given order.
  Dataset SelectRows(std::span<const std::size_t> rows) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> values_;
  std::vector<std::string> column_names_;
};

// Dataset with one binary flag per row (1 = outlier, 0 = inlier).
struct LabeledDataset {
  Dataset data;
  std::vector<std::uint8_t> labels;

  // Throws DataError unless labels.size() == data.n() and every label is 0/1.
  LabeledDataset(Dataset data, std::vector<std::uint8_t> labels);

  std::size_t outlier_count() const;

  friend bool operator==(const LabeledDataset&,
                         const LabeledDataset&) = default;
};

struct SplitSpec {
  double train_fraction = 0.6;
  std::uint64_t seed = 42;
  std::size_t trial_count = 10;

  // Throws DataError on train_fraction outside (0, 1) or trial_count == 0.
  void Validate() const;
};

struct CsvOptions {
  bool has_header = false;
};

// A label column referenced either by 0-based index or by header name.
using ColumnRef = std::variant<std::size_t, std::string>;

// Unlabeled load. Errors carry the 0-based data row (header excluded) and
// column index.
Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options);

// Labeled load: the label column is removed from the features and parsed
// from {0,1} or {no,yes}; any other token is an error.
LabeledDataset LoadLabeledCsv(const std::filesystem::path& path,
                              const CsvOptions& options,
                              const ColumnRef& label_column);

// Writes a header row when the dataset has column names. Values use the
// shortest decimal form that round-trips exactly.
void WriteCsv(const Dataset& data, const std::filesystem::path& path);
void WriteCsv(const LabeledDataset& data, const std::filesystem::path& path,
              const std::string& label_name = "label");

struct ArffOptions {
  std::string label_attribute = "outlier";
  // Nominal value mapped to 1. When unset, any of yes/outlier/anomaly
  // (case-insensitive) maps to 1 and everything else to 0.
  std::optional<std::string> positive_value;
};

// Minimal ARFF reader: numeric/real/integer attributes plus one nominal
// label attribute. String, date, relational and non-label nominal attributes
// are rejected, as are sparse rows and missing values.
LabeledDataset LoadArff(const std::filesystem::path& path,
                        const ArffOptions& options);

// Same as above but reads from an in-memory document; `source` is used only
// in error messages.
LabeledDataset ParseArff(std::string_view text, const ArffOptions& options,
                         std::string_view source = "<memory>");

// 180 inliers from an isotropic Gaussian (sigma 0.1) centred at (1, 1) and
// 20 outliers uniform on [0,1]^2. Inliers come first.
inline constexpr std::size_t kCornerInliers = 180;
inline constexpr std::size_t kCornerOutliers = 20;
inline constexpr double kCornerSigma = 0.1;
LabeledDataset GenerateCornerGaussian(std::uint64_t seed);

// n x d independent draws from U[0, 1). Throws ResourceError when the
// matrix cannot be allocated.
Dataset GenerateScaling(std::size_t n, std::size_t d, std::uint64_t seed);

struct Split {
  Dataset train;
  LabeledDataset test;
};

// Seed of trial `trial_index` under `seed`; see random.h for the mixing.
std::uint64_t TrialSeed(std::uint64_t seed, std::size_t trial_index);

// Number of training rows: floor(train_fraction * n + 0.5).
std::size_t TrainSize(std::size_t n, double train_fraction);

// Uniform random row partition seeded by (spec.seed, trial_index). Both parts
// keep the original relative row order. Throws DataError if either part
// would be empty or trial_index >= spec.trial_count.
Split SplitDataset(const LabeledDataset& ds, const SplitSpec& spec,
                   std::size_t trial_index);

// Partition driven directly by a 64-bit seed.
Split SplitWithSeed(const LabeledDataset& ds, double train_fraction,
                    std::uint64_t seed);

}  // namespace ecod

#endif  // ECOD_DATASET_H_
