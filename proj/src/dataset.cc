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

#include "ecod/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <new>
#include <numeric>
#include <sstream>

#include "ecod/error.h"
#include "ecod/random.h"
#include "text_util.h"

namespace ecod {

// ---------------------------------------------------------------------------
// Dataset

Dataset::Dataset(std::size_t n, std::size_t d, std::vector<double> values,
                 std::vector<std::string> column_names)
    : n_(n),
      d_(d),
      values_(std::move(values)),
      column_names_(std::move(column_names)) {
  if (n_ == 0 || d_ == 0) {
    throw DataError("dataset must have at least one row and one column (got " +
                    std::to_string(n_) + "x" + std::to_string(d_) + ")");
  }
  if (values_.size() / d_ != n_ || values_.size() % d_ != 0) {
    throw DataError("dataset storage holds " + std::to_string(values_.size()) +
                    " values, expected " + std::to_string(n_) + "x" +
                    std::to_string(d_));
  }
  if (!column_names_.empty() && column_names_.size() != d_) {
    throw DataError("got " + std::to_string(column_names_.size()) +
                    " column names for " + std::to_string(d_) + " columns");
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw DataError("non-finite value at row " + std::to_string(k % n_) +
                      ", column " + std::to_string(k / n_));
    }
  }
}

Dataset Dataset::FromRowMajor(std::size_t n, std::size_t d,
                              std::span<const double> row_major,
                              std::vector<std::string> column_names) {
  if (row_major.size() != n * d) {
    throw DataError("row-major buffer holds " +
                    std::to_string(row_major.size()) + " values, expected " +
                    std::to_string(n) + "x" + std::to_string(d));
  }
  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      values[j * n + i] = row_major[i * d + j];
    }
  }
  return Dataset(n, d, std::move(values), std::move(column_names));
}

std::string Dataset::column_name(std::size_t j) const {
  if (!column_names_.empty()) return column_names_[j];
  return "x" + std::to_string(j);
}

Dataset Dataset::SelectRows(std::span<const std::size_t> rows) const {
  const std::size_t m = rows.size();
  std::vector<double> out(m * d_);
  for (std::size_t j = 0; j < d_; ++j) {
    const double* src = values_.data() + j * n_;
    double* dst = out.data() + j * m;
    for (std::size_t k = 0; k < m; ++k) dst[k] = src[rows[k]];
  }
  return Dataset(m, d_, std::move(out), column_names_);
}

LabeledDataset::LabeledDataset(Dataset data_in,
                               std::vector<std::uint8_t> labels_in)
    : data(std::move(data_in)), labels(std::move(labels_in)) {
  if (labels.size() != data.n()) {
    throw DataError("got " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(data.n()) + " rows");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > 1) {
      throw DataError("label at row " + std::to_string(i) + " is not 0/1");
    }
  }
}

std::size_t LabeledDataset::outlier_count() const {
  return static_cast<std::size_t>(
      std::count(labels.begin(), labels.end(), std::uint8_t{1}));
}

void SplitSpec::Validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError("train fraction must lie in (0, 1), got " +
                    internal::FormatDouble(train_fraction));
  }
  if (trial_count == 0) throw DataError("trial count must be positive");
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct CsvTable {
  std::vector<std::string> header;
  // Row-major cells, one vector per non-blank data line.
  std::vector<std::vector<std::string>> rows;
};

CsvTable ReadCsvTable(const std::filesystem::path& path, bool has_header) {
  const std::string text = internal::ReadFile(path);
  CsvTable table;
  std::size_t expected = 0;
  bool seen_first = false;
  std::size_t data_row = 0;
  for (std::string_view line : internal::SplitLines(text)) {
    if (internal::Trim(line).empty()) continue;
    std::vector<std::string> cells = internal::SplitCsvLine(line);
    if (!seen_first) {
      expected = cells.size();
      seen_first = true;
      if (has_header) {
        for (auto& c : cells) c = internal::Unquote(internal::Trim(c));
        table.header = std::move(cells);
        continue;
      }
    } else if (cells.size() != expected) {
      throw DataError(path.string() + ": row " + std::to_string(data_row) +
                      " has " + std::to_string(cells.size()) +
                      " columns, expected " + std::to_string(expected));
    }
    table.rows.push_back(std::move(cells));
    ++data_row;
  }
  if (table.rows.empty()) {
    throw DataError(path.string() + ": file contains no data rows");
  }
  return table;
}

double ParseCell(const std::filesystem::path& path, std::string_view cell,
                 std::size_t row, std::size_t col) {
  const std::optional<double> v = internal::ParseDouble(cell);
  if (!v) {
    throw DataError(path.string() + ": row " + std::to_string(row) +
                    ", column " + std::to_string(col) + ": cannot parse '" +
                    std::string(internal::Trim(cell)) + "' as a number");
  }
  if (!std::isfinite(*v)) {
    throw DataError(path.string() + ": row " + std::to_string(row) +
                    ", column " + std::to_string(col) +
                    ": non-finite value '" +
                    std::string(internal::Trim(cell)) + "'");
  }
  return *v;
}

std::uint8_t ParseLabel(const std::filesystem::path& path,
                        std::string_view cell, std::size_t row,
                        std::size_t col) {
  const std::string token =
      internal::ToLower(internal::Unquote(internal::Trim(cell)));
  if (token == "0" || token == "no") return 0;
  if (token == "1" || token == "yes") return 1;
  throw DataError(path.string() + ": row " + std::to_string(row) +
                  ", column " + std::to_string(col) + ": unknown label '" +
                  std::string(internal::Trim(cell)) +
                  "' (expected 0/1 or no/yes)");
}

// Converts the table to a column-major Dataset, skipping column `skip`.
Dataset TableToDataset(const std::filesystem::path& path,
                       const CsvTable& table,
                       std::optional<std::size_t> skip) {
  const std::size_t n = table.rows.size();
  const std::size_t width = table.rows.front().size();
  const std::size_t d = width - (skip ? 1 : 0);
  if (d == 0) throw DataError(path.string() + ": no feature columns");
  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (skip && c == *skip) continue;
      values[j * n + i] = ParseCell(path, table.rows[i][c], i, c);
      ++j;
    }
  }
  std::vector<std::string> names;
  if (!table.header.empty()) {
    for (std::size_t c = 0; c < width; ++c) {
      if (!(skip && c == *skip)) names.push_back(table.header[c]);
    }
  }
  return Dataset(n, d, std::move(values), std::move(names));
}

void WriteCsvImpl(const Dataset& data, const std::uint8_t* labels,
                  const std::string& label_name,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  const bool header = !data.column_names().empty() || labels != nullptr;
  if (header) {
    for (std::size_t j = 0; j < data.d(); ++j) {
      if (j) out << ',';
      out << data.column_name(j);
    }
    if (labels) out << ',' << label_name;
    out << '\n';
  }
  for (std::size_t i = 0; i < data.n(); ++i) {
    for (std::size_t j = 0; j < data.d(); ++j) {
      if (j) out << ',';
      out << internal::FormatDouble(data.at(i, j));
    }
    if (labels) out << ',' << static_cast<int>(labels[i]);
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

Dataset LoadCsv(const std::filesystem::path& path, const CsvOptions& options) {
  const CsvTable table = ReadCsvTable(path, options.has_header);
  return TableToDataset(path, table, std::nullopt);
}

LabeledDataset LoadLabeledCsv(const std::filesystem::path& path,
                              const CsvOptions& options,
                              const ColumnRef& label_column) {
  const CsvTable table = ReadCsvTable(path, options.has_header);
  const std::size_t width = table.rows.front().size();
  std::size_t label_index = 0;
  if (const auto* idx = std::get_if<std::size_t>(&label_column)) {
    label_index = *idx;
  } else {
    const std::string& name = std::get<std::string>(label_column);
    auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) {
      throw DataError(path.string() + ": label column '" + name +
                      "' not found in header");
    }
    label_index = static_cast<std::size_t>(it - table.header.begin());
  }
  if (label_index >= width) {
    throw DataError(path.string() + ": label column " +
                    std::to_string(label_index) + " out of range (" +
                    std::to_string(width) + " columns)");
  }
  std::vector<std::uint8_t> labels(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    labels[i] = ParseLabel(path, table.rows[i][label_index], i, label_index);
  }
  return LabeledDataset(TableToDataset(path, table, label_index),
                        std::move(labels));
}

void WriteCsv(const Dataset& data, const std::filesystem::path& path) {
  WriteCsvImpl(data, nullptr, "", path);
}

void WriteCsv(const LabeledDataset& data, const std::filesystem::path& path,
              const std::string& label_name) {
  WriteCsvImpl(data.data, data.labels.data(), label_name, path);
}

// ---------------------------------------------------------------------------
// ARFF

namespace {

struct ArffAttribute {
  std::string name;
  bool nominal = false;
  std::vector<std::string> nominal_values;
};

// Splits "@attribute <name> <type>" after the keyword into name and type.
std::pair<std::string, std::string> SplitAttributeDecl(std::string_view rest) {
  rest = internal::Trim(rest);
  std::string name;
  std::size_t pos = 0;
  if (!rest.empty() && (rest[0] == '\'' || rest[0] == '"')) {
    const char quote = rest[0];
    const std::size_t close = rest.find(quote, 1);
    if (close == std::string_view::npos) return {std::string(rest), ""};
    name = std::string(rest.substr(1, close - 1));
    pos = close + 1;
  } else {
    while (pos < rest.size() && !std::isspace(static_cast<unsigned char>(
                                    rest[pos])) &&
           rest[pos] != '{') {
      ++pos;
    }
    name = std::string(rest.substr(0, pos));
  }
  return {name, std::string(internal::Trim(rest.substr(pos)))};
}

}  // namespace

LabeledDataset ParseArff(std::string_view text, const ArffOptions& options,
                         std::string_view source) {
  const std::string src(source);
  std::vector<ArffAttribute> attributes;
  bool in_data = false;
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 0;
  for (std::string_view raw : internal::SplitLines(text)) {
    ++line_no;
    const std::string_view line = internal::Trim(raw);
    if (line.empty() || line.front() == '%') continue;
    if (!in_data) {
      const std::string lower = internal::ToLower(line.substr(
          0, std::min<std::size_t>(line.size(), 10)));
      if (lower.rfind("@relation", 0) == 0) continue;
      if (lower.rfind("@data", 0) == 0) {
        in_data = true;
        continue;
      }
      if (lower.rfind("@attribute", 0) != 0) {
        throw DataError(src + ":" + std::to_string(line_no) +
                        ": unexpected header line '" + std::string(line) +
                        "'");
      }
      auto [name, type] = SplitAttributeDecl(line.substr(10));
      ArffAttribute attr;
      attr.name = name;
      if (!type.empty() && type.front() == '{') {
        const std::size_t close = type.rfind('}');
        if (close == std::string::npos) {
          throw DataError(src + ":" + std::to_string(line_no) +
                          ": unterminated nominal set for attribute '" +
                          name + "'");
        }
        attr.nominal = true;
        for (const std::string& v : internal::SplitCsvLine(
                 std::string_view(type).substr(1, close - 1))) {
          attr.nominal_values.push_back(
              internal::Unquote(internal::Trim(v)));
        }
      } else {
        const std::string t = internal::ToLower(type);
        if (t != "numeric" && t != "real" && t != "integer") {
          throw DataError(src + ":" + std::to_string(line_no) +
                          ": unsupported type '" + type + "' for attribute '" +
                          name + "'");
        }
      }
      attributes.push_back(std::move(attr));
      continue;
    }
    if (line.front() == '{') {
      throw DataError(src + ":" + std::to_string(line_no) +
                      ": sparse ARFF rows are not supported");
    }
    std::vector<std::string> cells = internal::SplitCsvLine(line);
    if (cells.size() != attributes.size()) {
      throw DataError(src + ":" + std::to_string(line_no) + ": data row " +
                      std::to_string(rows.size()) + " has " +
                      std::to_string(cells.size()) + " values, expected " +
                      std::to_string(attributes.size()));
    }
    rows.push_back(std::move(cells));
  }

  std::optional<std::size_t> label_index;
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    if (attributes[a].name == options.label_attribute) label_index = a;
  }
  if (!label_index) {
    throw DataError(src + ": label attribute '" + options.label_attribute +
                    "' not declared");
  }
  if (!attributes[*label_index].nominal) {
    throw DataError(src + ": label attribute '" + options.label_attribute +
                    "' must be nominal");
  }
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    if (a != *label_index && attributes[a].nominal) {
      throw DataError(src + ": unsupported nominal attribute '" +
                      attributes[a].name + "' (only the label may be nominal)");
    }
  }
  if (!in_data || rows.empty()) {
    throw DataError(src + ": no data rows");
  }

  const ArffAttribute& label_attr = attributes[*label_index];
  auto is_positive = [&](const std::string& value) {
    if (options.positive_value) return value == *options.positive_value;
    const std::string v = internal::ToLower(value);
    return v == "yes" || v == "outlier" || v == "anomaly";
  };

  const std::size_t n = rows.size();
  const std::size_t d = attributes.size() - 1;
  if (d == 0) throw DataError(src + ": no numeric attributes");
  std::vector<double> values(n * d);
  std::vector<std::uint8_t> labels(n);
  std::vector<std::string> names;
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    if (a != *label_index) names.push_back(attributes[a].name);
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = 0;
    for (std::size_t a = 0; a < attributes.size(); ++a) {
      const std::string cell = internal::Unquote(internal::Trim(rows[i][a]));
      if (cell == "?") {
        throw DataError(src + ": data row " + std::to_string(i) +
                        ", attribute '" + attributes[a].name +
                        "': missing values are not supported");
      }
      if (a == *label_index) {
        const auto& allowed = label_attr.nominal_values;
        if (std::find(allowed.begin(), allowed.end(), cell) == allowed.end()) {
          throw DataError(src + ": data row " + std::to_string(i) +
                          ": value '" + cell + "' not in the nominal set of '" +
                          label_attr.name + "'");
        }
        labels[i] = is_positive(cell) ? 1 : 0;
        continue;
      }
      const std::optional<double> v = internal::ParseDouble(cell);
      if (!v || !std::isfinite(*v)) {
        throw DataError(src + ": data row " + std::to_string(i) +
                        ", attribute '" + attributes[a].name +
                        "': cannot parse '" + cell + "' as a finite number");
      }
      values[j * n + i] = *v;
      ++j;
    }
  }
  return LabeledDataset(Dataset(n, d, std::move(values), std::move(names)),
                        std::move(labels));
}

LabeledDataset LoadArff(const std::filesystem::path& path,
                        const ArffOptions& options) {
  return ParseArff(internal::ReadFile(path), options, path.string());
}

// ---------------------------------------------------------------------------
// Generators

LabeledDataset GenerateCornerGaussian(std::uint64_t seed) {
  constexpr std::size_t n = kCornerInliers + kCornerOutliers;
  Rng rng(seed);
  std::normal_distribution<double> normal(1.0, kCornerSigma);
  std::vector<double> values(n * 2);
  std::vector<std::uint8_t> labels(n, 0);
  for (std::size_t i = 0; i < kCornerInliers; ++i) {
    values[i] = normal(rng.engine());
    values[n + i] = normal(rng.engine());
  }
  for (std::size_t i = kCornerInliers; i < n; ++i) {
    values[i] = rng.Unit();
    values[n + i] = rng.Unit();
    labels[i] = 1;
  }
  return LabeledDataset(Dataset(n, 2, std::move(values)), std::move(labels));
}

Dataset GenerateScaling(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (n == 0 || d == 0) throw DataError("n and d must be positive");
  if (n > std::numeric_limits<std::size_t>::max() / sizeof(double) / d) {
    throw ResourceError("matrix " + std::to_string(n) + "x" +
                        std::to_string(d) + " exceeds addressable memory");
  }
  std::vector<double> values;
  try {
    values.resize(n * d);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate " + std::to_string(n) + "x" +
                        std::to_string(d) + " matrix");
  }
  Rng rng(seed);
  for (double& v : values) v = rng.Unit();
  return Dataset(n, d, std::move(values));
}

// ---------------------------------------------------------------------------
// Splits

std::uint64_t TrialSeed(std::uint64_t seed, std::size_t trial_index) {
  return MixSeed(seed ^ MixSeed(static_cast<std::uint64_t>(trial_index)));
}

std::size_t TrainSize(std::size_t n, double train_fraction) {
  return static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n) + 0.5));
}

Split SplitWithSeed(const LabeledDataset& ds, double train_fraction,
                    std::uint64_t seed) {
  const std::size_t n = ds.data.n();
  const std::size_t k = TrainSize(n, train_fraction);
  if (k == 0 || k >= n) {
    throw DataError("splitting " + std::to_string(n) + " rows with fraction " +
                    internal::FormatDouble(train_fraction) +
                    " leaves an empty part");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[rng.Below(i + 1)]);
  }
  std::vector<std::size_t> train_rows(perm.begin(), perm.begin() + k);
  std::vector<std::size_t> test_rows(perm.begin() + k, perm.end());
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  std::vector<std::uint8_t> test_labels(test_rows.size());
  for (std::size_t r = 0; r < test_rows.size(); ++r) {
    test_labels[r] = ds.labels[test_rows[r]];
  }
  return Split{ds.data.SelectRows(train_rows),
               LabeledDataset(ds.data.SelectRows(test_rows),
                              std::move(test_labels))};
}

Split SplitDataset(const LabeledDataset& ds, const SplitSpec& spec,
                   std::size_t trial_index) {
  spec.Validate();
  if (trial_index >= spec.trial_count) {
    throw DataError("trial index " + std::to_string(trial_index) +
                    " out of range for " + std::to_string(spec.trial_count) +
                    " trials");
  }
  return SplitWithSeed(ds, spec.train_fraction,
                       TrialSeed(spec.seed, trial_index));
}

}  // namespace ecod
