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

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "ecod/ecdf.h"
#include "ecod/error.h"
#include "json.hpp"
#include "text_util.h"

namespace ecod {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary model files assume a little-endian host");

constexpr char kMagic[8] = {'E', 'C', 'O', 'D', 'M', 'D', 'L', '\0'};
constexpr char kJsonFormatName[] = "ecod-model";

bool IsJsonPath(const std::filesystem::path& path) {
  return internal::ToLower(path.extension().string()) == ".json";
}

template <typename T>
void Put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(std::string_view bytes, std::string source)
      : bytes_(bytes), source_(std::move(source)) {}

  template <typename T>
  T Get() {
    if (bytes_.size() - pos_ < sizeof(T)) {
      throw DataError(source_ + ": model file is truncated");
    }
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string_view Take(std::size_t count) {
    if (bytes_.size() - pos_ < count) {
      throw DataError(source_ + ": model file is truncated");
    }
    std::string_view s = bytes_.substr(pos_, count);
    pos_ += count;
    return s;
  }

  bool AtEnd() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

void SaveBinary(const EcdfModel& model, const std::filesystem::path& path) {
  std::string out;
  out.reserve(40 + model.d() * (model.n_train() + 1) * sizeof(double));
  out.append(kMagic, sizeof(kMagic));
  Put<std::uint32_t>(out, kModelFormatVersion);
  Put<std::uint64_t>(out, model.n_train());
  Put<std::uint64_t>(out, model.d());
  Put<double>(out, model.prob_floor());
  for (const DimensionModel& dm : model.dims()) {
    Put<double>(out, dm.skewness());
    const auto values = dm.sorted_values();
    out.append(reinterpret_cast<const char*>(values.data()),
               values.size() * sizeof(double));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

EcdfModel LoadBinary(const std::string& bytes, const std::string& source) {
  Reader in(bytes, source);
  if (std::memcmp(in.Take(sizeof(kMagic)).data(), kMagic, sizeof(kMagic))) {
    throw DataError(source + ": not an ECOD model file (bad magic)");
  }
  const auto version = in.Get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw DataError(source + ": model format version " +
                    std::to_string(version) + " is not supported (expected " +
                    std::to_string(kModelFormatVersion) + ")");
  }
  const auto n_train = in.Get<std::uint64_t>();
  const auto d = in.Get<std::uint64_t>();
  const double prob_floor = in.Get<double>();
  if (n_train == 0 || d == 0) throw DataError(source + ": empty model");
  // Reject sizes the file cannot possibly hold before allocating.
  if (d > bytes.size() / sizeof(double) ||
      n_train > bytes.size() / sizeof(double)) {
    throw DataError(source + ": model file is truncated");
  }
  std::vector<DimensionModel> dims;
  dims.reserve(d);
  for (std::uint64_t j = 0; j < d; ++j) {
    const double skew = in.Get<double>();
    const std::string_view raw = in.Take(n_train * sizeof(double));
    std::vector<double> values(n_train);
    std::memcpy(values.data(), raw.data(), raw.size());
    dims.emplace_back(std::move(values), skew);
  }
  if (!in.AtEnd()) throw DataError(source + ": trailing bytes in model file");
  return EcdfModel(std::move(dims), prob_floor);
}

void SaveJson(const EcdfModel& model, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["format"] = kJsonFormatName;
  doc["version"] = kModelFormatVersion;
  doc["n_train"] = model.n_train();
  doc["d"] = model.d();
  doc["prob_floor"] = model.prob_floor();
  nlohmann::json dims = nlohmann::json::array();
  for (const DimensionModel& dm : model.dims()) {
    const auto values = dm.sorted_values();
    dims.push_back({{"skewness", dm.skewness()},
                    {"sorted_values",
                     std::vector<double>(values.begin(), values.end())}});
  }
  doc["dims"] = std::move(dims);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file << doc.dump() << '\n';
  if (!file) throw IoError("failed writing '" + path.string() + "'");
}

EcdfModel LoadJson(const std::string& text, const std::string& source) {
  try {
    const nlohmann::json doc = nlohmann::json::parse(text);
    if (doc.value("format", "") != kJsonFormatName) {
      throw DataError(source + ": not an ECOD model document");
    }
    const auto version = doc.at("version").get<std::uint32_t>();
    if (version != kModelFormatVersion) {
      throw DataError(source + ": model format version " +
                      std::to_string(version) +
                      " is not supported (expected " +
                      std::to_string(kModelFormatVersion) + ")");
    }
    const auto n_train = doc.at("n_train").get<std::size_t>();
    const auto d = doc.at("d").get<std::size_t>();
    const auto& dims_json = doc.at("dims");
    if (dims_json.size() != d) {
      throw DataError(source + ": header declares " + std::to_string(d) +
                      " dimensions, file holds " +
                      std::to_string(dims_json.size()));
    }
    std::vector<DimensionModel> dims;
    dims.reserve(d);
    for (const auto& dj : dims_json) {
      auto values = dj.at("sorted_values").get<std::vector<double>>();
      if (values.size() != n_train) {
        throw DataError(source + ": dimension holds " +
                        std::to_string(values.size()) + " values, expected " +
                        std::to_string(n_train));
      }
      dims.emplace_back(std::move(values), dj.at("skewness").get<double>());
    }
    return EcdfModel(std::move(dims), doc.at("prob_floor").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": malformed model document: " + e.what());
  }
}

}  // namespace

void SaveModel(const EcdfModel& model, const std::filesystem::path& path) {
  if (IsJsonPath(path)) {
    SaveJson(model, path);
  } else {
    SaveBinary(model, path);
  }
}

EcdfModel LoadModel(const std::filesystem::path& path) {
  const std::string bytes = internal::ReadFile(path);
  if (IsJsonPath(path)) return LoadJson(bytes, path.string());
  return LoadBinary(bytes, path.string());
}

}  // namespace ecod
