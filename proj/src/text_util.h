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

// Small text helpers shared by the file readers and writers.

#ifndef ECOD_SRC_TEXT_UTIL_H_
#define ECOD_SRC_TEXT_UTIL_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ecod::internal {

// Whole file as a string. Throws IoError naming the path.
std::string ReadFile(const std::filesystem::path& path);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> SplitLines(std::string_view text);

std::string_view Trim(std::string_view s);

// Strips one level of matching single or double quotes.
std::string Unquote(std::string_view s);

std::string ToLower(std::string_view s);

// Comma split that keeps quoted commas (single or double quotes) together.
// Cells are returned untrimmed and still quoted.
std::vector<std::string> SplitCsvLine(std::string_view line);

// Parses a decimal number, allowing surrounding blanks and a leading '+'.
// Returns nullopt when the whole cell is not consumed.
std::optional<double> ParseDouble(std::string_view cell);

// Shortest representation that round-trips to the same double.
std::string FormatDouble(double v);

}  // namespace ecod::internal

#endif  // ECOD_SRC_TEXT_UTIL_H_
