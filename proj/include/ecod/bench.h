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

// Scalability harness: wall time of fit and score over an (n, d) grid of
// uniform synthetic data.

#ifndef ECOD_BENCH_H_
#define ECOD_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ecod/parallel.h"
#include "ecod/scoring.h"

namespace ecod {

struct BenchRecord {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t workers = 1;
  double fit_seconds = 0.0;
  double score_seconds = 0.0;
  double total_seconds = 0.0;
  // FNV-1a over the bytes of the final scores; equal across worker counts.
  std::uint64_t checksum = 0;
  // Set when the cell was not run; `note` says why.
  bool skipped = false;
  std::string note;
};

struct BenchOptions {
  std::size_t workers = 1;
  std::uint64_t seed = 42;
  bool warmup = true;
  // Cells whose estimated footprint exceeds this are skipped. Zero means
  // memory_fraction of the detected physical memory.
  std::uint64_t memory_limit_bytes = 0;
  double memory_fraction = 0.75;
};

// Default benchmark grid axes.
inline const std::vector<std::size_t> kDefaultGridN = {1000, 10000, 100000,
                                                       1000000};
inline const std::vector<std::size_t> kDefaultGridD = {10, 100, 1000, 10000};

// Bytes needed to run one cell: the data, the model's sorted copies and the
// two per-dimension score buffers, 8 * n * d each.
std::uint64_t EstimateCellBytes(std::size_t n, std::size_t d);

// Physical memory reported by the OS, 0 if unknown.
std::uint64_t PhysicalMemoryBytes();

std::uint64_t ScoreChecksum(std::span<const double> scores);

// Runs one cell: generate, optional warm-up, then timed Fit and timed Score
// on the same rows. Never skips.
BenchRecord RunCell(std::size_t n, std::size_t d, const BenchOptions& options);

// Every (n, d) pair in row-major order of the grid. Cells over the memory
// limit, or that fail to allocate, come back with skipped = true.
std::vector<BenchRecord> RunGrid(std::span<const std::size_t> ns,
                                 std::span<const std::size_t> ds,
                                 const BenchOptions& options);

// "n,d,workers,fit_s,score_s,total_s,checksum,status" rows.
void WriteBenchCsv(const std::vector<BenchRecord>& records,
                   std::uint64_t seed, const std::filesystem::path& path);
// Long format for plotting: "n,d,workers,phase,seconds" with phase in
// {fit, score, total}; skipped cells are omitted.
void WriteBenchLong(const std::vector<BenchRecord>& records,
                    std::uint64_t seed, const std::filesystem::path& path);

}  // namespace ecod

#endif  // ECOD_BENCH_H_
