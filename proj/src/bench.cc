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

#include "ecod/bench.h"

#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <limits>

#include "ecod/dataset.h"
#include "ecod/ecdf.h"
#include "ecod/error.h"
#include "text_util.h"

namespace ecod {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t MemoryLimit(const BenchOptions& options) {
  if (options.memory_limit_bytes) return options.memory_limit_bytes;
  const std::uint64_t phys = PhysicalMemoryBytes();
  if (phys == 0) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(static_cast<double>(phys) *
                                    options.memory_fraction);
}

}  // namespace

std::uint64_t EstimateCellBytes(std::size_t n, std::size_t d) {
  const long double bytes = 4.0L * 8.0L * static_cast<long double>(n) *
                            static_cast<long double>(d);
  if (bytes >= static_cast<long double>(
                   std::numeric_limits<std::uint64_t>::max())) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(bytes);
}

std::uint64_t PhysicalMemoryBytes() {
  const long pages = sysconf(_SC_PHYS_PAGES);
  const long page_size = sysconf(_SC_PAGE_SIZE);
  if (pages <= 0 || page_size <= 0) return 0;
  return static_cast<std::uint64_t>(pages) *
         static_cast<std::uint64_t>(page_size);
}

std::uint64_t ScoreChecksum(std::span<const double> scores) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (double s : scores) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &s, sizeof(double));
    for (unsigned char b : bytes) {
      h ^= b;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

BenchRecord RunCell(std::size_t n, std::size_t d,
                    const BenchOptions& options) {
  const Dataset data = GenerateScaling(n, d, options.seed);
  const ScoreOptions score_options{options.workers};
  if (options.warmup) {
    (void)Score(Fit(data, options.workers), data, Variant::kEcod,
                score_options);
  }
  BenchRecord rec;
  rec.n = n;
  rec.d = d;
  rec.workers = options.workers;
  const auto fit_start = Clock::now();
  const EcdfModel model = Fit(data, options.workers);
  rec.fit_seconds = SecondsSince(fit_start);
  const auto score_start = Clock::now();
  const ScoreReport report =
      Score(model, data, Variant::kEcod, score_options);
  rec.score_seconds = SecondsSince(score_start);
  rec.total_seconds = rec.fit_seconds + rec.score_seconds;
  rec.checksum = ScoreChecksum(report.final);
  return rec;
}

std::vector<BenchRecord> RunGrid(std::span<const std::size_t> ns,
                                 std::span<const std::size_t> ds,
                                 const BenchOptions& options) {
  if (options.workers == 0) throw DataError("workers must be >= 1");
  const std::uint64_t limit = MemoryLimit(options);
  std::vector<BenchRecord> records;
  for (std::size_t n : ns) {
    for (std::size_t d : ds) {
      const std::uint64_t need = EstimateCellBytes(n, d);
      if (need > limit) {
        BenchRecord skipped;
        skipped.n = n;
        skipped.d = d;
        skipped.workers = options.workers;
        skipped.skipped = true;
        skipped.note = "needs ~" + std::to_string(need >> 20) +
                       " MiB, limit " + std::to_string(limit >> 20) + " MiB";
        records.push_back(std::move(skipped));
        continue;
      }
      try {
        records.push_back(RunCell(n, d, options));
      } catch (const ResourceError& e) {
        BenchRecord skipped;
        skipped.n = n;
        skipped.d = d;
        skipped.workers = options.workers;
        skipped.skipped = true;
        skipped.note = e.what();
        records.push_back(std::move(skipped));
      }
    }
  }
  return records;
}

void WriteBenchCsv(const std::vector<BenchRecord>& records, std::uint64_t seed,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "# seed=" << seed << '\n';
  out << "n,d,workers,fit_s,score_s,total_s,checksum,status\n";
  for (const BenchRecord& r : records) {
    out << r.n << ',' << r.d << ',' << r.workers << ',';
    if (r.skipped) {
      out << ",,,,skipped: " << r.note << '\n';
      continue;
    }
    out << internal::FormatDouble(r.fit_seconds) << ','
        << internal::FormatDouble(r.score_seconds) << ','
        << internal::FormatDouble(r.total_seconds) << ',' << r.checksum
        << ",ok\n";
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void WriteBenchLong(const std::vector<BenchRecord>& records,
                    std::uint64_t seed, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "# seed=" << seed << '\n';
  out << "n,d,workers,phase,seconds\n";
  for (const BenchRecord& r : records) {
    if (r.skipped) continue;
    const std::string key = std::to_string(r.n) + ',' + std::to_string(r.d) +
                            ',' + std::to_string(r.workers) + ',';
    out << key << "fit," << internal::FormatDouble(r.fit_seconds) << '\n'
        << key << "score," << internal::FormatDouble(r.score_seconds) << '\n'
        << key << "total," << internal::FormatDouble(r.total_seconds) << '\n';
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace ecod
