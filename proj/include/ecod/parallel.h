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

// Static work splitting for the per-dimension and per-row-block loops.

#ifndef ECOD_PARALLEL_H_
#define ECOD_PARALLEL_H_

#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace ecod {

// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Splits [0, count) into min(count, workers) contiguous ranges whose sizes
// differ by at most one; the first count % workers ranges get the extra
// element. Requires count >= 1 and workers >= 1 (throws DataError otherwise).
std::vector<IndexRange> WorkerPartition(std::size_t count, std::size_t workers);

// Runs fn(range) for every range, one thread per range beyond the first
// (which runs on the calling thread). The first exception thrown by any
// worker is rethrown after all threads have joined.
void ParallelFor(const std::vector<IndexRange>& ranges,
                 const std::function<void(IndexRange)>& fn);

}  // namespace ecod

#endif  // ECOD_PARALLEL_H_
