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

#include "ecod/parallel.h"

#include <algorithm>
#include <mutex>
#include <string>

#include "ecod/error.h"

namespace ecod {

std::vector<IndexRange> WorkerPartition(std::size_t count,
                                        std::size_t workers) {
  if (count == 0 || workers == 0) {
    throw DataError("partition needs count >= 1 and workers >= 1 (got " +
                    std::to_string(count) + ", " + std::to_string(workers) +
                    ")");
  }
  const std::size_t groups = std::min(count, workers);
  const std::size_t base = count / groups;
  const std::size_t extra = count % groups;
  std::vector<IndexRange> ranges;
  ranges.reserve(groups);
  std::size_t begin = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = base + (g < extra ? 1 : 0);
    ranges.push_back({begin, begin + size});
    begin += size;
  }
  return ranges;
}

void ParallelFor(const std::vector<IndexRange>& ranges,
                 const std::function<void(IndexRange)>& fn) {
  if (ranges.empty()) return;
  if (ranges.size() == 1) {
    fn(ranges.front());
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto guarded = [&](IndexRange r) {
    try {
      fn(r);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(ranges.size() - 1);
  for (std::size_t k = 1; k < ranges.size(); ++k) {
    threads.emplace_back(guarded, ranges[k]);
  }
  guarded(ranges.front());
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ecod
