// Copyright 2026 The spikestab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef SPIKESTAB_PARALLEL_H_
#define SPIKESTAB_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace spikestab {

// Splits [0, count) into at most `jobs` contiguous blocks and calls
// body(begin, end, worker) for each block on its own thread. Block boundaries
// depend only on (count, jobs); callers that reduce integer per-worker
// partials get results independent of scheduling. The first exception thrown
// by any block is rethrown on the calling thread.
template <typename Body>
void ParallelFor(std::size_t count, std::size_t jobs, Body&& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs <= 1) {
    if (count > 0) body(std::size_t{0}, count, std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> threads;
  threads.reserve(jobs);
  for (std::size_t k = 0; k < jobs; ++k) {
    const std::size_t begin = count * k / jobs;
    const std::size_t end = count * (k + 1) / jobs;
    threads.emplace_back([&, begin, end, k] {
      try {
        body(begin, end, k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace spikestab

#endif  // SPIKESTAB_PARALLEL_H_
