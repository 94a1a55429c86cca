// Copyright 2026 The hyperifs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hyperifs {

// Worker count: HYPERIFS_THREADS if set (min 1), else hardware concurrency.
inline unsigned thread_budget() {
  if (const char* env = std::getenv("HYPERIFS_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
    return 1;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs f(i) for i in [0, n). Results must be written to preallocated
// per-index slots so the outcome is independent of scheduling.
template <typename F>
void parallel_for(std::size_t n, F&& f) {
  unsigned workers = std::min<std::size_t>(thread_budget(), n ? n : 1);
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        f(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace hyperifs
