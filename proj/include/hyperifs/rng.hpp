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

#include <cstdint>
#include <random>

namespace hyperifs {

// Deterministic RNG wrapper. Distribution helpers are hand-rolled so that
// identical seeds give identical streams on every platform; std distribution
// objects are implementation-specified and are avoided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}

  std::uint64_t next() { return g_(); }

  // Uniform in [0, 1).
  double uniform() { return (g_() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is fine here; n is tiny relative to 2^64.
    return n ? g_() % n : 0;
  }

  // Derives an independent stream for subtask `k`; used so that parallel
  // trials stay deterministic regardless of scheduling.
  static Rng fork(std::uint64_t seed, std::uint64_t k) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 g_;
};

}  // namespace hyperifs
