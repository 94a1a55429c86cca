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

#include <catch2/catch_amalgamated.hpp>

#include "hyperifs/rng.hpp"
#include "hyperifs/space.hpp"

using namespace hyperifs;

static std::vector<GridSpace> sample_spaces() {
  return {GridSpace::interval(256), GridSpace::circle(256),
          GridSpace::shift_space(8)};
}

TEST_CASE("metric axioms hold on sampled points of every space kind") {
  for (const GridSpace& s : sample_spaces()) {
    Rng rng(7);
    int n = s.resolution();
    for (int t = 0; t < 400; ++t) {
      double x = s.center(int(rng.below(std::uint64_t(n))));
      double y = s.center(int(rng.below(std::uint64_t(n))));
      double z = s.center(int(rng.below(std::uint64_t(n))));
      REQUIRE(s.metric(x, y) >= 0.0);
      REQUIRE(s.metric(x, x) == 0.0);
      REQUIRE(s.metric(x, y) == s.metric(y, x));
      REQUIRE(s.metric(x, z) <= s.metric(x, y) + s.metric(y, z) + 1e-15);
      REQUIRE(s.metric(x, y) <= s.diameter() + 1e-15);
    }
  }
}

TEST_CASE("distinct grid points separate") {
  for (const GridSpace& s : sample_spaces()) {
    for (int i = 0; i + 1 < s.resolution(); i += 17)
      REQUIRE(s.metric(s.center(i), s.center(i + 1)) > 0.0);
  }
}

TEST_CASE("cell_of inverts center") {
  for (const GridSpace& s : sample_spaces()) {
    for (int i = 0; i < s.resolution(); ++i)
      REQUIRE(s.cell_of(s.center(i)) == i);
  }
}

TEST_CASE("interval centers are the uniform lattice including endpoints") {
  GridSpace s = GridSpace::interval(512);
  REQUIRE(s.center(0) == 0.0);
  REQUIRE(s.center(511) == 1.0);
  REQUIRE(s.center(255) == Catch::Approx(255.0 / 511.0).epsilon(1e-14));
  REQUIRE(s.cell_diameter() == Catch::Approx(1.0 / 511.0).epsilon(1e-14));
}

TEST_CASE("circle metric wraps") {
  GridSpace s = GridSpace::circle(1000);
  REQUIRE(s.metric(0.001, 0.999) == Catch::Approx(0.002).epsilon(1e-12));
  REQUIRE(s.metric(0.25, 0.75) == Catch::Approx(0.5).epsilon(1e-12));
  REQUIRE(s.diameter() == 0.5);
}

TEST_CASE("shift metric is two to the one minus first difference") {
  GridSpace s = GridSpace::shift_space(8);
  // Indices pack symbols most significant first, so flipping the top bit
  // means differing in slot 1 and flipping the bottom bit in slot 8.
  double top = s.metric(s.center(0), s.center(128));
  double bottom = s.metric(s.center(0), s.center(1));
  REQUIRE(top == 1.0);
  REQUIRE(bottom == std::ldexp(1.0, 1 - 8));
  REQUIRE(s.diameter() == 1.0);
}

TEST_CASE("shift resolution must be a power of two") {
  REQUIRE(GridSpace::shift_space(12).resolution() == 4096);
  REQUIRE_THROWS_AS(GridSpace::shift_space(0), std::invalid_argument);
}
