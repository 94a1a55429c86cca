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

#include "hyperifs/corpus.hpp"
#include "hyperifs/maps.hpp"
#include "hyperifs/rng.hpp"
#include "support/oracles.hpp"

using namespace hyperifs;

TEST_CASE("map images of a cell region enclose sampled point images") {
  for (const std::string& name : corpus_names()) {
    IfsSystem sys = make_system(name, 256);
    const GridSpace& s = sys.space;
    Rng rng(17);
    for (int t = 0; t < 60; ++t) {
      int c = int(rng.below(std::uint64_t(s.resolution())));
      Iv region = cell_region(s, c);
      for (const MapSpec& m : sys.generators) {
        IvSet out;
        map_interval(m, s, region, out);
        // Sample points across the cell, apply the map pointwise, and
        // require containment in some output component.
        for (int k = 0; k <= 4; ++k) {
          double x = region.lo + (region.hi - region.lo) * k / 4.0;
          if (region.hi_open && k == 4) x = std::nextafter(region.hi, region.lo);
          double y = eval_map(m, s, x);
          // eval_map wraps the point before mapping while map_interval works
          // on the lift; the two paths can disagree by an ulp, so widen.
          bool covered = false;
          for (const Iv& v : out)
            covered = covered || iv_covers(s, IvSet{v}, y, y, -1e-9);
          REQUIRE(covered);
        }
      }
    }
  }
}

TEST_CASE("image_of_set contains every pointwise center image cell") {
  for (const std::string& name :
       {std::string("psi_interval"), std::string("circle_ns_rot"),
        std::string("shift2")}) {
    IfsSystem sys = make_system(name, 256);
    const GridSpace& s = sys.space;
    Rng rng(19);
    for (int t = 0; t < 25; ++t) {
      CompactSet a = oracles::random_set(s, rng);
      for (const MapSpec& m : sys.generators) {
        CompactSet img = image_of_set(m, a);
        a.cells().for_each_set([&](std::size_t i) {
          double y = eval_map(m, s, s.center(int(i)));
          REQUIRE(img.contains_cell(s.cell_of(y)));
        });
      }
    }
  }
}

TEST_CASE("preimage_of_set is superset safe") {
  for (const std::string& name :
       {std::string("psi_interval"), std::string("circle_ns_rot")}) {
    IfsSystem sys = make_system(name, 256);
    const GridSpace& s = sys.space;
    Rng rng(23);
    for (int t = 0; t < 25; ++t) {
      CompactSet a = oracles::random_set(s, rng);
      for (const MapSpec& m : sys.generators) {
        BitMask pre = preimage_of_set(m, a);
        // Every cell whose center lands in a marked cell must be marked.
        for (int i = 0; i < s.resolution(); ++i) {
          double y = eval_map(m, s, s.center(i));
          if (a.contains_cell(s.cell_of(y)))
            REQUIRE(pre.test(std::size_t(i)));
        }
      }
    }
  }
}

TEST_CASE("word image enclosure composes innermost letter first") {
  IfsSystem sys = make_system("psi_interval", 256);
  const GridSpace& s = sys.space;
  // indices = {1, 0} means outer map f2 after inner map f1:
  // x -> f2(f1(x)) = (x/2)/2 + 1/2.
  Word w;
  w.indices = {1, 0};
  IvSet img = word_image_enclosure(sys, w, IvSet{Iv{0.0, 1.0, false, false}});
  REQUIRE(img.size() == 1);
  REQUIRE(img[0].lo == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(img[0].hi == Catch::Approx(0.75).margin(1e-12));
}

TEST_CASE("word preimage cells invert the word image on centers") {
  IfsSystem sys = make_system("phi_interval", 256);
  const GridSpace& s = sys.space;
  Rng rng(29);
  for (int t = 0; t < 40; ++t) {
    Word w;
    int len = 1 + int(rng.below(3));
    for (int k = 0; k < len; ++k)
      w.indices.push_back(std::uint16_t(rng.below(sys.generators.size())));
    CompactSet a = oracles::random_set(s, rng);
    BitMask pre = word_preimage_cells(sys, w, regions_of_set(a));
    for (int i = 0; i < s.resolution(); ++i) {
      double y = s.center(i);
      for (std::size_t k = w.indices.size(); k-- > 0;)
        y = eval_map(sys.generators[w.indices[k]], s, y);
      if (a.contains_cell(s.cell_of(y))) REQUIRE(pre.test(std::size_t(i)));
    }
  }
}

TEST_CASE("rotation is an isometry and north south contracts near its sink") {
  GridSpace s = GridSpace::circle(4096);
  MapSpec rot = MapSpec::rotation(kGoldenAngle);
  Rng rng(31);
  for (int t = 0; t < 200; ++t) {
    double x = s.center(int(rng.below(4096)));
    double y = s.center(int(rng.below(4096)));
    double dx = s.metric(eval_map(rot, s, x), eval_map(rot, s, y));
    REQUIRE(dx == Catch::Approx(s.metric(x, y)).margin(1e-9));
  }
  MapSpec ns = MapSpec::north_south(0.0, 0.5, 0.3);
  double p = 0.0;
  REQUIRE(s.metric(eval_map(ns, s, p), p) <= 1e-12);
  for (double x : {0.01, 0.05, 0.95, 0.99}) {
    double moved = eval_map(ns, s, x);
    REQUIRE(s.metric(moved, p) < s.metric(x, p));
  }
}

TEST_CASE("max_lipschitz flags expansion") {
  REQUIRE(make_system("psi_interval").max_lipschitz() <= 0.5 + 1e-12);
  REQUIRE(make_system("shift2").max_lipschitz() <= 0.5 + 1e-12);
  REQUIRE(make_system("single_rotation").max_lipschitz() ==
          Catch::Approx(1.0).margin(1e-12));
  REQUIRE(make_system("circle_ns_rot").max_lipschitz() > 1.0);
  REQUIRE(make_system("shift2_inverse").max_lipschitz() > 1.0);
}

TEST_CASE("words exclude the identity") {
  Word w;
  REQUIRE(w.empty());
  IfsSystem sys = make_system("psi_interval", 64);
  REQUIRE_THROWS_AS(eval_word(w, sys, 0.5), std::invalid_argument);
  w.indices = {0};
  REQUIRE(eval_word(w, sys, 0.5) == Catch::Approx(0.25).margin(1e-12));
  w.indices = {7};
  REQUIRE_THROWS_AS(eval_word(w, sys, 0.5), std::out_of_range);
}
