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

#include <stdexcept>
#include <utility>
#include <vector>

#include "hyperifs/bitmask.hpp"
#include "hyperifs/interval_set.hpp"
#include "hyperifs/space.hpp"

namespace hyperifs {

// A nonempty set of grid cells standing in for a compact subset of the
// space. Emptiness is rejected at construction so the Hausdorff metric is
// total on these values.
class CompactSet {
 public:
  CompactSet(GridSpace space, BitMask cells)
      : space_(std::move(space)), cells_(std::move(cells)) {
    if (cells_.size() != std::size_t(space_.resolution()))
      throw std::invalid_argument("CompactSet: mask size mismatch");
    if (cells_.none())
      throw std::invalid_argument("CompactSet: empty cell set");
  }

  static CompactSet full(const GridSpace& s) {
    BitMask m(std::size_t(s.resolution()));
    m.set_all();
    return CompactSet(s, std::move(m));
  }

  static CompactSet singleton(const GridSpace& s, Point x) {
    BitMask m(std::size_t(s.resolution()));
    m.set(std::size_t(s.cell_of(x)));
    return CompactSet(s, std::move(m));
  }

  static CompactSet of_cell(const GridSpace& s, int cell) {
    BitMask m(std::size_t(s.resolution()));
    m.set(std::size_t(cell));
    return CompactSet(s, std::move(m));
  }

  // All cells whose region meets [lo, hi] (lift coordinates on the circle).
  static CompactSet from_interval(const GridSpace& s, double lo, double hi) {
    BitMask m(std::size_t(s.resolution()));
    mark_cells(s, Iv{lo, hi, false, false}, m);
    if (m.none()) m.set(std::size_t(s.cell_of(0.5 * (lo + hi))));
    return CompactSet(s, std::move(m));
  }

  // Closed metric ball: every cell whose center lies within r of x.
  static CompactSet ball(const GridSpace& s, Point x, double r) {
    BitMask m(std::size_t(s.resolution()));
    for (int i = 0; i < s.resolution(); ++i)
      if (s.metric(x, s.center(i)) <= r) m.set(std::size_t(i));
    if (m.none()) m.set(std::size_t(s.cell_of(x)));
    return CompactSet(s, std::move(m));
  }

  static CompactSet from_runs(
      const GridSpace& s, const std::vector<std::pair<int, int>>& runs) {
    BitMask m(std::size_t(s.resolution()));
    for (auto [start, len] : runs) {
      if (start < 0 || len <= 0 || start + len > s.resolution())
        throw std::invalid_argument("CompactSet: run out of range");
      m.set_range(std::size_t(start), std::size_t(start + len - 1));
    }
    return CompactSet(s, std::move(m));
  }

  const GridSpace& space() const { return space_; }
  const BitMask& cells() const { return cells_; }
  std::size_t count() const { return cells_.count(); }
  bool contains_cell(int i) const { return cells_.test(std::size_t(i)); }
  bool is_full() const { return count() == std::size_t(space_.resolution()); }

  std::vector<std::pair<int, int>> runs() const {
    std::vector<std::pair<int, int>> out;
    int start = -1, prev = -2;
    cells_.for_each_set([&](std::size_t i) {
      int c = int(i);
      if (c == prev + 1) {
        prev = c;
      } else {
        if (start >= 0) out.emplace_back(start, prev - start + 1);
        start = prev = c;
      }
    });
    if (start >= 0) out.emplace_back(start, prev - start + 1);
    return out;
  }

  bool operator==(const CompactSet& o) const {
    return space_ == o.space_ && cells_ == o.cells_;
  }
  bool operator!=(const CompactSet& o) const { return !(*this == o); }

  bool subset_of(const CompactSet& o) const {
    return cells_.subset_of(o.cells_);
  }

 private:
  GridSpace space_;
  BitMask cells_;
};

// min over cells of d(x, center(cell)).
inline double distance_point_to_set(const CompactSet& a, Point x) {
  const GridSpace& s = a.space();
  double best = s.diameter();
  a.cells().for_each_set([&](std::size_t i) {
    double d = s.metric(x, s.center(int(i)));
    if (d < best) best = d;
  });
  return best;
}

// sup over a of dist(., b). Realized through the same center-to-center
// metric as the brute-force definition, so the two agree bitwise.
inline double directed_hausdorff(const CompactSet& a, const CompactSet& b) {
  DistanceField f = a.space().distance_field(b.cells());
  double worst = 0.0;
  a.cells().for_each_set([&](std::size_t i) {
    if (f.dist[i] > worst) worst = f.dist[i];
  });
  return worst;
}

inline double hausdorff(const CompactSet& a, const CompactSet& b) {
  if (a.cells() == b.cells()) return 0.0;
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

// True when every cell of the space is within eps of the set.
inline bool covers_within(const CompactSet& a, double eps) {
  if (a.is_full()) return true;
  DistanceField f = a.space().distance_field(a.cells());
  for (double d : f.dist)
    if (d > eps) return false;
  return true;
}

inline double max_gap(const CompactSet& a) {
  if (a.is_full()) return 0.0;
  DistanceField f = a.space().distance_field(a.cells());
  double worst = 0.0;
  for (double d : f.dist) worst = std::max(worst, d);
  return worst;
}

// Closed r-neighborhood.
inline CompactSet dilate(const CompactSet& a, double r) {
  if (r <= 0.0 || a.is_full()) return a;
  DistanceField f = a.space().distance_field(a.cells());
  BitMask m(a.cells().size());
  for (std::size_t i = 0; i < f.dist.size(); ++i)
    if (f.dist[i] <= r) m.set(i);
  return CompactSet(a.space(), std::move(m));
}

// Cells farther than r from the complement. Falls back to the single
// deepest cell rather than going empty.
inline CompactSet erode(const CompactSet& a, double r) {
  if (a.is_full()) return a;
  BitMask comp = a.cells();
  comp.flip_all();
  DistanceField f = a.space().distance_field(comp);
  BitMask m(a.cells().size());
  std::size_t deepest = 0;
  double depth = -1.0;
  a.cells().for_each_set([&](std::size_t i) {
    if (f.dist[i] > r) m.set(i);
    if (f.dist[i] > depth) {
      depth = f.dist[i];
      deepest = i;
    }
  });
  if (m.none()) m.set(deepest);
  return CompactSet(a.space(), std::move(m));
}

// Removes the closed r-ball around x; keeps the set unchanged if that
// would empty it.
inline CompactSet bite(const CompactSet& a, Point x, double r) {
  const GridSpace& s = a.space();
  BitMask m = a.cells();
  a.cells().for_each_set([&](std::size_t i) {
    if (s.metric(x, s.center(int(i))) <= r) m.reset(i);
  });
  if (m.none()) return a;
  return CompactSet(s, std::move(m));
}

}  // namespace hyperifs
