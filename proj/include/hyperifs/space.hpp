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

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperifs/bitmask.hpp"

namespace hyperifs {

// A point. For Interval01 and Circle this is a coordinate in [0,1]; for
// ShiftSpace it holds a word index exactly (indices are far below 2^53).
using Point = double;

enum class SpaceKind { Interval01, Circle, ShiftSpace };

inline std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::Interval01: return "interval01";
    case SpaceKind::Circle: return "circle";
    case SpaceKind::ShiftSpace: return "shift";
  }
  return "?";
}

// Distances from every cell to a set of cells, plus a realizing source cell.
// The distance stored is exactly metric(center(i), center(src[i])), so any
// consumer recomputing it gets a bit-identical value.
struct DistanceField {
  std::vector<double> dist;
  std::vector<std::int32_t> src;
};

// Uniform discretization of one of the three supported compact spaces.
//
// Cells are the Voronoi regions of a fixed grid of representative points:
//   Interval01  n points  i/(n-1), both endpoints included
//   Circle      n points  i/n, arc-length metric, wraparound
//   ShiftSpace  2^depth truncated words over symbols {1,2}; the word index
//               packs symbols MSB-first (symbol 1 -> bit 0, symbol 2 -> bit 1)
//
// Metric statements on ShiftSpace are exact for scales >= 2^(1-depth) and
// unasserted below (truncated tails are not represented).
class GridSpace {
 public:
  static GridSpace interval(int n) {
    if (n < 2) throw std::invalid_argument("interval resolution must be >= 2");
    GridSpace s;
    s.kind_ = SpaceKind::Interval01;
    s.n_ = n;
    s.h_ = 1.0 / (n - 1);
    return s;
  }

  static GridSpace circle(int n) {
    if (n < 3) throw std::invalid_argument("circle resolution must be >= 3");
    GridSpace s;
    s.kind_ = SpaceKind::Circle;
    s.n_ = n;
    s.h_ = 1.0 / n;
    return s;
  }

  static GridSpace shift_space(int depth) {
    if (depth < 1 || depth > 24)
      throw std::invalid_argument("shift depth must be in [1, 24]");
    GridSpace s;
    s.kind_ = SpaceKind::ShiftSpace;
    s.depth_ = depth;
    s.n_ = 1 << depth;
    s.h_ = std::exp2(-depth);
    return s;
  }

  SpaceKind kind() const { return kind_; }
  int resolution() const { return n_; }
  int depth() const { return depth_; }
  double cell_diameter() const { return h_; }
  bool connected() const { return kind_ != SpaceKind::ShiftSpace; }

  double diameter() const {
    switch (kind_) {
      case SpaceKind::Interval01: return 1.0;
      case SpaceKind::Circle: return 0.5;
      case SpaceKind::ShiftSpace: return 1.0;
    }
    return 0.0;
  }

  bool operator==(const GridSpace& o) const {
    return kind_ == o.kind_ && n_ == o.n_ && depth_ == o.depth_;
  }
  bool operator!=(const GridSpace& o) const { return !(*this == o); }

  Point center(int i) const {
    switch (kind_) {
      case SpaceKind::Interval01: return double(i) / (n_ - 1);
      case SpaceKind::Circle: return double(i) / n_;
      case SpaceKind::ShiftSpace: return double(i);
    }
    return 0.0;
  }

  int cell_of(Point x) const {
    switch (kind_) {
      case SpaceKind::Interval01: {
        int i = int(std::lround(x * (n_ - 1)));
        return i < 0 ? 0 : (i >= n_ ? n_ - 1 : i);
      }
      case SpaceKind::Circle: {
        double w = x - std::floor(x);
        int i = int(std::lround(w * n_));
        return i >= n_ ? 0 : i;
      }
      case SpaceKind::ShiftSpace: {
        long long i = (long long)x;
        if (i < 0 || i >= n_) throw std::invalid_argument("word index out of range");
        return int(i);
      }
    }
    return 0;
  }

  double metric(Point a, Point b) const {
    switch (kind_) {
      case SpaceKind::Interval01:
        return std::fabs(a - b);
      case SpaceKind::Circle: {
        double d = std::fabs(a - b);
        d -= std::floor(d);
        return d <= 0.5 ? d : 1.0 - d;
      }
      case SpaceKind::ShiftSpace: {
        std::uint64_t x = std::uint64_t(a) ^ std::uint64_t(b);
        if (x == 0) return 0.0;
        int hb = 63 - std::countl_zero(x);
        return std::exp2(hb + 1 - depth_);
      }
    }
    return 0.0;
  }

  // Longest common symbol prefix of two word indices (ShiftSpace only).
  int common_prefix(int a, int b) const {
    std::uint64_t x = std::uint64_t(a) ^ std::uint64_t(b);
    if (x == 0) return depth_;
    int hb = 63 - std::countl_zero(x);
    return depth_ - 1 - hb;
  }

  // Distance-transform pass: one scan pair for the chain/cycle adjacency of
  // Interval01/Circle, a longest-common-prefix table walk for ShiftSpace.
  DistanceField distance_field(const BitMask& a) const {
    DistanceField f;
    f.dist.assign(n_, 0.0);
    f.src.assign(n_, -1);
    if (a.none()) {
      for (int i = 0; i < n_; ++i) f.dist[i] = diameter() * 2;
      return f;
    }
    switch (kind_) {
      case SpaceKind::Interval01: scan_chain(a, f); break;
      case SpaceKind::Circle: scan_cycle(a, f); break;
      case SpaceKind::ShiftSpace: scan_prefixes(a, f); break;
    }
    for (int i = 0; i < n_; ++i) f.dist[i] = metric(center(i), center(f.src[i]));
    return f;
  }

 private:
  void scan_chain(const BitMask& a, DistanceField& f) const {
    long last = -(long)n_ * 4;
    for (int i = 0; i < n_; ++i) {
      if (a.test(i)) last = i;
      f.src[i] = std::int32_t(last);
    }
    long next = (long)n_ * 8;
    for (int i = n_ - 1; i >= 0; --i) {
      if (a.test(i)) next = i;
      long l = f.src[i];
      long pick = (i - l) <= (next - i) ? l : next;
      // Equal hop counts can realize unequal float distances, because the
      // centers are not spaced bit-uniformly; resolve ties by value.
      if (l >= 0 && next < n_ && (i - l) == (next - i) &&
          metric(center(int(next)), center(i)) <
              metric(center(i), center(int(l))))
        pick = next;
      f.src[i] = std::int32_t(pick);
    }
    for (int i = 0; i < n_; ++i) {
      if (f.src[i] < 0 || f.src[i] >= n_) f.src[i] = std::int32_t(a.first_set());
    }
  }

  void scan_cycle(const BitMask& a, DistanceField& f) const {
    // Unrolled double scan; hop counts compare circular distances, and the
    // final distance is realized through metric() afterwards.
    std::vector<long> fwd(n_), bwd(n_);
    long last = -(long)n_ * 4;
    for (int r = 0; r < 2; ++r)
      for (int i = 0; i < n_; ++i) {
        if (a.test(i)) last = i + (long)r * n_;
        if (r == 1) fwd[i] = i + n_ - last;
      }
    long next = (long)n_ * 8;
    for (int r = 1; r >= 0; --r)
      for (int i = n_ - 1; i >= 0; --i) {
        if (a.test(i)) next = i + (long)r * n_;
        if (r == 0) bwd[i] = next - i;
      }
    for (int i = 0; i < n_; ++i) {
      long hop_f = fwd[i], hop_b = bwd[i];
      auto wrap = [&](long j) {
        j %= n_;
        return j < 0 ? j + n_ : j;
      };
      long j;
      if (hop_f < hop_b) {
        j = wrap(i - hop_f);
      } else if (hop_b < hop_f) {
        j = wrap(i + hop_b);
      } else {
        // Equal hop counts can realize unequal float distances; resolve
        // ties by value.
        long jf = wrap(i - hop_f), jb = wrap(i + hop_b);
        j = metric(center(int(jb)), center(i)) <
                    metric(center(i), center(int(jf)))
                ? jb
                : jf;
      }
      f.src[i] = std::int32_t(j);
    }
  }

  void scan_prefixes(const BitMask& a, DistanceField& f) const {
    // reps[L] maps each length-L prefix to a member of `a` with that prefix.
    std::vector<std::vector<std::int32_t>> reps(depth_ + 1);
    reps[depth_].assign(n_, -1);
    a.for_each_set([&](std::size_t i) { reps[depth_][i] = std::int32_t(i); });
    for (int L = depth_ - 1; L >= 0; --L) {
      reps[L].assign(std::size_t(1) << L, -1);
      for (std::size_t p = 0; p < reps[L].size(); ++p) {
        std::int32_t l = reps[L + 1][2 * p], r = reps[L + 1][2 * p + 1];
        reps[L][p] = l >= 0 ? l : r;
      }
    }
    for (int i = 0; i < n_; ++i) {
      for (int L = depth_; L >= 0; --L) {
        std::int32_t rep = reps[L][std::size_t(i) >> (depth_ - L)];
        if (rep >= 0) {
          f.src[i] = rep;
          break;
        }
      }
    }
  }

  SpaceKind kind_ = SpaceKind::Interval01;
  int n_ = 2;
  int depth_ = 0;
  double h_ = 1.0;
};

}  // namespace hyperifs
