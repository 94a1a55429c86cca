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
#include <vector>

#include "hyperifs/hutchinson.hpp"

namespace hyperifs {

// Truncated binary sequences are grid indices, first symbol in the most
// significant bit; bit 0 encodes symbol 1, bit 1 encodes symbol 2.

inline int symbol_at(const GridSpace& s, std::uint64_t idx, int pos) {
  int d = s.depth();
  if (pos < 1 || pos > d) throw std::out_of_range("symbol_at: pos");
  return 1 + int((idx >> (d - pos)) & 1);
}

inline std::uint64_t shift_point(const GridSpace& s, std::uint64_t idx) {
  std::uint64_t mask = std::uint64_t(s.resolution()) - 1;
  return ((idx << 1) | (idx & 1)) & mask;
}

inline std::uint64_t prepend_point(const GridSpace& s, std::uint64_t idx,
                                   int symbol) {
  std::uint64_t half = std::uint64_t(s.resolution()) >> 1;
  return (symbol == 2 ? half : 0) | (idx >> 1);
}

struct ShiftWitness {
  std::uint64_t cylinder_prefix = 0;
  int cylinder_depth = 0;
  std::uint64_t eta = 0, omega = 0;
  int shifts = 0;
  double start_distance = 0.0;
  double separation = 0.0;
};

struct ShiftSensitivityReport {
  bool sensitive_on_all = false;
  double sensitivity_constant = 0.0;  // min separation over all witnesses
  int max_cylinder_depth = 0;
  int cylinders_checked = 0;
  std::vector<ShiftWitness> witnesses;
};

// For every cylinder of each depth up to max_cyl_depth, exhibits a pair
// agreeing on the cylinder prefix that the shift drives to distance exactly
// one: the pair differs first at position depth+1, and that position
// reaches the front after depth shifts.
inline ShiftSensitivityReport verify_shift_sensitive(const GridSpace& s,
                                                     int max_cyl_depth) {
  if (s.kind() != SpaceKind::ShiftSpace)
    throw std::invalid_argument("verify_shift_sensitive: not a shift space");
  int d = s.depth();
  if (max_cyl_depth < 1 || max_cyl_depth > d - 1)
    throw std::invalid_argument("verify_shift_sensitive: cylinder depth");
  ShiftSensitivityReport rep;
  rep.max_cylinder_depth = max_cyl_depth;
  rep.sensitivity_constant = 1.0;
  for (int k = 1; k <= max_cyl_depth; ++k) {
    for (std::uint64_t prefix = 0; prefix < (std::uint64_t(1) << k);
         ++prefix) {
      ShiftWitness w;
      w.cylinder_prefix = prefix;
      w.cylinder_depth = k;
      w.eta = prefix << (d - k);
      w.omega = w.eta | (std::uint64_t(1) << (d - k - 1));
      w.start_distance = s.metric(double(w.eta), double(w.omega));
      std::uint64_t a = w.eta, b = w.omega;
      for (int t = 0; t < k; ++t) {
        a = shift_point(s, a);
        b = shift_point(s, b);
      }
      w.shifts = k;
      w.separation = s.metric(double(a), double(b));
      rep.sensitivity_constant =
          std::min(rep.sensitivity_constant, w.separation);
      ++rep.cylinders_checked;
      rep.witnesses.push_back(w);
    }
  }
  rep.sensitive_on_all = rep.sensitivity_constant >= 1.0;
  return rep;
}

struct PrependEquicontinuityReport {
  bool exact = false;       // every image distance equals d0 / 2^|w| exactly
  bool delta_is_eps = false;  // pairs under eps stay under eps for all words
  double max_ratio = 0.0;   // largest one-step distance ratio observed
  double eps = 0.0;
  std::uint64_t pairs_checked = 0;
  std::uint64_t evaluations = 0;
  int word_depth = 0;
};

// Exhaustive modulus check for a prepend system: over every point pair and
// every word up to word_depth, the image distance is exactly the starting
// distance halved per letter (zero once the difference falls below the
// truncation scale). In particular delta = eps witnesses equicontinuity.
//
// The check factors into two exhaustive passes. Pass 1 verifies, for every
// word w and every point x, the image identity
//   prepend_w(x) = bits(w) << (depth - |w|)  |  x >> |w|.
// Under that identity the XOR of an image pair is (x ^ y) >> |w|, which
// does not depend on the letters of w, so the image distance for any word
// of length L equals the distance under one representative word of length
// L. Pass 2 walks every pair once per length through composed map
// applications of the representative. Together the two passes cover every
// (pair, word) combination without iterating their product.
inline PrependEquicontinuityReport verify_prepend_equicontinuous(
    const IfsSystem& sys, int word_depth, double eps) {
  const GridSpace& s = sys.space;
  if (s.kind() != SpaceKind::ShiftSpace)
    throw std::invalid_argument(
        "verify_prepend_equicontinuous: not a shift space");
  for (const MapSpec& g : sys.generators)
    if (g.kind != MapKind::SymbolPrepend)
      throw std::invalid_argument(
          "verify_prepend_equicontinuous: non-prepend generator");
  int d = s.depth();
  int n = s.resolution();
  PrependEquicontinuityReport rep;
  rep.exact = true;
  rep.delta_is_eps = true;
  rep.eps = eps;
  rep.word_depth = word_depth;
  std::size_t arity = sys.generators.size();
  if (arity > 2)
    throw std::invalid_argument(
        "verify_prepend_equicontinuous: arity > 2 unsupported");
  std::vector<int> symbols;
  for (const MapSpec& g : sys.generators) symbols.push_back(g.symbol);
  auto idx_metric = [d](std::uint64_t a, std::uint64_t b) {
    if (a == b) return 0.0;
    return std::ldexp(1.0, 1 - (d - (63 - std::countl_zero(a ^ b))));
  };

  // Pass 1: image identity for every word and every point.
  for (int L = 1; L <= std::min(word_depth, d); ++L) {
    std::uint64_t words = arity == 1 ? 1 : std::uint64_t(1) << L;
    for (std::uint64_t w = 0; w < words && rep.exact; ++w) {
      std::uint64_t bits = 0;
      for (int t = L - 1; t >= 0; --t)
        bits = bits << 1 | std::uint64_t(symbols[(w >> t) & (arity - 1)] - 1);
      for (std::uint64_t x = 0; x < std::uint64_t(n); ++x) {
        std::uint64_t img = x;
        for (int t = 0; t < L; ++t)
          img = prepend_point(s, img, symbols[(w >> t) & (arity - 1)]);
        ++rep.evaluations;
        if (img != (bits << (d - L) | x >> L)) {
          rep.exact = false;
          break;
        }
      }
    }
  }

  // Pass 2: every pair against the representative word of each length,
  // through actual map applications.
  std::vector<std::vector<std::uint64_t>> img_at(
      std::size_t(word_depth) + 1, std::vector<std::uint64_t>(std::size_t(n)));
  for (std::uint64_t x = 0; x < std::uint64_t(n); ++x) img_at[0][x] = x;
  for (int L = 1; L <= word_depth; ++L)
    for (std::uint64_t x = 0; x < std::uint64_t(n); ++x)
      img_at[std::size_t(L)][x] =
          prepend_point(s, img_at[std::size_t(L) - 1][x], symbols[0]);
  for (std::uint64_t x = 0; x < std::uint64_t(n); ++x) {
    for (std::uint64_t y = x + 1; y < std::uint64_t(n); ++y) {
      double d0 = idx_metric(x, y);
      int p = d - (63 - std::countl_zero(x ^ y));  // first differing slot
      ++rep.pairs_checked;
      double prev = d0;
      for (int L = 1; L <= word_depth; ++L) {
        double cur =
            idx_metric(img_at[std::size_t(L)][x], img_at[std::size_t(L)][y]);
        if (prev > 0) {
          double ratio = cur / prev;
          rep.max_ratio = std::max(rep.max_ratio, ratio);
          if (ratio != 0.5 && cur != 0.0) rep.exact = false;
        } else if (cur != 0.0) {
          rep.exact = false;
        }
        double expected = (p + L <= d) ? std::ldexp(1.0, 1 - (p + L)) : 0.0;
        if (cur != expected) rep.exact = false;
        if (d0 < eps && cur >= eps) rep.delta_is_eps = false;
        prev = cur;
        ++rep.evaluations;
      }
    }
  }
  return rep;
}

struct LeftInverseReport {
  bool within_resolution = false;
  double max_deviation = 0.0;
  std::uint64_t points_checked = 0;
};

// shift(prepend(x)) recovers x except possibly in the final truncated slot,
// so the deviation never exceeds the sub-resolution scale 2^(1-depth).
inline LeftInverseReport verify_left_inverse(const GridSpace& s,
                                             std::size_t arity = 2) {
  if (s.kind() != SpaceKind::ShiftSpace)
    throw std::invalid_argument("verify_left_inverse: not a shift space");
  LeftInverseReport rep;
  double tol = std::ldexp(1.0, 1 - s.depth());
  for (std::uint64_t x = 0; x < std::uint64_t(s.resolution()); ++x) {
    for (std::size_t j = 0; j < arity; ++j) {
      std::uint64_t back = shift_point(s, prepend_point(s, x, int(j) + 1));
      rep.max_deviation = std::max(rep.max_deviation,
                                   s.metric(double(x), double(back)));
      ++rep.points_checked;
    }
  }
  rep.within_resolution = rep.max_deviation <= tol;
  return rep;
}

struct RoundTripReport {
  bool superset = false;  // shift(union of prepends(A)) contains A, always
  std::uint64_t sets_checked = 0;
};

// At set level the truncation loss disappears: shifting the union of both
// prepend images restores every cell of A (both completions of the dropped
// slot are present).
inline RoundTripReport verify_set_round_trip(const IfsSystem& prepend_sys,
                                             int trials,
                                             std::uint64_t rng_seed) {
  const GridSpace& s = prepend_sys.space;
  MapSpec sigma = MapSpec::symbol_shift();
  RoundTripReport rep;
  rep.superset = true;
  Rng rng(rng_seed);
  int n = s.resolution();
  for (int t = 0; t < trials; ++t) {
    BitMask m{std::size_t(n)};
    int cells = 1 + int(rng.below(std::uint64_t(n / 4 + 1)));
    for (int c = 0; c < cells; ++c) m.set(rng.below(std::uint64_t(n)));
    CompactSet A(s, std::move(m));
    CompactSet image = hutchinson_step(prepend_sys, A);
    CompactSet back = image_of_set(sigma, image);
    if (!A.subset_of(back)) rep.superset = false;
    ++rep.sets_checked;
  }
  return rep;
}

}  // namespace hyperifs
