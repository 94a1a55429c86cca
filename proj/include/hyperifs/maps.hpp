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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperifs/compact_set.hpp"
#include "hyperifs/interval_set.hpp"
#include "hyperifs/space.hpp"

namespace hyperifs {

enum class MapKind {
  PiecewiseLinear,  // interval maps given by breakpoints and values
  Rotation,         // circle rotation by a fixed angle
  NorthSouth,       // circle map with one attracting and one repelling pole
  SymbolPrepend,    // prepend a fixed symbol, truncating the tail
  SymbolShift,      // drop the leading symbol (set-level inverse of prepend)
};

inline const char* to_string(MapKind k) {
  switch (k) {
    case MapKind::PiecewiseLinear: return "piecewise_linear";
    case MapKind::Rotation: return "rotation";
    case MapKind::NorthSouth: return "north_south";
    case MapKind::SymbolPrepend: return "symbol_prepend";
    case MapKind::SymbolShift: return "symbol_shift";
  }
  return "?";
}

// One generator map. Immutable value; construct through the factories so the
// domain kind and Lipschitz bound are always consistent with the parameters.
struct MapSpec {
  MapKind kind = MapKind::Rotation;
  SpaceKind domain = SpaceKind::Circle;
  double lipschitz_bound = 1.0;
  std::string label;

  // PiecewiseLinear: strictly increasing breakpoints spanning [0,1] and the
  // value at each breakpoint.
  std::vector<double> breakpoints, values;
  // Rotation.
  double angle = 0.0;
  // NorthSouth: fixed points p (attracting) and q = p + 1/2 (repelling),
  // pull strength s in (0,1). `invert` evaluates the inverse map, which has
  // the roles of p and q exchanged.
  double p = 0.0, q = 0.5, s = 0.3;
  bool invert = false;
  // SymbolPrepend: symbol in {1, 2}.
  int symbol = 1;

  static MapSpec piecewise_linear(std::vector<double> bk, std::vector<double> v,
                                  std::string label = {}) {
    if (bk.size() < 2 || bk.size() != v.size() || bk.front() != 0.0 ||
        bk.back() != 1.0)
      throw std::invalid_argument("piecewise_linear: bad breakpoints");
    for (std::size_t i = 1; i < bk.size(); ++i)
      if (bk[i] <= bk[i - 1])
        throw std::invalid_argument("piecewise_linear: not increasing");
    MapSpec m;
    m.kind = MapKind::PiecewiseLinear;
    m.domain = SpaceKind::Interval01;
    m.breakpoints = std::move(bk);
    m.values = std::move(v);
    double lip = 0.0;
    for (std::size_t i = 1; i < m.breakpoints.size(); ++i)
      lip = std::max(lip, std::fabs((m.values[i] - m.values[i - 1]) /
                                    (m.breakpoints[i] - m.breakpoints[i - 1])));
    m.lipschitz_bound = lip;
    m.label = std::move(label);
    return m;
  }

  static MapSpec rotation(double angle, std::string label = {}) {
    MapSpec m;
    m.kind = MapKind::Rotation;
    m.domain = SpaceKind::Circle;
    m.angle = angle - std::floor(angle);
    m.lipschitz_bound = 1.0;
    m.label = std::move(label);
    return m;
  }

  static MapSpec north_south(double p, double q, double s, bool invert = false,
                             std::string label = {}) {
    double rel = q - p - std::floor(q - p);
    if (std::fabs(rel - 0.5) > 1e-9)
      throw std::invalid_argument("north_south: q must be antipodal to p");
    if (s <= 0.0 || s >= 1.0)
      throw std::invalid_argument("north_south: s must be in (0,1)");
    MapSpec m;
    m.kind = MapKind::NorthSouth;
    m.domain = SpaceKind::Circle;
    m.p = p - std::floor(p);
    m.q = m.p + 0.5 - std::floor(m.p + 0.5);
    m.s = s;
    m.invert = invert;
    m.lipschitz_bound = invert ? 1.0 / (1.0 - s) : 1.0 + s;
    m.label = std::move(label);
    return m;
  }

  static MapSpec symbol_prepend(int symbol, std::string label = {}) {
    if (symbol != 1 && symbol != 2)
      throw std::invalid_argument("symbol_prepend: symbol must be 1 or 2");
    MapSpec m;
    m.kind = MapKind::SymbolPrepend;
    m.domain = SpaceKind::ShiftSpace;
    m.symbol = symbol;
    m.lipschitz_bound = 0.5;
    m.label = std::move(label);
    return m;
  }

  static MapSpec symbol_shift(std::string label = {}) {
    MapSpec m;
    m.kind = MapKind::SymbolShift;
    m.domain = SpaceKind::ShiftSpace;
    m.lipschitz_bound = 2.0;
    m.label = std::move(label);
    return m;
  }
};

namespace detail {

// Displacement profile of the pole map in coordinates centered at p:
// u - (s/2pi) sin(2pi u). Strictly increasing for s < 1, fixes 0 and 1/2,
// and commutes with integer translation, so it lifts degree-1.
inline double ns_profile(double u, double s) {
  return u - (s / (2 * std::numbers::pi)) * std::sin(2 * std::numbers::pi * u);
}

inline double ns_profile_inverse(double t, double s) {
  double k = std::floor(t);
  double r = t - k;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (ns_profile(mid, s) < r)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15) break;
  }
  return k + 0.5 * (lo + hi);
}

}  // namespace detail

// Lift evaluation: on the circle the input and output are lift coordinates
// (no wrapping), which keeps interval images exact under composition.
inline double eval_lift(const MapSpec& m, double x) {
  switch (m.kind) {
    case MapKind::Rotation:
      return x + m.angle;
    case MapKind::NorthSouth: {
      double u = x - m.p;
      double v = m.invert ? detail::ns_profile_inverse(u, m.s)
                          : detail::ns_profile(u, m.s);
      return m.p + v;
    }
    default:
      throw std::logic_error("eval_lift: not a circle map");
  }
}

inline double eval_map(const MapSpec& m, Point x) {
  switch (m.kind) {
    case MapKind::PiecewiseLinear: {
      double t = std::min(1.0, std::max(0.0, x));
      std::size_t i = 1;
      while (i + 1 < m.breakpoints.size() && t > m.breakpoints[i]) ++i;
      double a = m.breakpoints[i - 1], b = m.breakpoints[i];
      double va = m.values[i - 1], vb = m.values[i];
      return va + (t - a) * (vb - va) / (b - a);
    }
    case MapKind::Rotation:
    case MapKind::NorthSouth: {
      double y = eval_lift(m, x);
      return y - std::floor(y);
    }
    case MapKind::SymbolPrepend:
    case MapKind::SymbolShift:
      throw std::logic_error("eval_map: symbol maps need the space depth");
  }
  return x;
}

// Symbol maps act on word indices and need the space depth.
inline double eval_map(const MapSpec& m, const GridSpace& s, Point x) {
  if (m.kind == MapKind::SymbolPrepend) {
    std::uint64_t idx = (std::uint64_t)std::llround(x);
    std::uint64_t half = std::uint64_t(1) << (s.depth() - 1);
    return double((m.symbol == 2 ? half : 0) + (idx >> 1));
  }
  if (m.kind == MapKind::SymbolShift) {
    std::uint64_t idx = (std::uint64_t)std::llround(x);
    std::uint64_t mask = (std::uint64_t(1) << s.depth()) - 1;
    return double(((idx << 1) | (idx & 1)) & mask);
  }
  return eval_map(m, x);
}

// Exact image of one interval, appended to `out`. Circle intervals are lift
// intervals; interval maps are split at breakpoints so each monotone piece
// maps to an interval with endpoint-evaluated bounds.
inline void map_interval(const MapSpec& m, const GridSpace& s, const Iv& v,
                         IvSet& out) {
  switch (m.kind) {
    case MapKind::PiecewiseLinear: {
      for (std::size_t i = 1; i < m.breakpoints.size(); ++i) {
        double a = std::max(v.lo, m.breakpoints[i - 1]);
        double b = std::min(v.hi, m.breakpoints[i]);
        if (a > b) continue;
        if (a == b && v.lo != v.hi) continue;
        double fa = eval_map(m, a), fb = eval_map(m, b);
        bool a_open = (a == v.lo) && v.lo_open;
        bool b_open = (b == v.hi) && v.hi_open;
        Iv img;
        if (fa <= fb) {
          img = Iv{fa, fb, a_open, b_open};
        } else {
          img = Iv{fb, fa, b_open, a_open};
        }
        out.push_back(img);
      }
      return;
    }
    case MapKind::Rotation:
      out.push_back(Iv{v.lo + m.angle, v.hi + m.angle, v.lo_open, v.hi_open});
      return;
    case MapKind::NorthSouth: {
      double fl = eval_lift(m, v.lo), fh = eval_lift(m, v.hi);
      // The inverse endpoint solve is iterative; widen by a hair so the
      // enclosure stays a superset of the true image.
      double slop = m.invert ? 1e-12 : 0.0;
      out.push_back(Iv{fl - slop, fh + slop, slop > 0 ? false : v.lo_open,
                       slop > 0 ? false : v.hi_open});
      return;
    }
    case MapKind::SymbolPrepend: {
      long lo = std::lround(v.lo), hi = std::lround(v.hi);
      long half = 1L << (s.depth() - 1);
      long base = (m.symbol - 1) * half;
      out.push_back(Iv{double(base + (lo >> 1)), double(base + (hi >> 1)),
                       false, false});
      return;
    }
    case MapKind::SymbolShift: {
      // Set-level shift: freed last coordinate takes both symbols, so the
      // image of a run of indices is contiguous within each half.
      long lo = std::lround(v.lo), hi = std::lround(v.hi);
      long half = 1L << (s.depth() - 1);
      long a = lo, b = std::min(hi, half - 1);
      if (a <= b) out.push_back(Iv{double(2 * a), double(2 * b + 1), false, false});
      a = std::max(lo, half), b = hi;
      if (a <= b)
        out.push_back(Iv{double(2 * (a - half)), double(2 * (b - half) + 1),
                         false, false});
      return;
    }
  }
}

// Exact preimage of one interval, appended to `out`. Superset-safe: iterative
// solves widen outward.
inline void preimage_interval(const MapSpec& m, const GridSpace& s, const Iv& v,
                              IvSet& out) {
  switch (m.kind) {
    case MapKind::PiecewiseLinear: {
      for (std::size_t i = 1; i < m.breakpoints.size(); ++i) {
        double a = m.breakpoints[i - 1], b = m.breakpoints[i];
        double va = m.values[i - 1], vb = m.values[i];
        double lo = std::min(va, vb), hi = std::max(va, vb);
        double clo = std::max(lo, v.lo), chi = std::min(hi, v.hi);
        if (clo > chi) continue;
        if (va == vb) {
          out.push_back(Iv{a, b, false, false});
          continue;
        }
        double slope = (vb - va) / (b - a);
        double x1 = a + (clo - va) / slope;
        double x2 = a + (chi - va) / slope;
        if (x1 > x2) std::swap(x1, x2);
        out.push_back(Iv{std::max(a, x1), std::min(b, x2), false, false});
      }
      return;
    }
    case MapKind::Rotation:
      out.push_back(Iv{v.lo - m.angle, v.hi - m.angle, v.lo_open, v.hi_open});
      return;
    case MapKind::NorthSouth: {
      MapSpec inv = m;
      inv.invert = !m.invert;
      map_interval(inv, s, v, out);
      return;
    }
    case MapKind::SymbolPrepend: {
      long lo = std::lround(v.lo), hi = std::lround(v.hi);
      long half = 1L << (s.depth() - 1);
      long base = (m.symbol - 1) * half;
      long a = std::max(lo, base), b = std::min(hi, base + half - 1);
      if (a > b) return;
      out.push_back(
          Iv{double(2 * (a - base)), double(2 * (b - base) + 1), false, false});
      return;
    }
    case MapKind::SymbolShift: {
      long lo = std::lround(v.lo), hi = std::lround(v.hi);
      long half = 1L << (s.depth() - 1);
      long a = lo >> 1, b = hi >> 1;
      out.push_back(Iv{double(a), double(b), false, false});
      out.push_back(Iv{double(a + half), double(b + half), false, false});
      return;
    }
  }
}

// A composition in the generator semigroup, stored as zero-based generator
// indices. indices[0] is the outermost (last applied) map; the word acts as
// g[idx[0]] after g[idx[1]] after ... after g[idx.back()].
struct Word {
  std::vector<std::uint16_t> indices;

  std::size_t length() const { return indices.size(); }
  bool empty() const { return indices.empty(); }

  // w extended by one more innermost letter.
  Word inner(std::uint16_t g) const {
    Word w = *this;
    w.indices.push_back(g);
    return w;
  }
  // w extended by one more outermost letter.
  Word outer(std::uint16_t g) const {
    Word w;
    w.indices.reserve(indices.size() + 1);
    w.indices.push_back(g);
    w.indices.insert(w.indices.end(), indices.begin(), indices.end());
    return w;
  }

  bool operator==(const Word& o) const { return indices == o.indices; }
  bool operator<(const Word& o) const {
    if (indices.size() != o.indices.size())
      return indices.size() < o.indices.size();
    return indices < o.indices;
  }

  std::string str() const {
    std::string s;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (k) s += '.';
      s += std::to_string(indices[k]);
    }
    return s;
  }
};

struct IfsSystem {
  GridSpace space;
  std::vector<MapSpec> generators;
  std::string name;

  IfsSystem(GridSpace sp, std::vector<MapSpec> gens, std::string nm = {})
      : space(std::move(sp)), generators(std::move(gens)), name(std::move(nm)) {
    if (generators.empty())
      throw std::invalid_argument("IfsSystem: no generators");
    for (const auto& g : generators)
      if (g.domain != space.kind())
        throw std::invalid_argument("IfsSystem: generator domain mismatch");
  }

  std::size_t arity() const { return generators.size(); }

  double max_lipschitz() const {
    double l = 0.0;
    for (const auto& g : generators) l = std::max(l, g.lipschitz_bound);
    return l;
  }
};

inline Point eval_word(const Word& w, const IfsSystem& sys, Point x) {
  if (w.empty()) throw std::invalid_argument("eval_word: empty word");
  for (std::size_t k = w.indices.size(); k-- > 0;) {
    std::uint16_t i = w.indices[k];
    if (i >= sys.generators.size())
      throw std::out_of_range("eval_word: generator index");
    x = eval_map(sys.generators[i], sys.space, x);
  }
  return x;
}

// Merged region intervals of the set's runs (lift coordinates on circle).
inline IvSet regions_of_set(const CompactSet& a) {
  const GridSpace& s = a.space();
  IvSet out;
  for (auto [start, len] : a.runs()) {
    Iv first = cell_region(s, start);
    Iv last = cell_region(s, start + len - 1);
    out.push_back(Iv{first.lo, last.hi, first.lo_open, last.hi_open});
  }
  merge_ivset(out);
  return out;
}

inline constexpr std::size_t kEnclosureCap = 96;

// One map applied to an interval family, merged and capped.
inline IvSet apply_map(const MapSpec& m, const GridSpace& s, const IvSet& vs,
                       bool preimage) {
  IvSet out;
  for (const Iv& v : vs) {
    if (preimage)
      preimage_interval(m, s, v, out);
    else
      map_interval(m, s, v, out);
  }
  merge_ivset(out);
  // Image enclosures must stay supersets (merge outward); preimage families
  // feed covered-cell accounting where dropping components is the safe side.
  cap_ivset(out, kEnclosureCap, !preimage);
  return out;
}

// Image of the interval family under the full word (innermost letter first).
inline IvSet word_image_enclosure(const IfsSystem& sys, const Word& w,
                                  IvSet vs) {
  for (std::size_t k = w.indices.size(); k-- > 0;)
    vs = apply_map(sys.generators[w.indices[k]], sys.space, vs, false);
  return vs;
}

// Preimage of the interval family under the full word (outermost letter
// peeled first).
inline IvSet word_preimage_enclosure(const IfsSystem& sys, const Word& w,
                                     IvSet vs) {
  for (std::uint16_t i : w.indices)
    vs = apply_map(sys.generators[i], sys.space, vs, true);
  return vs;
}

// Grid image of a set under one map: exact interval images of the occupied
// regions, marked back onto the grid. Superset-safe and monotone.
inline CompactSet image_of_set(const MapSpec& m, const CompactSet& a) {
  const GridSpace& s = a.space();
  IvSet imgs;
  for (const Iv& r : regions_of_set(a)) map_interval(m, s, r, imgs);
  merge_ivset(imgs);
  BitMask out(std::size_t(s.resolution()));
  for (const Iv& v : imgs) mark_cells(s, v, out);
  return CompactSet(s, std::move(out));
}

// Grid image of a set under a word, via the exact enclosure of the occupied
// regions.
inline CompactSet image_of_set(const IfsSystem& sys, const Word& w,
                               const CompactSet& a) {
  IvSet imgs = word_image_enclosure(sys, w, regions_of_set(a));
  BitMask out(std::size_t(sys.space.resolution()));
  for (const Iv& v : imgs) mark_cells(sys.space, v, out);
  return CompactSet(sys.space, std::move(out));
}

// Cells whose grid image under m meets `a`. May legitimately be empty, so
// this returns a bare mask rather than a CompactSet.
inline BitMask preimage_of_set(const MapSpec& m, const CompactSet& a) {
  const GridSpace& s = a.space();
  IvSet pre;
  for (const Iv& r : regions_of_set(a)) preimage_interval(m, s, r, pre);
  merge_ivset(pre);
  BitMask out(std::size_t(s.resolution()));
  for (const Iv& v : pre) mark_cells(s, v, out);
  return out;
}

// Cells whose region meets the word-preimage of the target regions.
inline BitMask word_preimage_cells(const IfsSystem& sys, const Word& w,
                                   const IvSet& target) {
  IvSet pre = word_preimage_enclosure(sys, w, target);
  BitMask out(std::size_t(sys.space.resolution()));
  for (const Iv& v : pre) mark_cells(sys.space, v, out);
  return out;
}

}  // namespace hyperifs
