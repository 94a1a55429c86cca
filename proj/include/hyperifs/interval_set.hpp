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
#include <cmath>
#include <vector>

#include "hyperifs/space.hpp"

namespace hyperifs {

// One interval with end openness tracked. On the circle the coordinates are
// lift coordinates (arbitrary reals, hi - lo <= 1 unless the arc is full);
// the represented arc is the projection mod 1.
struct Iv {
  double lo = 0.0, hi = 0.0;
  bool lo_open = false, hi_open = false;

  double length() const { return hi - lo; }
};

using IvSet = std::vector<Iv>;

// Boundary indices are computed as cell counts; values this close to an
// integer are snapped so that designed exact kisses (dyadic images meeting a
// region boundary) resolve deterministically instead of by rounding crumbs.
inline double snap_count(double t) {
  double r = std::round(t);
  return std::fabs(t - r) < 1e-6 ? r : t;
}

// Smallest i with i > t.
inline long above(double t) { return (long)std::floor(t) + 1; }
// Largest i with i <= t.
inline long at_most(double t) { return (long)std::floor(t); }
// Largest i with i < t.
inline long below(double t) {
  double f = std::floor(t);
  return f == t ? (long)f - 1 : (long)f;
}

// Marks every cell whose region intersects `v`. Regions are half-open
// [c - h/2, c + h/2) (top interval cell closed at 1), so an image that ends
// exactly on a region boundary marks only the side it actually touches.
inline void mark_cells(const GridSpace& s, const Iv& v, BitMask& out) {
  if (v.hi < v.lo) return;
  double h = s.cell_diameter();
  int n = s.resolution();
  if (s.kind() == SpaceKind::ShiftSpace) {
    long i = (long)std::llround(v.lo);
    for (; i <= (long)std::llround(v.hi); ++i)
      if (i >= 0 && i < n) out.set(std::size_t(i));
    return;
  }
  long imin = above(snap_count(v.lo / h - 0.5));
  double t = snap_count(v.hi / h + 0.5);
  long imax = v.hi_open ? below(t) : at_most(t);
  if (v.lo == v.hi && !v.lo_open && !v.hi_open) {
    // Degenerate point: it lies in exactly one region.
    imin = at_most(snap_count(v.lo / h + 0.5));
    imax = imin;
  }
  if (imax < imin) return;
  if (s.kind() == SpaceKind::Interval01) {
    long a = std::max(imin, 0L), b = std::min(imax, (long)n - 1);
    if (a <= b) out.set_range(std::size_t(a), std::size_t(b));
    return;
  }
  // Circle: wrap lift indices.
  if (imax - imin + 1 >= n) {
    out.set_all();
    return;
  }
  for (long i = imin; i <= imax; ++i) {
    long j = i % n;
    if (j < 0) j += n;
    out.set(std::size_t(j));
  }
}

// Same cell arithmetic as mark_cells but only queries the mask, without
// materializing the marked range.
// Marks the cells whose center lies inside the component. A component too
// narrow to contain any center marks the single cell nearest its midpoint
// (exact ties round to the lower cell). Orbit steps use this unbiased rule;
// enclosure marking stays with the outer rule in mark_cells.
inline void mark_centers(const GridSpace& s, const Iv& v, BitMask& out) {
  if (v.hi < v.lo) return;
  double h = s.cell_diameter();
  int n = s.resolution();
  if (s.kind() == SpaceKind::ShiftSpace) {
    long i = (long)std::llround(v.lo);
    for (; i <= (long)std::llround(v.hi); ++i)
      if (i >= 0 && i < n) out.set(std::size_t(i));
    return;
  }
  double tlo = snap_count(v.lo / h), thi = snap_count(v.hi / h);
  long imin = v.lo_open ? above(tlo) : (long)std::ceil(tlo);
  long imax = v.hi_open ? below(thi) : at_most(thi);
  if (imax < imin) {
    double mid = snap_count((v.lo + v.hi) / h) / 2.0;
    imin = imax = (long)std::ceil(mid - 0.5);
  }
  if (s.kind() == SpaceKind::Interval01) {
    long a = std::max(imin, 0L), b = std::min(imax, (long)n - 1);
    if (a <= b) out.set_range(std::size_t(a), std::size_t(b));
    return;
  }
  if (imax - imin + 1 >= n) {
    out.set_all();
    return;
  }
  for (long i = imin; i <= imax; ++i) {
    long j = i % n;
    if (j < 0) j += n;
    out.set(std::size_t(j));
  }
}

inline bool mask_intersects(const GridSpace& s, const Iv& v,
                            const BitMask& m) {
  if (v.hi < v.lo) return false;
  double h = s.cell_diameter();
  int n = s.resolution();
  if (s.kind() == SpaceKind::ShiftSpace) {
    long a = std::max(0L, (long)std::llround(v.lo));
    long b = std::min((long)n - 1, (long)std::llround(v.hi));
    return a <= b && m.any_in_range(std::size_t(a), std::size_t(b));
  }
  long imin = above(snap_count(v.lo / h - 0.5));
  double t = snap_count(v.hi / h + 0.5);
  long imax = v.hi_open ? below(t) : at_most(t);
  if (v.lo == v.hi && !v.lo_open && !v.hi_open) {
    imin = at_most(snap_count(v.lo / h + 0.5));
    imax = imin;
  }
  if (imax < imin) return false;
  if (s.kind() == SpaceKind::Interval01) {
    long a = std::max(imin, 0L), b = std::min(imax, (long)n - 1);
    return a <= b && m.any_in_range(std::size_t(a), std::size_t(b));
  }
  if (imax - imin + 1 >= n) return m.any();
  long a = imin % n;
  if (a < 0) a += n;
  long b = imax % n;
  if (b < 0) b += n;
  if (a <= b) return m.any_in_range(std::size_t(a), std::size_t(b));
  return m.any_in_range(0, std::size_t(b)) ||
         m.any_in_range(std::size_t(a), std::size_t(n) - 1);
}

// The region of cell i as a lift interval, clipped to [0,1] for Interval01.
inline Iv cell_region(const GridSpace& s, int i) {
  double h = s.cell_diameter();
  double c = s.center(i);
  switch (s.kind()) {
    case SpaceKind::Interval01: {
      Iv v{std::max(0.0, c - h / 2), std::min(1.0, c + h / 2), false, true};
      if (i == s.resolution() - 1) v.hi_open = false;
      return v;
    }
    case SpaceKind::Circle:
      return Iv{c - h / 2, c + h / 2, false, true};
    case SpaceKind::ShiftSpace:
      return Iv{c, c, false, false};
  }
  return Iv{};
}

inline void sort_ivset(IvSet& vs) {
  std::sort(vs.begin(), vs.end(), [](const Iv& a, const Iv& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
}

// Union-merge. Touching ends merge only when at least one side is closed;
// merging is a superset operation, safe for image enclosures.
inline void merge_ivset(IvSet& vs) {
  if (vs.size() <= 1) return;
  sort_ivset(vs);
  IvSet out;
  out.push_back(vs[0]);
  for (std::size_t k = 1; k < vs.size(); ++k) {
    Iv& prev = out.back();
    const Iv& cur = vs[k];
    bool joined = cur.lo < prev.hi ||
                  (cur.lo == prev.hi && (!cur.lo_open || !prev.hi_open));
    if (joined) {
      if (cur.hi > prev.hi) {
        prev.hi = cur.hi;
        prev.hi_open = cur.hi_open;
      } else if (cur.hi == prev.hi && !cur.hi_open) {
        prev.hi_open = false;
      }
      if (cur.lo == prev.lo && !cur.lo_open) prev.lo_open = false;
    } else {
      out.push_back(cur);
    }
  }
  vs.swap(out);
}

// Caps component count. `outward` merges nearest gaps (superset, for
// images); otherwise the shortest components are dropped (subset, for
// preimage regions feeding covered-cell accounting).
inline void cap_ivset(IvSet& vs, std::size_t cap, bool outward) {
  if (vs.size() <= cap) return;
  if (outward) {
    while (vs.size() > cap) {
      std::size_t best = 1;
      double gap = vs[1].lo - vs[0].hi;
      for (std::size_t k = 2; k < vs.size(); ++k)
        if (vs[k].lo - vs[k - 1].hi < gap) {
          gap = vs[k].lo - vs[k - 1].hi;
          best = k;
        }
      vs[best - 1].hi = vs[best].hi;
      vs[best - 1].hi_open = vs[best].hi_open;
      vs.erase(vs.begin() + best);
    }
  } else {
    std::sort(vs.begin(), vs.end(),
              [](const Iv& a, const Iv& b) { return a.length() > b.length(); });
    vs.resize(cap);
    sort_ivset(vs);
  }
}

// True when `inner` (half-open region or closed interval) fits inside some
// component, with a conservative shrink of `slop` on each component end.
// Circle components are lift intervals; inner.lo is renormalized into a
// window starting at the component.
inline bool iv_covers(const GridSpace& s, const IvSet& comps, double in_lo,
                      double in_hi, double slop) {
  for (const Iv& c : comps) {
    double lo = c.lo + slop, hi = c.hi - slop;
    if (s.kind() == SpaceKind::Circle) {
      if (c.length() >= 1.0) return true;
      double shift = std::floor((in_lo - lo) / 1.0);
      double a = in_lo - shift, b = in_hi - shift;
      // Candidate alignments of the wrapped region against the component.
      for (int k = -1; k <= 1; ++k)
        if (a + k >= lo && b + k <= hi) return true;
    } else {
      if (in_lo >= lo && in_hi <= hi) return true;
    }
  }
  return false;
}

// Rounds components to a coarse lattice for visited-state deduplication.
inline std::uint64_t ivset_key(const GridSpace& s, const IvSet& vs) {
  double q = s.cell_diameter() / 8;
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](long v) {
    h ^= std::uint64_t(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  };
  for (const Iv& v : vs) {
    double lo = v.lo, hi = v.hi;
    if (s.kind() == SpaceKind::Circle) {
      double base = std::floor(lo);
      lo -= base;
      hi -= base;
    }
    mix(std::lround(lo / q));
    mix(std::lround(hi / q));
  }
  return h;
}

}  // namespace hyperifs
