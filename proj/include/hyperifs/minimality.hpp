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

#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hyperifs/compact_set.hpp"
#include "hyperifs/hutchinson.hpp"
#include "hyperifs/maps.hpp"

namespace hyperifs {

// -------------------------------------------------------------------------
// Breadth-first search over semigroup words, tracking the exact interval
// enclosure of a start region under each word. Words grow by outermost
// letters, so a node's enclosure is one map application away from its
// parent's. Deterministic: level order, generator index order, and a
// visited-key set over quantized enclosures.

class WordEnclosureSearch {
 public:
  WordEnclosureSearch(const IfsSystem& sys, IvSet start, std::size_t budget)
      : sys_(sys), budget_(budget) {
    nodes_.push_back(Node{std::move(start), -1, 0});
    level_begin_ = 0;
    level_end_ = 1;
    seen_.insert(ivset_key(sys_.space, nodes_[0].st));
  }

  // Expands one more level. Returns false when the frontier is empty or the
  // node budget is exhausted.
  bool expand() {
    if (level_begin_ == level_end_ || nodes_.size() >= budget_) return false;
    std::size_t next_begin = nodes_.size();
    for (std::size_t k = level_begin_; k < level_end_; ++k) {
      for (std::uint16_t g = 0; g < sys_.generators.size(); ++g) {
        if (nodes_.size() >= budget_) break;
        IvSet st = apply_map(sys_.generators[g], sys_.space, nodes_[k].st,
                             false);
        if (st.empty()) continue;
        std::uint64_t key = ivset_key(sys_.space, st);
        if (!seen_.insert(key).second) continue;
        nodes_.push_back(Node{std::move(st), int(k), g});
      }
    }
    level_begin_ = next_begin;
    level_end_ = nodes_.size();
    return level_begin_ != level_end_;
  }

  std::size_t level_begin() const { return level_begin_; }
  std::size_t level_end() const { return level_end_; }
  std::size_t size() const { return nodes_.size(); }
  const IvSet& state(std::size_t i) const { return nodes_[i].st; }

  // Letters along the path to the root. The leaf letter was applied last,
  // so the leaf-to-root walk already lists the word outermost first.
  Word word_of(std::size_t i) const {
    Word w;
    for (int k = int(i); nodes_[k].parent >= 0; k = nodes_[k].parent)
      w.indices.push_back(nodes_[k].gen);
    return w;
  }

 private:
  struct Node {
    IvSet st;
    int parent;
    std::uint16_t gen;
  };
  const IfsSystem& sys_;
  std::size_t budget_;
  std::vector<Node> nodes_;
  std::size_t level_begin_, level_end_;
  std::unordered_set<std::uint64_t> seen_;
};

// Shortest word whose forward enclosure of `start` satisfies `hit`.
inline std::optional<Word> forward_word_search(
    const IfsSystem& sys, IvSet start,
    const std::function<bool(const IvSet&)>& hit, int max_len,
    std::size_t budget) {
  WordEnclosureSearch bfs(sys, std::move(start), budget);
  for (int len = 1; len <= max_len; ++len) {
    if (!bfs.expand()) return std::nullopt;
    for (std::size_t k = bfs.level_begin(); k < bfs.level_end(); ++k)
      if (hit(bfs.state(k))) return bfs.word_of(k);
  }
  return std::nullopt;
}

// -------------------------------------------------------------------------
// Attracting fixed point of a single generator, with a trapping
// neighborhood constructed on the grid.

struct AttractingFixedPoint {
  int generator_index = 0;
  double p = 0.0;          // the fixed point
  double radius = 0.0;     // U = ball(p, radius), as an interval around p
  CompactSet U;            // grid cells of that ball
  double delta = 0.0;      // largest ball radius with map(B) inside B
  int contraction_time = 0;  // iterates taking U within ~2 cells of p
  double multiplier = 0.0;   // local contraction factor at p
};

namespace detail {

// Enclosure of the single-map image of [lo, hi].
inline Iv interval_image(const MapSpec& m, const GridSpace& s, double lo,
                         double hi) {
  IvSet out;
  map_interval(m, s, Iv{lo, hi, false, false}, out);
  merge_ivset(out);
  Iv hull = out.front();
  for (const Iv& v : out) {
    hull.lo = std::min(hull.lo, v.lo);
    hull.hi = std::max(hull.hi, v.hi);
  }
  return hull;
}

// Whether the image of the ball [p-r, p+r] stays strictly inside it, with a
// one-cell interior margin away from space boundaries.
inline bool ball_traps(const MapSpec& m, const GridSpace& s, double p,
                       double r) {
  double h = s.cell_diameter();
  double lo = p - r, hi = p + r;
  double mlo = lo + h, mhi = hi - h;
  if (s.kind() == SpaceKind::Interval01) {
    if (lo <= 0.0) {
      lo = 0.0;
      mlo = 0.0;
    }
    if (hi >= 1.0) {
      hi = 1.0;
      mhi = 1.0;
    }
  }
  Iv img = interval_image(m, s, lo, hi);
  return img.lo >= mlo && img.hi <= mhi;
}

}  // namespace detail

// Scans for a fixed cell, refines by iteration, verifies local contraction,
// and grows the trapping ball. Returns nothing when no attracting candidate
// survives (e.g. rotations, or maps whose fixed points all repel).
inline std::optional<AttractingFixedPoint> find_attracting_fixed_point(
    const GridSpace& s, const MapSpec& m, int generator_index = 0) {
  if (s.kind() == SpaceKind::ShiftSpace) return std::nullopt;
  double h = s.cell_diameter();
  int n = s.resolution();
  for (int i = 0; i < n; ++i) {
    double c = s.center(i);
    if (s.metric(eval_map(m, s, c), c) > h) continue;
    // Iterate from just off the candidate; an attracting point pulls the
    // orbit back, a repelling one sends it elsewhere.
    double x = c + 2 * h;
    if (s.kind() == SpaceKind::Interval01 && x > 1.0) x = c - 2 * h;
    for (int it = 0; it < 2000; ++it) x = eval_map(m, s, x);
    double p = x;
    for (int it = 0; it < 2000; ++it) p = eval_map(m, s, p);
    if (s.metric(eval_map(m, s, p), p) > 1e-12) continue;
    if (s.metric(p, c) > 4 * h) continue;  // converged to a different point
    double e = 1e-7;
    double probe = p + e;
    if (s.kind() == SpaceKind::Interval01 && probe > 1.0) probe = p - e;
    double mult = s.metric(eval_map(m, s, probe), p) / e;
    if (mult >= 1.0 - 1e-9) continue;

    AttractingFixedPoint afp{generator_index, p, 0.0,
                             CompactSet::of_cell(s, s.cell_of(p)), 0.0, 0,
                             mult};
    double r = 4 * h;
    double r_cap = s.kind() == SpaceKind::Circle ? 0.25 : 0.5;
    while (r * 2 <= r_cap && detail::ball_traps(m, s, p, r * 2)) r *= 2;
    if (!detail::ball_traps(m, s, p, r)) continue;
    afp.radius = r;
    double lo = p - r, hi = p + r;
    if (s.kind() == SpaceKind::Interval01) {
      lo = std::max(0.0, lo);
      hi = std::min(1.0, hi);
    }
    afp.U = CompactSet::from_interval(s, lo, hi);

    // Largest forward-invariant ball radius (cell-count binary search).
    auto ball_invariant = [&](long k) {
      double rr = double(k) * h;
      double blo = p - rr, bhi = p + rr;
      if (s.kind() == SpaceKind::Interval01) {
        blo = std::max(0.0, blo);
        bhi = std::min(1.0, bhi);
      }
      Iv img = detail::interval_image(m, s, blo, bhi);
      return img.lo >= p - rr - 1e-12 && img.hi <= p + rr + 1e-12;
    };
    long klo = 1, khi = long(r / h);
    while (klo < khi) {
      long mid = (klo + khi + 1) / 2;
      if (ball_invariant(mid))
        klo = mid;
      else
        khi = mid - 1;
    }
    if (!ball_invariant(klo)) continue;
    afp.delta = double(klo) * h;

    // Contraction time of U into a ~2-cell ball around p.
    Iv cur{lo, hi, false, false};
    int steps = 0;
    while ((cur.lo < p - 1.5 * h || cur.hi > p + 1.5 * h) && steps < 100000) {
      cur = detail::interval_image(m, s, cur.lo, cur.hi);
      ++steps;
    }
    if (steps >= 100000) continue;
    afp.contraction_time = steps;
    return afp;
  }
  return std::nullopt;
}

// -------------------------------------------------------------------------
// Preimage covers.

struct CoverCertificate {
  std::vector<Word> words;
  CompactSet target_set;
  int k_U = 0;
  double covered_fraction = 0.0;
  BitMask covered;

  bool full() const { return covered_fraction >= 1.0; }
};

// Greedy cover: repeatedly take the first uncovered cell and find the
// shortest word sending it into U, then credit that word's whole preimage.
inline CoverCertificate find_preimage_cover(const IfsSystem& sys,
                                            const CompactSet& U, int max_len,
                                            std::size_t budget = 60000) {
  const GridSpace& s = sys.space;
  int n = s.resolution();
  CoverCertificate cert{{}, U, 0, 0.0, BitMask(std::size_t(n))};
  IvSet u_regions = regions_of_set(U);
  auto hits_u = [&](const IvSet& st) {
    for (const Iv& v : st)
      if (mask_intersects(s, v, U.cells())) return true;
    return false;
  };
  for (int c = 0; c < n; ++c) {
    if (cert.covered.test(std::size_t(c))) continue;
    IvSet start{cell_region(s, c)};
    std::optional<Word> w =
        forward_word_search(sys, start, hits_u, max_len, budget);
    if (!w) break;
    BitMask pre = word_preimage_cells(sys, *w, u_regions);
    if (!pre.test(std::size_t(c))) {
      // The capped preimage dropped this cell's component; retry uncapped
      // enough to keep it.
      IvSet vs = u_regions;
      for (std::uint16_t g : w->indices) {
        IvSet out;
        for (const Iv& v : vs)
          preimage_interval(sys.generators[g], s, v, out);
        merge_ivset(out);
        vs = std::move(out);
        if (vs.size() > 4096) break;
      }
      pre.clear();
      for (const Iv& v : vs) mark_cells(s, v, pre);
    }
    if (!pre.test(std::size_t(c))) break;
    cert.covered |= pre;
    cert.k_U = std::max(cert.k_U, int(w->length()));
    cert.words.push_back(std::move(*w));
  }
  cert.covered_fraction = double(cert.covered.count()) / double(n);
  return cert;
}

struct MinimalityProbe {
  bool minimal_up_to_resolution = false;
  std::optional<CompactSet> failing_ball;
  int balls_checked = 0;
  int max_k_U = 0;
  double ball_radius = 0.0;
};

// Covers balls on a net of centers; minimal-up-to-resolution means every
// ball admits a full preimage cover, i.e. every orbit visits every ball.
inline MinimalityProbe minimality_probe(const IfsSystem& sys,
                                        double ball_radius, int max_len,
                                        int trials) {
  const GridSpace& s = sys.space;
  double h = s.cell_diameter();
  if (ball_radius <= 2 * h)
    throw std::invalid_argument("minimality_probe: ball_radius too small");
  MinimalityProbe rep;
  rep.ball_radius = ball_radius;
  int n = s.resolution();
  int stride = std::max(1, int((ball_radius / 2) / h));
  int count = (n + stride - 1) / stride;
  if (count > trials && trials > 0) {
    stride = (n + trials - 1) / trials;
    count = (n + stride - 1) / stride;
  }
  for (int k = 0; k < count; ++k) {
    double y = s.center(k * stride);
    double lo = y - ball_radius, hi = y + ball_radius;
    if (s.kind() == SpaceKind::Interval01) {
      lo = std::max(0.0, lo);
      hi = std::min(1.0, hi);
    }
    CompactSet ball = CompactSet::from_interval(s, lo, hi);
    CoverCertificate cert = find_preimage_cover(sys, ball, max_len);
    ++rep.balls_checked;
    rep.max_k_U = std::max(rep.max_k_U, cert.k_U);
    if (!cert.full()) {
      rep.failing_ball = ball;
      return rep;
    }
  }
  rep.minimal_up_to_resolution = true;
  return rep;
}

// -------------------------------------------------------------------------
// Constructive convergence-time bound: cover constant + contraction time +
// funnel word lengths.

struct FunnelEntry {
  double y = 0.0;  // net point the funnel word lands near
  Word word;       // full word, including the contraction prefix
};

struct ConvergenceBound {
  bool found = false;
  int N = 0, k_U = 0, n0 = 0, s_eps = 0;
  double eps = 0.0;
  double delta = 0.0;         // invariant ball radius used by the funnel
  double funnel_width = 0.0;  // half-width of the contracted start interval
  int prefix_steps = 0;       // contraction steps prepended to funnel words
  std::optional<CoverCertificate> cover;
  std::vector<FunnelEntry> funnel;
  std::string failure;
  std::vector<double> empirical_dh;  // d_H(F^N(seed), X) on sampled seeds
  bool empirical_ok = false;
};

// Net of cell centers with spacing at most eps/2.
inline std::vector<double> net_points(const GridSpace& s, double eps) {
  int n = s.resolution();
  double h = s.cell_diameter();
  int stride = std::max(1, int((eps / 2) / h));
  std::vector<double> ys;
  for (int i = 0; i < n; i += stride) ys.push_back(s.center(i));
  return ys;
}

inline ConvergenceBound convergence_time_bound(const IfsSystem& sys,
                                               const AttractingFixedPoint& afp,
                                               double eps, int max_len,
                                               std::size_t budget = 400000) {
  const GridSpace& s = sys.space;
  double h = s.cell_diameter();
  ConvergenceBound out;
  out.eps = eps;
  out.delta = afp.delta;
  if (eps <= 4 * h) {
    out.failure = "eps below grid scale";
    return out;
  }
  const MapSpec& m1 = sys.generators[std::size_t(afp.generator_index)];

  // (i) cover constant.
  out.cover = find_preimage_cover(sys, afp.U, max_len, budget);
  if (!out.cover->full()) {
    out.failure = "no full preimage cover of U at this word length";
    return out;
  }
  out.k_U = out.cover->k_U;

  // (ii) contraction time of U into the invariant ball B(p, delta).
  double ulo = afp.p - afp.radius, uhi = afp.p + afp.radius;
  if (s.kind() == SpaceKind::Interval01) {
    ulo = std::max(0.0, ulo);
    uhi = std::min(1.0, uhi);
  }
  Iv cur{ulo, uhi, false, false};
  int n0 = 0;
  while ((cur.lo < afp.p - afp.delta || cur.hi > afp.p + afp.delta) &&
         n0 < 100000) {
    cur = detail::interval_image(m1, s, cur.lo, cur.hi);
    ++n0;
  }
  if (n0 >= 100000) {
    out.failure = "trapping ball does not contract into B(p, delta)";
    return out;
  }
  out.n0 = n0;

  // (iii) funnel: contract B(p, delta) until it is small, then search words
  // landing it inside each eps/2 ball of the net.
  double w_target = std::min(afp.delta, eps / 8);
  Iv small{afp.p - afp.delta, afp.p + afp.delta, false, false};
  if (s.kind() == SpaceKind::Interval01) {
    small.lo = std::max(0.0, small.lo);
    small.hi = std::min(1.0, small.hi);
  }
  int prefix = 0;
  while (small.hi - small.lo > 2 * w_target && prefix < 100000) {
    small = detail::interval_image(m1, s, small.lo, small.hi);
    ++prefix;
  }
  out.prefix_steps = prefix;
  out.funnel_width = (small.hi - small.lo) / 2;

  std::vector<double> ys = net_points(s, eps);
  std::vector<bool> hit(ys.size(), false);
  std::vector<Word> words(ys.size());
  std::size_t remaining = ys.size();
  auto target_check = [&](const IvSet& st, std::size_t yi) {
    IvSet ball{Iv{ys[yi] - eps / 2, ys[yi] + eps / 2, false, false}};
    if (s.kind() == SpaceKind::Interval01) {
      ball[0].lo = std::max(0.0, ball[0].lo);
      ball[0].hi = std::min(1.0, ball[0].hi);
    }
    for (const Iv& v : st)
      if (!iv_covers(s, ball, v.lo, v.hi, 0.0)) return false;
    return true;
  };
  // The start interval itself may already sit inside some net balls.
  for (std::size_t yi = 0; yi < ys.size(); ++yi)
    if (target_check(IvSet{small}, yi)) {
      hit[yi] = true;
      words[yi] = Word{};
      --remaining;
    }
  // Cheap pass: two-block words b^k after a^j. Power words of one
  // generator sweep the space for rotation-like systems and walk the dyadic
  // tree for interval systems; the general search below only has to clean
  // up what this pass misses.
  std::size_t arity = sys.generators.size();
  auto try_word = [&](const IvSet& st, std::uint16_t b, int k,
                      std::uint16_t a, int j) {
    for (std::size_t yi = 0; yi < ys.size(); ++yi) {
      if (hit[yi] || !target_check(st, yi)) continue;
      Word w;
      w.indices.assign(std::size_t(k), b);
      w.indices.insert(w.indices.end(), std::size_t(j), a);
      hit[yi] = true;
      words[yi] = std::move(w);
      --remaining;
    }
  };
  for (std::uint16_t a = 0; a < arity && remaining; ++a) {
    IvSet base{small};
    for (int j = 0; j <= std::min(24, max_len) && remaining; ++j) {
      if (j > 0) {
        base = apply_map(sys.generators[a], s, base, false);
        try_word(base, a, 0, a, j);
      }
      for (std::uint16_t b = 0; b < arity && remaining; ++b) {
        if (b == a && j > 0) continue;  // pure powers handled above
        IvSet st = base;
        for (int k = 1; j + k <= max_len && remaining; ++k) {
          st = apply_map(sys.generators[b], s, st, false);
          if (st.empty()) break;
          try_word(st, b, k, a, j);
        }
      }
    }
  }
  WordEnclosureSearch bfs(sys, IvSet{small}, budget);
  int len = 0;
  while (remaining > 0 && len < max_len) {
    if (!bfs.expand()) break;
    ++len;
    for (std::size_t k = bfs.level_begin(); k < bfs.level_end() && remaining;
         ++k) {
      for (std::size_t yi = 0; yi < ys.size(); ++yi) {
        if (hit[yi]) continue;
        if (target_check(bfs.state(k), yi)) {
          hit[yi] = true;
          words[yi] = bfs.word_of(k);
          --remaining;
        }
      }
    }
  }
  if (remaining > 0) {
    out.failure = "funnel word search exhausted the length budget";
    return out;
  }
  int s_eps = 0;
  for (std::size_t yi = 0; yi < ys.size(); ++yi) {
    Word full = words[yi];
    for (int t = 0; t < prefix; ++t)
      full.indices.push_back(std::uint16_t(afp.generator_index));
    if (full.empty()) {
      // The invariant ball already sits inside this net ball; one
      // application of the contracting generator keeps it there.
      full.indices.push_back(std::uint16_t(afp.generator_index));
    }
    s_eps = std::max(s_eps, int(full.length()));
    out.funnel.push_back(FunnelEntry{ys[yi], std::move(full)});
  }
  out.s_eps = s_eps;
  out.N = out.k_U + out.n0 + out.s_eps;
  out.found = true;

  // Empirical check with deterministic seeds.
  int n = s.resolution();
  CompactSet full_space = CompactSet::full(s);
  for (int k = 0; k < 5; ++k) {
    CompactSet seed = CompactSet::of_cell(s, (k * n) / 5 + n / 11);
    HyperOrbit orb = iterate(sys, seed, out.N);
    out.empirical_dh.push_back(hausdorff(orb.last(), full_space));
  }
  out.empirical_ok = true;
  for (double d : out.empirical_dh)
    if (d >= eps) out.empirical_ok = false;
  return out;
}

}  // namespace hyperifs
