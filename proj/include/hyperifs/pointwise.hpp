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
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "hyperifs/maps.hpp"

namespace hyperifs {

struct DphiEstimate {
  double lower = 0.0;        // max over explored words of d(wx, wy)
  bool certified_sup = false;  // lower equals the sup over ALL words
  Word argmax_word;
  std::size_t explored = 0;
  bool truncated = false;  // beam dropped states; estimate stays a lower bound
};

// Largest image distance over words up to max_len, by breadth-first search
// over the pair orbit. The estimate is always a valid lower bound; it is
// certified as the full sup in exactly two sound cases: every generator is
// globally nonexpansive (extensions can never increase any distance), or the
// reachable pair set was exhausted without truncation.
inline DphiEstimate d_phi_estimate(const IfsSystem& sys, Point x, Point y,
                                   int max_len, std::size_t beam = 4096) {
  DphiEstimate est;
  if (max_len < 1) throw std::invalid_argument("d_phi_estimate: max_len < 1");
  const GridSpace& s = sys.space;

  struct Node {
    double a, b;
    int parent;
    std::uint16_t gen;
  };
  std::vector<Node> arena;
  arena.push_back(Node{x, y, -1, 0});
  std::vector<int> frontier{0};
  std::unordered_set<std::uint64_t> seen;
  auto key = [&](double a, double b) {
    std::uint64_t ka, kb;
    if (s.kind() == SpaceKind::ShiftSpace) {
      ka = std::uint64_t(std::llround(a));
      kb = std::uint64_t(std::llround(b));
    } else {
      ka = std::uint64_t(std::llround(a * 288230376151711744.0));  // 2^58
      kb = std::uint64_t(std::llround(b * 288230376151711744.0));
    }
    std::uint64_t h = ka * 1099511628211ull;
    h ^= kb + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  seen.insert(key(x, y));
  int best_node = -1;
  bool exhausted = false;
  for (int len = 1; len <= max_len; ++len) {
    std::vector<int> next;
    std::vector<double> dist;
    for (int idx : frontier) {
      double a = arena[std::size_t(idx)].a, b = arena[std::size_t(idx)].b;
      for (std::uint16_t g = 0; g < sys.generators.size(); ++g) {
        double na = eval_map(sys.generators[g], s, a);
        double nb = eval_map(sys.generators[g], s, b);
        double d = s.metric(na, nb);
        bool fresh = seen.insert(key(na, nb)).second;
        if (d <= est.lower && !fresh) continue;
        arena.push_back(Node{na, nb, idx, g});
        int node = int(arena.size()) - 1;
        if (d > est.lower) {
          est.lower = d;
          best_node = node;
        }
        if (fresh) {
          next.push_back(node);
          dist.push_back(d);
          ++est.explored;
        }
      }
    }
    if (next.empty()) {
      exhausted = true;
      break;
    }
    if (next.size() > beam) {
      std::vector<std::size_t> order(next.size());
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t u, std::size_t v) {
                         return dist[u] > dist[v];
                       });
      std::vector<int> kept;
      kept.reserve(beam);
      for (std::size_t k = 0; k < beam; ++k) kept.push_back(next[order[k]]);
      next.swap(kept);
      est.truncated = true;
    }
    frontier.swap(next);
  }
  if (best_node >= 0) {
    // The leaf letter was applied last, so the leaf-to-root walk already
    // lists the word outermost first.
    for (int k = best_node; arena[std::size_t(k)].parent >= 0;
         k = arena[std::size_t(k)].parent)
      est.argmax_word.indices.push_back(arena[std::size_t(k)].gen);
  }
  est.certified_sup =
      sys.max_lipschitz() <= 1.0 + 1e-15 || (exhausted && !est.truncated);
  return est;
}

// Full enumeration without deduplication or beam, so that estimates for
// different pairs range over exactly the same word set. Used by metric-axiom
// checks where comparable enumeration matters more than speed.
inline double d_phi_exhaustive(const IfsSystem& sys, Point x, Point y,
                               int max_len) {
  const GridSpace& s = sys.space;
  std::vector<std::pair<double, double>> frontier{{x, y}};
  double lower = 0.0;
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::pair<double, double>> next;
    next.reserve(frontier.size() * sys.generators.size());
    for (auto [a, b] : frontier) {
      for (const MapSpec& g : sys.generators) {
        double na = eval_map(g, s, a), nb = eval_map(g, s, b);
        lower = std::max(lower, s.metric(na, nb));
        next.emplace_back(na, nb);
      }
    }
    frontier.swap(next);
  }
  return lower;
}

struct PointWitness {
  Word word;
  double y = 0.0;
  double separation = 0.0;
  double rejected_delta = 0.0;
};

struct PointVerdict {
  double x = 0.0;
  double eps = 0.0;
  double delta_found = 0.0;  // 0 means sensitive: see witness
  std::optional<PointWitness> witness;
  int samples_checked = 0;
};

namespace detail {

// Deterministic neighbors of x at distance in (0, delta).
inline std::vector<double> neighbor_samples(const GridSpace& s, double x,
                                            double delta, int count) {
  std::vector<double> ys;
  int n = s.resolution();
  int cx = s.cell_of(x);
  if (s.kind() == SpaceKind::ShiftSpace) {
    std::uint64_t ix = std::uint64_t(cx);
    for (int b = 0; b < 24 && int(ys.size()) < count; ++b) {
      std::uint64_t iy = ix ^ (std::uint64_t(1) << b);
      if (iy >= std::uint64_t(n)) break;
      double y = double(iy);
      double d = s.metric(x, y);
      if (d > 0 && d < delta) ys.push_back(y);
    }
    return ys;
  }
  double h = s.cell_diameter();
  int reach = std::max(1, int(delta / h) - 1);
  int half = std::max(1, count / 2);
  int stride = std::max(1, reach / half);
  for (int k = 1; k <= half; ++k) {
    for (int sgn : {+1, -1}) {
      int cy = cx + sgn * k * stride;
      if (s.kind() == SpaceKind::Circle)
        cy = (cy % n + n) % n;
      else if (cy < 0 || cy >= n)
        continue;
      double y = s.center(cy);
      double d = s.metric(x, y);
      if (d > 0 && d < delta) ys.push_back(y);
    }
  }
  return ys;
}

}  // namespace detail

// Ladder over delta: the first delta whose sampled neighborhood keeps all
// word images within eps is returned; if even the grid-scale delta fails,
// the killing word is returned as a sensitivity witness. A witness is
// conclusive; a delta_found is bounded by grid resolution.
inline PointVerdict classify_point(const IfsSystem& sys, Point x, double eps,
                                   int max_len, int neighborhood_samples,
                                   std::size_t beam = 4096) {
  const GridSpace& s = sys.space;
  double h = s.cell_diameter();
  if (eps <= 4 * h)
    throw std::invalid_argument("classify_point: eps too small");
  PointVerdict v;
  v.x = x;
  v.eps = eps;
  std::vector<double> ladder;
  for (double d = eps / 2; d > 2 * h; d /= 2) ladder.push_back(d);
  ladder.push_back(2 * h);
  std::optional<PointWitness> last_witness;
  for (double delta : ladder) {
    bool ok = true;
    for (double y : detail::neighbor_samples(s, x, delta,
                                             neighborhood_samples)) {
      ++v.samples_checked;
      DphiEstimate est = d_phi_estimate(sys, x, y, max_len, beam);
      if (est.lower >= eps) {
        last_witness =
            PointWitness{est.argmax_word, y, est.lower, delta};
        ok = false;
        break;
      }
    }
    if (ok) {
      v.delta_found = delta;
      return v;
    }
  }
  v.witness = last_witness;
  return v;
}

struct SensitivityProbe {
  bool sensitive = false;
  double min_open_diameter = 0.0;
  double ball_radius = 0.0;
  int balls_checked = 0;
  double failing_center = -1.0;  // center of the first ball below eps
};

// Lower-bounds the d_phi diameter of every ball on a net at the smallest
// usable radius; sensitive means every ball separates to at least eps.
inline SensitivityProbe sensitivity_probe(const IfsSystem& sys, double eps,
                                          int max_len,
                                          std::size_t beam = 64) {
  const GridSpace& s = sys.space;
  int n = s.resolution();
  double h = s.cell_diameter();
  SensitivityProbe rep;
  rep.ball_radius = 2 * h;
  int stride = std::max(1, n / 512);
  rep.min_open_diameter = s.diameter();
  for (int c = 0; c < n; c += stride) {
    double y = s.center(c);
    double diam = 0.0;
    for (double z : detail::neighbor_samples(s, y, 2.5 * h, 4)) {
      DphiEstimate est = d_phi_estimate(sys, y, z, max_len, beam);
      diam = std::max(diam, est.lower);
      if (diam >= eps) break;
    }
    ++rep.balls_checked;
    rep.min_open_diameter = std::min(rep.min_open_diameter, diam);
    if (diam < eps) {
      rep.failing_center = y;
      rep.sensitive = false;
      return rep;
    }
  }
  rep.sensitive = true;
  return rep;
}

}  // namespace hyperifs
