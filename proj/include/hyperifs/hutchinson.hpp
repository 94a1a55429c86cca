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
#include <optional>
#include <stdexcept>
#include <vector>

#include "hyperifs/compact_set.hpp"
#include "hyperifs/maps.hpp"
#include "hyperifs/rng.hpp"

namespace hyperifs {

// One application of the set operator: union of the generator images.
// Exact on masks, so monotone and additive by construction.
inline CompactSet hutchinson_step(const IfsSystem& sys, const CompactSet& a) {
  IvSet regions = regions_of_set(a);
  BitMask out(std::size_t(sys.space.resolution()));
  for (const MapSpec& g : sys.generators) {
    IvSet imgs;
    for (const Iv& r : regions) map_interval(g, sys.space, r, imgs);
    merge_ivset(imgs);
    for (const Iv& v : imgs) mark_centers(sys.space, v, out);
  }
  return CompactSet(sys.space, std::move(out));
}

struct HyperOrbit {
  std::vector<CompactSet> sets;  // sets[0] is the seed

  const CompactSet& last() const { return sets.back(); }
  std::size_t horizon() const { return sets.size() - 1; }
};

inline HyperOrbit iterate(const IfsSystem& sys, const CompactSet& seed,
                          int k) {
  if (k < 0) throw std::invalid_argument("iterate: negative iteration count");
  HyperOrbit orb;
  orb.sets.reserve(std::size_t(k) + 1);
  orb.sets.push_back(seed);
  for (int i = 0; i < k; ++i)
    orb.sets.push_back(hutchinson_step(sys, orb.sets.back()));
  return orb;
}

struct SeedConvergence {
  int first_hit = -1;          // least j with d_H below eps; -1 if never
  bool tail_ok = false;        // stays below eps from first_hit to max_iter
  double max_after_hit = 0.0;  // largest d_H seen after the first hit
  std::vector<double> trace;   // d_H to target at every iterate 0..max_iter
};

struct ConvergenceReport {
  double eps = 0.0;
  int max_iter = 0;
  std::vector<SeedConvergence> seeds;

  bool all_converged() const {
    for (const auto& s : seeds)
      if (s.first_hit < 0 || !s.tail_ok) return false;
    return !seeds.empty();
  }
  int max_first_hit() const {
    int m = -1;
    for (const auto& s : seeds) m = std::max(m, s.first_hit);
    return m;
  }
};

// For each seed, the first iterate whose distance to `target` drops below
// eps, plus verification that it stays below through max_iter. Failure to
// converge is reported, not thrown.
inline ConvergenceReport attractor_convergence(
    const IfsSystem& sys, const CompactSet& target,
    const std::vector<CompactSet>& seeds, double eps, int max_iter) {
  ConvergenceReport rep;
  rep.eps = eps;
  rep.max_iter = max_iter;
  for (const CompactSet& seed : seeds) {
    SeedConvergence sc;
    CompactSet cur = seed;
    for (int j = 0; j <= max_iter; ++j) {
      if (j > 0) cur = hutchinson_step(sys, cur);
      double d = hausdorff(cur, target);
      sc.trace.push_back(d);
      if (sc.first_hit < 0 && d < eps) sc.first_hit = j;
      if (sc.first_hit >= 0 && j > sc.first_hit)
        sc.max_after_hit = std::max(sc.max_after_hit, d);
    }
    sc.tail_ok = sc.first_hit >= 0 && sc.max_after_hit < eps;
    rep.seeds.push_back(std::move(sc));
  }
  return rep;
}

struct DfEstimate {
  double sup = 0.0;
  int argmax_index = 0;
  // True when the sup over all iterates beyond the horizon is controlled:
  // either both orbits reached identical masks (exact merge), or both ended
  // within eps_tail of the attractor so the tail contributes < 2*eps_tail.
  bool tail_bound_valid = false;
  bool orbits_merged = false;
  double eps_tail = 0.0;
};

// sup of d_H(F^i(a), F^i(b)) for 0 <= i <= horizon, with a tail certificate
// against the full-space attractor.
inline DfEstimate d_f_estimate(const IfsSystem& sys, const CompactSet& a,
                               const CompactSet& b, int horizon,
                               double eps_tail) {
  if (horizon < 1) throw std::invalid_argument("d_f_estimate: horizon < 1");
  DfEstimate est;
  est.eps_tail = eps_tail;
  CompactSet xa = a, xb = b;
  CompactSet full = CompactSet::full(sys.space);
  for (int i = 0; i <= horizon; ++i) {
    if (i > 0) {
      xa = hutchinson_step(sys, xa);
      xb = hutchinson_step(sys, xb);
    }
    double d = hausdorff(xa, xb);
    if (d > est.sup) {
      est.sup = d;
      est.argmax_index = i;
    }
    if (xa.cells() == xb.cells()) {
      est.orbits_merged = true;
      est.tail_bound_valid = true;
      return est;
    }
  }
  est.tail_bound_valid = hausdorff(xa, full) < eps_tail &&
                         hausdorff(xb, full) < eps_tail;
  return est;
}

struct ProbeWitness {
  CompactSet a, b;
  double delta = 0.0;    // ladder value the pair was sampled under
  double d_f = 0.0;      // observed sup
  int at_index = 0;      // iterate attaining it
  double d_start = 0.0;  // d_H(a, b)
};

struct EquicontinuityProbe {
  double eps = 0.0;
  double delta_found = 0.0;  // 0 means no ladder value was accepted
  std::vector<double> ladder;
  std::vector<ProbeWitness> witnesses;  // one per rejected ladder value
  int trials = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Deterministic trial pair at Hausdorff distance < delta: alternates
// grid-adjacent singletons, dilated arcs, and dilated two-run sets.
inline std::pair<CompactSet, CompactSet> probe_pair(const IfsSystem& sys,
                                                    double delta, int trial,
                                                    Rng& rng) {
  const GridSpace& s = sys.space;
  int n = s.resolution();
  double h = s.cell_diameter();
  int mode = trial % 5;
  if (mode <= 1) {
    // Singletons: adjacent cells first, then offsets below delta.
    int i = int(rng.below(std::uint64_t(n)));
    if (s.kind() == SpaceKind::ShiftSpace) {
      // Last-symbol flip is the minimal-distance neighbor.
      return {CompactSet::of_cell(s, i), CompactSet::of_cell(s, i ^ 1)};
    }
    int max_off = std::max(1, int(delta / h) - 1);
    int off = mode == 0 ? 1 : 1 + int(rng.below(std::uint64_t(max_off)));
    int j = i + off;
    if (s.kind() == SpaceKind::Circle)
      j = (j % n + n) % n;
    else if (j >= n)
      j = i - off;
    return {CompactSet::of_cell(s, i), CompactSet::of_cell(s, j)};
  }
  int runs = mode == 4 ? 2 : 1;
  std::vector<std::pair<int, int>> rr;
  for (int k = 0; k < runs; ++k) {
    int len = 1 + int(rng.below(std::uint64_t(std::max(2, n / 8))));
    int start = int(rng.below(std::uint64_t(n)));
    if (start + len > n) len = n - start;
    rr.emplace_back(start, std::max(1, len));
  }
  CompactSet base = CompactSet::from_runs(s, rr);
  double r = delta * (0.25 + 0.65 * rng.uniform());
  return {base, dilate(base, r)};
}

}  // namespace detail

// Ladder search for the largest delta such that all sampled pairs within
// delta keep their orbits eps-close up to the horizon. A rejected ladder
// value contributes a concrete witness pair.
inline EquicontinuityProbe hyperspace_equicontinuity_probe(
    const IfsSystem& sys, double eps, int trials, int horizon,
    std::uint64_t seed) {
  double h = sys.space.cell_diameter();
  if (eps <= 4 * h)
    throw std::invalid_argument("equicontinuity probe: eps too small");
  EquicontinuityProbe rep;
  rep.eps = eps;
  rep.trials = trials;
  rep.horizon = horizon;
  rep.seed = seed;
  for (double d = eps / 2; d >= 2 * h && rep.ladder.size() < 12; d /= 2)
    rep.ladder.push_back(d);
  for (std::size_t li = 0; li < rep.ladder.size(); ++li) {
    double delta = rep.ladder[li];
    std::optional<ProbeWitness> bad;
    int tested = 0;
    for (int t = 0; t < trials && !bad; ++t) {
      Rng rng = Rng::fork(seed, (std::uint64_t(li) << 32) | std::uint64_t(t));
      auto [a, b] = detail::probe_pair(sys, delta, t, rng);
      double d0 = hausdorff(a, b);
      if (d0 >= delta || d0 == 0.0) continue;
      ++tested;
      DfEstimate est = d_f_estimate(sys, a, b, horizon, eps / 4);
      if (est.sup >= eps)
        bad = ProbeWitness{a, b, delta, est.sup, est.argmax_index, d0};
    }
    if (!bad) {
      // A rung that realized no pair says nothing: distinct sets on the
      // grid cannot get closer than the separation scale, so no finer rung
      // can be exercised either.
      if (tested == 0) break;
      rep.delta_found = delta;
      return rep;
    }
    rep.witnesses.push_back(std::move(*bad));
  }
  return rep;
}

}  // namespace hyperifs
