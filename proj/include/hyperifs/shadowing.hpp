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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperifs/hutchinson.hpp"
#include "hyperifs/rng.hpp"

namespace hyperifs {

enum class Perturbation { Dilate, Erode, Jitter, Adversarial };

inline const char* to_string(Perturbation p) {
  switch (p) {
    case Perturbation::Dilate: return "dilate";
    case Perturbation::Erode: return "erode";
    case Perturbation::Jitter: return "jitter";
    case Perturbation::Adversarial: return "adversarial";
  }
  return "?";
}

struct PseudoOrbit {
  std::vector<CompactSet> sets;
  double delta = 0.0;
  std::vector<double> defects;  // defects[i] = d_H(sets[i+1], F(sets[i]))
  Perturbation kind = Perturbation::Dilate;
  std::uint64_t seed = 0;

  double max_defect() const {
    double m = 0.0;
    for (double d : defects) m = std::max(m, d);
    return m;
  }
};

namespace detail {

inline CompactSet shift_cells(const CompactSet& A, int off) {
  const GridSpace& s = A.space();
  int n = s.resolution();
  BitMask m{std::size_t(n)};
  A.cells().for_each_set([&](std::size_t c) {
    int t = int(c) + off;
    if (s.kind() == SpaceKind::Circle)
      t = (t % n + n) % n;
    else
      t = std::clamp(t, 0, n - 1);
    m.set(std::size_t(t));
  });
  return CompactSet(s, std::move(m));
}

inline CompactSet perturb_once(const CompactSet& T, Perturbation kind,
                               double r, int step, int dir) {
  const GridSpace& s = T.space();
  double h = s.cell_diameter();
  switch (kind) {
    case Perturbation::Dilate:
      return dilate(T, r);
    case Perturbation::Erode:
      return (step % 2 == 0) ? erode(T, r) : dilate(T, r);
    case Perturbation::Jitter: {
      if (s.kind() == SpaceKind::ShiftSpace)
        return (step % 2 == 0) ? dilate(T, r) : erode(T, r);
      int off = std::max(1, int(r / h));
      return shift_cells(T, dir * off);
    }
    case Perturbation::Adversarial: {
      if (s.kind() == SpaceKind::ShiftSpace)
        return (step % 2 == 0) ? dilate(T, r) : erode(T, r);
      int off = std::max(1, int(r / h));
      return shift_cells(T, off);  // persistent drift in one direction
    }
  }
  return T;
}

}  // namespace detail

// Runs the set map for `length` steps, perturbing each image by strictly
// less than delta in Hausdorff distance. Defects are measured, not assumed:
// a perturbation that overshoots is retried at half strength and the step
// falls back to the exact image if needed.
inline PseudoOrbit generate_pseudo_orbit(const IfsSystem& sys,
                                         const CompactSet& seed_set,
                                         int length, double delta,
                                         Perturbation kind,
                                         std::uint64_t rng_seed) {
  const GridSpace& s = sys.space;
  double h = s.cell_diameter();
  if (delta <= 2 * h)
    throw std::invalid_argument(
        "generate_pseudo_orbit: delta must exceed one cell on each side");
  if (length < 1)
    throw std::invalid_argument("generate_pseudo_orbit: length < 1");
  Rng rng = Rng::fork(rng_seed, 0x9d5e);
  PseudoOrbit po;
  po.delta = delta;
  po.kind = kind;
  po.seed = rng_seed;
  po.sets.reserve(std::size_t(length) + 1);
  po.sets.push_back(seed_set);
  for (int i = 0; i < length; ++i) {
    CompactSet T = hutchinson_step(sys, po.sets.back());
    double r = delta * (kind == Perturbation::Adversarial
                            ? 0.9
                            : 0.2 + 0.7 * rng.uniform());
    int dir = rng.uniform() < 0.5 ? -1 : +1;
    CompactSet P = T;
    double defect = 0.0;
    for (int attempt = 0; attempt < 4; ++attempt) {
      CompactSet cand = detail::perturb_once(T, kind, r, i, dir);
      double d = hausdorff(T, cand);
      if (d < delta) {
        P = std::move(cand);
        defect = d;
        break;
      }
      r *= 0.5;
    }
    po.defects.push_back(defect);
    po.sets.push_back(std::move(P));
  }
  return po;
}

struct FiniteShadow {
  CompactSet y;
  double gamma = 0.0;       // perturbation scale the candidate came from
  double max_err = 0.0;     // sup over the window of d_H(F^j y, sets[j])
  double robust_fraction = 0.0;
};

namespace detail {

inline bool window_tracks(const IfsSystem& sys, const CompactSet& y,
                          const PseudoOrbit& po, double eps, int window,
                          double* max_err) {
  CompactSet cur = y;
  double worst = hausdorff(cur, po.sets[0]);
  if (worst >= eps) return false;
  for (int j = 1; j <= window; ++j) {
    cur = hutchinson_step(sys, cur);
    worst = std::max(worst, hausdorff(cur, po.sets[std::size_t(j)]));
    if (worst >= eps) return false;
  }
  if (max_err) *max_err = worst;
  return true;
}

}  // namespace detail

// Searches for a single compact set whose true orbit eps-tracks the first
// `window` steps of the pseudo-orbit. Candidates radiate from sets[0] by
// dilation and erosion; the winner is stress-tested against random nearby
// starts and the surviving fraction reported.
inline std::optional<FiniteShadow> finite_shadowing_search(
    const IfsSystem& sys, const PseudoOrbit& po, double eps, int window,
    int trials = 20, std::uint64_t rng_seed = 1) {
  const GridSpace& s = sys.space;
  double h = s.cell_diameter();
  window = std::min(window, int(po.sets.size()) - 1);
  if (window < 0) return std::nullopt;
  std::vector<std::pair<CompactSet, double>> candidates;
  candidates.emplace_back(po.sets[0], 0.0);
  for (double g = h; g <= eps / 2; g *= 2) {
    candidates.emplace_back(dilate(po.sets[0], g), g);
    candidates.emplace_back(erode(po.sets[0], g), g);
  }
  for (auto& [y, gamma] : candidates) {
    double err = 0.0;
    if (!detail::window_tracks(sys, y, po, eps, window, &err)) continue;
    FiniteShadow out{y, std::max(gamma, h), err, 0.0};
    Rng rng = Rng::fork(rng_seed, 0x51ad);
    int pass = 0;
    for (int t = 0; t < trials; ++t) {
      double r = out.gamma * (0.25 + 0.75 * rng.uniform());
      int mode = int(rng.below(3));
      CompactSet z = mode == 0   ? dilate(y, r)
                     : mode == 1 ? erode(y, r)
                                 : detail::shift_cells(
                                       y, rng.uniform() < 0.5 ? -1 : 1);
      if (detail::window_tracks(sys, z, po, eps, window, nullptr)) ++pass;
    }
    out.robust_fraction = trials > 0 ? double(pass) / trials : 1.0;
    return out;
  }
  return std::nullopt;
}

struct ShadowingReport {
  double eps = 0.0;
  double delta = 0.0;
  bool shadowed = false;
  std::optional<CompactSet> shadow_seed;
  int split_index = -1;       // first index where the tail regime takes over
  double head_error = 0.0;    // sup over i < split of d_H(F^i y, sets[i])
  double tail_error = 0.0;    // sup over i >= split of d_H(F^i y, sets[i])
  double max_tracking_error = 0.0;
  int offending_index = -1;
  std::string failure;        // empty when shadowed
  double gamma = 0.0;
  double robust_fraction = 0.0;
};

// Full-length shadowing verdict. The head is handled by finite search at
// eps/4; past the empirical convergence time both the pseudo-orbit and the
// true orbit must hug the whole space, which pins their mutual distance
// below eps without chasing accumulated defects.
inline ShadowingReport infinite_shadowing_test(const IfsSystem& sys,
                                               const PseudoOrbit& po,
                                               double eps,
                                               int finite_trials = 10,
                                               std::uint64_t rng_seed = 1) {
  const GridSpace& s = sys.space;
  int n = s.resolution();
  ShadowingReport rep;
  rep.eps = eps;
  rep.delta = po.delta;
  int len = int(po.sets.size()) - 1;

  CompactSet full = CompactSet::full(s);
  std::vector<CompactSet> seeds;
  seeds.push_back(po.sets[0]);
  seeds.push_back(full);
  seeds.push_back(CompactSet::of_cell(s, n / 3));
  seeds.push_back(CompactSet::of_cell(s, (2 * n) / 3));
  ConvergenceReport conv =
      attractor_convergence(sys, full, seeds, eps / 4, len);
  if (!conv.all_converged()) {
    rep.failure = "no empirical convergence to the full space at eps/4";
    return rep;
  }
  int split = conv.max_first_hit();
  rep.split_index = split;
  if (len < 3 * split)
    throw std::invalid_argument(
        "infinite_shadowing_test: pseudo-orbit shorter than three "
        "convergence windows");

  auto head = finite_shadowing_search(sys, po, eps / 4, split,
                                      finite_trials, rng_seed);
  if (!head) {
    rep.failure = "no seed tracks the head window at eps/4";
    return rep;
  }
  rep.gamma = head->gamma;
  rep.robust_fraction = head->robust_fraction;

  for (int i = split; i <= len; ++i) {
    if (hausdorff(po.sets[std::size_t(i)], full) >= eps / 2) {
      rep.failure = "pseudo-orbit leaves the eps/2 collar of the space";
      rep.offending_index = i;
      return rep;
    }
  }

  CompactSet cur = head->y;
  double head_err = hausdorff(cur, po.sets[0]);
  double tail_err = 0.0;
  for (int i = 1; i <= len; ++i) {
    cur = hutchinson_step(sys, cur);
    double tr = hausdorff(cur, po.sets[std::size_t(i)]);
    if (i < split) {
      head_err = std::max(head_err, tr);
    } else {
      tail_err = std::max(tail_err, tr);
      if (hausdorff(cur, full) >= eps / 4) {
        rep.failure = "true orbit leaves the eps/4 collar of the space";
        rep.offending_index = i;
        return rep;
      }
    }
  }
  rep.head_error = head_err;
  rep.tail_error = tail_err;
  rep.max_tracking_error = std::max(head_err, tail_err);
  if (rep.max_tracking_error >= eps) {
    rep.failure = "tracking error reached eps";
    return rep;
  }
  rep.shadowed = true;
  rep.shadow_seed = head->y;
  return rep;
}

struct DeltaSchedule {
  bool found = false;
  double delta = 0.0;
  int attempts = 0;
  int window = 0;
};

// Halves delta from eps/4 until every trial pseudo-orbit of each
// perturbation kind admits a finite shadow at eps/4 over the window.
inline DeltaSchedule derive_delta_schedule(const IfsSystem& sys, double eps,
                                           int window, int trials,
                                           std::uint64_t rng_seed) {
  const GridSpace& s = sys.space;
  double h = s.cell_diameter();
  DeltaSchedule out;
  out.window = window;
  const Perturbation kinds[] = {Perturbation::Dilate, Perturbation::Erode,
                                Perturbation::Jitter,
                                Perturbation::Adversarial};
  for (double delta = eps / 4; delta > 2.5 * h; delta *= 0.5) {
    ++out.attempts;
    bool all_ok = true;
    for (int t = 0; t < trials && all_ok; ++t) {
      Rng rng = Rng::fork(rng_seed, std::uint64_t(out.attempts) << 32 | t);
      int c = int(rng.below(std::uint64_t(s.resolution())));
      CompactSet seed_set =
          t % 2 == 0 ? CompactSet::full(s)
                     : CompactSet::ball(s, s.center(c), 4 * h);
      PseudoOrbit po =
          generate_pseudo_orbit(sys, seed_set, window + 1, delta,
                                kinds[t % 4], rng.next());
      // Accept only with a factor-two margin below the eps/4 head
      // tolerance, so orbits worse than the sampled ones still track.
      if (!finite_shadowing_search(sys, po, eps / 8, window, 0, rng.next()))
        all_ok = false;
    }
    if (all_ok) {
      out.found = true;
      out.delta = delta;
      return out;
    }
  }
  return out;
}

}  // namespace hyperifs
