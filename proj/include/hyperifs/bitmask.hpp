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
#include <cstdint>
#include <cstddef>
#include <vector>

namespace hyperifs {

// Fixed-size bit set over 64-bit words. Unlike CompactSet it carries no
// nonemptiness invariant; empty masks are legal (preimages may be empty).
class BitMask {
 public:
  BitMask() = default;
  explicit BitMask(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }

  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }
  void clear() { for (auto& w : w_) w = 0; }

  void set_all() {
    for (auto& w : w_) w = ~std::uint64_t(0);
    trim();
  }

  void flip_all() {
    for (auto& w : w_) w = ~w;
    trim();
  }

  // Sets cells [lo, hi] inclusive.
  void set_range(std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i <= hi && i < n_; ++i) set(i);
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }

  bool any() const {
    for (auto w : w_) if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  bool operator==(const BitMask& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const BitMask& o) const { return !(*this == o); }

  BitMask& operator|=(const BitMask& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  BitMask& operator&=(const BitMask& o) {
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }

  bool subset_of(const BitMask& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }

  bool intersects(const BitMask& o) const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  // True when some set bit lies in [lo, hi] inclusive.
  bool any_in_range(std::size_t lo, std::size_t hi) const {
    if (lo > hi || lo >= n_) return false;
    if (hi >= n_) hi = n_ - 1;
    std::size_t wl = lo >> 6, wh = hi >> 6;
    std::uint64_t first = ~std::uint64_t(0) << (lo & 63);
    std::uint64_t last = (hi & 63) == 63 ? ~std::uint64_t(0)
                                         : ((std::uint64_t(1) << ((hi & 63) + 1)) - 1);
    if (wl == wh) return (w_[wl] & first & last) != 0;
    if (w_[wl] & first) return true;
    for (std::size_t k = wl + 1; k < wh; ++k) if (w_[k]) return true;
    return (w_[wh] & last) != 0;
  }

  template <typename F>
  void for_each_set(F&& f) const {
    for (std::size_t k = 0; k < w_.size(); ++k) {
      std::uint64_t w = w_[k];
      while (w) {
        unsigned b = std::countr_zero(w);
        f(k * 64 + b);
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> to_indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each_set([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  std::size_t first_set() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return k * 64 + std::countr_zero(w_[k]);
    return n_;
  }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto w : w_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h ^ n_;
  }

 private:
  void trim() {
    if (n_ % 64 && !w_.empty())
      w_.back() &= (std::uint64_t(1) << (n_ % 64)) - 1;
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace hyperifs
