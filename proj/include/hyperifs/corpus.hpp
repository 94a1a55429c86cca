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
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperifs/maps.hpp"

namespace hyperifs {

inline constexpr double kGoldenAngle = 0.61803398874989484820;

inline std::vector<std::string> corpus_names() {
  return {"psi_interval",   "phi_interval", "circle_ns_rot",
          "circle_quasisym", "shift2",       "shift2_inverse",
          "single_contraction", "single_rotation"};
}

namespace detail {

inline int shift_depth_for(int resolution) {
  if (resolution <= 0) return 12;
  int d = 0;
  while ((1 << d) < resolution) ++d;
  if ((1 << d) != resolution)
    throw std::invalid_argument(
        "shift-space resolution must be a power of two");
  return d;
}

inline MapSpec half_left() {
  return MapSpec::piecewise_linear({0.0, 1.0}, {0.0, 0.5}, "f1");
}
inline MapSpec half_right() {
  return MapSpec::piecewise_linear({0.0, 1.0}, {0.5, 1.0}, "f2");
}
inline MapSpec tent() {
  return MapSpec::piecewise_linear({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0}, "f3");
}

}  // namespace detail

// resolution <= 0 picks the default (4096 cells; depth 12 for shift spaces).
inline IfsSystem make_system(const std::string& name, int resolution = 0) {
  int n = resolution > 0 ? resolution : 4096;
  if (name == "psi_interval") {
    return IfsSystem{GridSpace::interval(n),
                     {detail::half_left(), detail::half_right()},
                     name};
  }
  if (name == "phi_interval") {
    return IfsSystem{
        GridSpace::interval(n),
        {detail::half_left(), detail::half_right(), detail::tent()},
        name};
  }
  if (name == "circle_ns_rot") {
    return IfsSystem{GridSpace::circle(n),
                     {MapSpec::north_south(0.0, 0.5, 0.3, false, "g1"),
                      MapSpec::rotation(kGoldenAngle, "r")},
                     name};
  }
  if (name == "circle_quasisym") {
    return IfsSystem{GridSpace::circle(n),
                     {MapSpec::north_south(0.0, 0.5, 0.3, false, "g1"),
                      MapSpec::north_south(0.0, 0.5, 0.3, true, "g1_inv"),
                      MapSpec::rotation(kGoldenAngle, "r"),
                      MapSpec::rotation(1.0 - kGoldenAngle, "r_inv")},
                     name};
  }
  if (name == "shift2") {
    return IfsSystem{
        GridSpace::shift_space(detail::shift_depth_for(resolution)),
        {MapSpec::symbol_prepend(1, "prepend1"),
         MapSpec::symbol_prepend(2, "prepend2")},
        name};
  }
  if (name == "shift2_inverse") {
    return IfsSystem{
        GridSpace::shift_space(detail::shift_depth_for(resolution)),
        {MapSpec::symbol_shift("sigma")},
        name};
  }
  if (name == "single_contraction") {
    return IfsSystem{GridSpace::interval(n), {detail::half_left()}, name};
  }
  if (name == "single_rotation") {
    return IfsSystem{GridSpace::circle(n),
                     {MapSpec::rotation(kGoldenAngle, "r")},
                     name};
  }
  throw std::out_of_range("unknown system: " + name);
}

}  // namespace hyperifs
