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

#include "hyperifs/bitmask.hpp"
#include "hyperifs/compact_set.hpp"
#include "hyperifs/corpus.hpp"
#include "hyperifs/hutchinson.hpp"
#include "hyperifs/interval_set.hpp"
#include "hyperifs/io.hpp"
#include "hyperifs/maps.hpp"
#include "hyperifs/minimality.hpp"
#include "hyperifs/parallel.hpp"
#include "hyperifs/pointwise.hpp"
#include "hyperifs/rng.hpp"
#include "hyperifs/shadowing.hpp"
#include "hyperifs/space.hpp"
#include "hyperifs/symbolic.hpp"
