// Copyright 2026 The tanco Authors
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

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tanco/ad/dual.hpp"

namespace tanco::ad {

using DualFunction = std::function<void(std::span<const Dual>, std::span<Dual>)>;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Structural nonzeros of a Jacobian, stored column-wise.
struct SparsityPattern {
  std::size_t rows = 0;
  std::vector<std::vector<std::size_t>> column_rows;

  std::size_t cols() const { return column_rows.size(); }
};

// Columns seeded together in one lane. Columns sharing a lane must be
// structurally orthogonal with respect to `pattern`; the pattern is required
// whenever any group has more than one column.
struct SeedSet {
  std::vector<std::vector<std::size_t>> groups;
  std::optional<SparsityPattern> pattern;

  static SeedSet identity(std::size_t n);
  // Greedy distance-1 column coloring of `pattern`.
  static SeedSet colored(const SparsityPattern& pattern);
};

// Jacobian of `fn` at `z` as triplets. Lanes are filled kLanes groups at a
// time, so the number of sweeps is ceil(|groups| / kLanes). Entries that are
// exactly zero are dropped.
std::vector<Triplet> forward_jacobian(const DualFunction& fn,
                                      std::span<const double> z,
                                      std::size_t n_out, const SeedSet& seeds);

// Dense variant used for small blocks: fills `values` (n_out) and the
// row-major `jacobian` (n_out x z.size()).
void forward_jacobian_dense(const DualFunction& fn, std::span<const double> z,
                            std::span<double> values,
                            std::span<double> jacobian);

}  // namespace tanco::ad
