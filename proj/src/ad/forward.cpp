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

#include "tanco/ad/forward.hpp"

#include <algorithm>
#include <string>

namespace tanco::ad {
namespace {

// Re-raises a lane-attributed domain error with the decision variable index.
// If no seeded lane fed the failing operation, the remaining columns are
// swept until one does.
[[noreturn]] void rethrow_with_variable(const DomainError& e,
                                        std::span<const std::size_t> lane_cols,
                                        const DualFunction& fn, std::span<const double> z,
                                        std::size_t n_out) {
  std::size_t var = DomainError::npos;
  if (e.variable() < lane_cols.size()) var = lane_cols[e.variable()];
  if (var == DomainError::npos) {
    std::vector<Dual> in(z.size());
    std::vector<Dual> out(n_out);
    for (std::size_t start = 0; start < z.size() && var == DomainError::npos; start += kLanes) {
      const std::size_t lanes = std::min(kLanes, z.size() - start);
      for (std::size_t i = 0; i < z.size(); ++i) in[i] = Dual(z[i]);
      for (std::size_t l = 0; l < lanes; ++l) in[start + l].d[l] = 1.0;
      try {
        fn(in, out);
      } catch (const DomainError& inner) {
        if (inner.variable() < lanes) var = start + inner.variable();
      }
    }
  }
  std::string msg = e.what();
  if (var != DomainError::npos) msg += " (depends on variable " + std::to_string(var) + ")";
  throw DomainError(msg, var);
}

}  // namespace

SeedSet SeedSet::identity(std::size_t n) {
  SeedSet s;
  s.groups.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.groups[i] = {i};
  return s;
}

SeedSet SeedSet::colored(const SparsityPattern& pattern) {
  SeedSet s;
  // row_owner[g][r] would be dense; track per-group row occupancy instead.
  std::vector<std::vector<char>> occupied;
  for (std::size_t c = 0; c < pattern.cols(); ++c) {
    const auto& rows = pattern.column_rows[c];
    std::size_t g = 0;
    for (; g < s.groups.size(); ++g) {
      bool clash = std::any_of(rows.begin(), rows.end(),
                               [&](std::size_t r) { return occupied[g][r] != 0; });
      if (!clash) break;
    }
    if (g == s.groups.size()) {
      s.groups.emplace_back();
      occupied.emplace_back(pattern.rows, 0);
    }
    s.groups[g].push_back(c);
    for (std::size_t r : rows) occupied[g][r] = 1;
  }
  s.pattern = pattern;
  return s;
}

std::vector<Triplet> forward_jacobian(const DualFunction& fn,
                                      std::span<const double> z,
                                      std::size_t n_out, const SeedSet& seeds) {
  const bool needs_pattern =
      std::any_of(seeds.groups.begin(), seeds.groups.end(),
                  [](const auto& g) { return g.size() > 1; });
  if (needs_pattern && !seeds.pattern) {
    throw DimensionError("forward_jacobian: grouped seeds require a sparsity pattern");
  }
  // For decompression: is (row, col) structurally nonzero?
  std::vector<std::vector<std::size_t>> sorted_rows;
  if (seeds.pattern) {
    if (seeds.pattern->cols() != z.size() || seeds.pattern->rows != n_out) {
      throw DimensionError("forward_jacobian: sparsity pattern shape mismatch");
    }
    sorted_rows = seeds.pattern->column_rows;
    for (auto& r : sorted_rows) std::sort(r.begin(), r.end());
  }

  std::vector<Dual> in(z.size());
  std::vector<Dual> out(n_out);
  std::vector<Triplet> triplets;
  std::vector<std::size_t> lane_cols;

  for (std::size_t start = 0; start < seeds.groups.size(); start += kLanes) {
    const std::size_t lanes = std::min(kLanes, seeds.groups.size() - start);
    for (std::size_t i = 0; i < z.size(); ++i) in[i] = Dual(z[i]);
    lane_cols.assign(lanes, DomainError::npos);
    for (std::size_t l = 0; l < lanes; ++l) {
      const auto& group = seeds.groups[start + l];
      for (std::size_t c : group) {
        if (c >= z.size()) throw DimensionError("forward_jacobian: seed column out of range");
        in[c].d[l] = 1.0;
      }
      if (!group.empty()) lane_cols[l] = group.front();
    }
    std::fill(out.begin(), out.end(), Dual(0.0));
    try {
      fn(in, out);
    } catch (const DomainError& e) {
      rethrow_with_variable(e, lane_cols, fn, z, n_out);
    }
    for (std::size_t l = 0; l < lanes; ++l) {
      const auto& group = seeds.groups[start + l];
      for (std::size_t r = 0; r < n_out; ++r) {
        const double v = out[r].d[l];
        if (v == 0.0) continue;
        if (group.size() == 1) {
          triplets.push_back({r, group.front(), v});
          continue;
        }
        for (std::size_t c : group) {
          if (std::binary_search(sorted_rows[c].begin(), sorted_rows[c].end(), r)) {
            triplets.push_back({r, c, v});
            break;
          }
        }
      }
    }
  }
  return triplets;
}

void forward_jacobian_dense(const DualFunction& fn, std::span<const double> z,
                            std::span<double> values, std::span<double> jacobian) {
  const std::size_t n = z.size();
  const std::size_t m = values.size();
  if (jacobian.size() != n * m) {
    throw DimensionError("forward_jacobian_dense: jacobian buffer has wrong size");
  }
  std::vector<Dual> in(n);
  std::vector<Dual> out(m);
  std::size_t lane_col[kLanes];
  // A constant function still needs one evaluation for its values.
  const std::size_t sweeps = std::max<std::size_t>(1, (n + kLanes - 1) / kLanes);
  for (std::size_t s = 0; s < sweeps; ++s) {
    const std::size_t start = s * kLanes;
    const std::size_t lanes = n > start ? std::min(kLanes, n - start) : 0;
    for (std::size_t i = 0; i < n; ++i) in[i] = Dual(z[i]);
    for (std::size_t l = 0; l < lanes; ++l) {
      in[start + l].d[l] = 1.0;
      lane_col[l] = start + l;
    }
    std::fill(out.begin(), out.end(), Dual(0.0));
    try {
      fn(in, out);
    } catch (const DomainError& e) {
      rethrow_with_variable(e, std::span<const std::size_t>(lane_col, lanes), fn, z, m);
    }
    if (s == 0) {
      for (std::size_t r = 0; r < m; ++r) values[r] = out[r].v;
    }
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t l = 0; l < lanes; ++l) jacobian[r * n + start + l] = out[r].d[l];
    }
  }
}

}  // namespace tanco::ad
