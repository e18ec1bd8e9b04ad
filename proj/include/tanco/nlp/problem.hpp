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

// Sparse NLP built from small dense blocks.
//
//   minimize    sum of all objective-block rows
//   subject to  equality rows   = 0
//               inequality rows <= 0
//               lower <= z <= upper
//
// Every block reads a fixed list of decision variables and writes a fixed
// number of rows, so the Jacobian sparsity is the union of block footprints.
// Block derivatives come from forward-mode duals seeded on the local slice.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tanco/ad/dual.hpp"

namespace tanco::nlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class BlockKind { objective, equality, inequality };

const char* to_string(BlockKind kind);

// Type-erased function over a block's local variables, callable with either
// doubles or duals. Construct from a generic lambda `[](auto z, auto out)`
// taking std::span<const T> and std::span<T>.
class BlockFunction {
 public:
  template <class F>
  explicit BlockFunction(F f)
      : real_([f](std::span<const double> z, std::span<double> out) { f(z, out); }),
        dual_([f](std::span<const ad::Dual> z, std::span<ad::Dual> out) { f(z, out); }) {}

  void operator()(std::span<const double> z, std::span<double> out) const { real_(z, out); }
  void operator()(std::span<const ad::Dual> z, std::span<ad::Dual> out) const { dual_(z, out); }

 private:
  std::function<void(std::span<const double>, std::span<double>)> real_;
  std::function<void(std::span<const ad::Dual>, std::span<ad::Dual>)> dual_;
};

struct Block {
  std::string name;
  BlockKind kind;
  std::vector<std::size_t> vars;
  std::size_t rows;
  BlockFunction fn;
  std::size_t row_offset = 0;  // within its kind
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Triplet> entries;

  // out += A^T y
  void add_transpose_product(std::span<const double> y, std::span<double> out) const;
  // out = A x
  std::vector<double> product(std::span<const double> x) const;
};

struct Evaluation {
  double objective = 0.0;
  std::vector<double> equalities;
  std::vector<double> inequalities;
  // Filled when derivatives were requested.
  std::vector<double> gradient;
  SparseMatrix jac_equalities;
  SparseMatrix jac_inequalities;
  // Name of the first block that produced a non-finite value, empty if none.
  std::string nonfinite_block;

  bool finite() const { return nonfinite_block.empty(); }
};

struct DirectionalDerivative {
  double objective = 0.0;
  std::vector<double> equalities;
  std::vector<double> inequalities;
};

struct BlockSparsity {
  std::string name;
  BlockKind kind;
  std::size_t rows;
  std::size_t cols;
  std::size_t triplets;
};

class NlpProblem {
 public:
  explicit NlpProblem(std::size_t n_vars);

  std::size_t add_block(std::string name, BlockKind kind, std::vector<std::size_t> vars,
                        std::size_t rows, BlockFunction fn);

  void set_bounds(std::size_t var, double lower, double upper);

  std::size_t n_vars() const { return n_vars_; }
  std::size_t n_equalities() const { return n_rows_[1]; }
  std::size_t n_inequalities() const { return n_rows_[2]; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  // Rows emitted by blocks whose name starts with `prefix`.
  std::size_t rows_with_prefix(BlockKind kind, const std::string& prefix) const;

  std::vector<double> project(std::span<const double> z) const;

  Evaluation evaluate(std::span<const double> z, bool with_derivatives) const;
  double objective(std::span<const double> z) const;

  // Jacobian-vector products of every row, via a single dual lane.
  DirectionalDerivative jvp(std::span<const double> z, std::span<const double> v) const;

  std::vector<BlockSparsity> sparsity() const;
  nlohmann::json sparsity_json() const;

 private:
  void check_size(std::span<const double> z, const char* where) const;

  std::size_t n_vars_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<Block> blocks_;
  std::size_t n_rows_[3] = {0, 0, 0};
};

struct JacobianAudit {
  std::size_t probes = 0;
  double max_relative_error = 0.0;
  std::string worst_block;
  bool passed = true;
};

// Compares forward-mode Jacobian products with central differences at random
// points near `z` along random directions.
JacobianAudit audit_jacobians(const NlpProblem& nlp, std::span<const double> z,
                              std::size_t probes = 20, double rel_tol = 1e-5,
                              unsigned seed = 20240613);

}  // namespace tanco::nlp
