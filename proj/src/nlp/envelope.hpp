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

// Symmetric positive definite matrices stored by row envelope (skyline),
// with an in-place Cholesky factorization. Fill stays inside the envelope.

#include <cstddef>
#include <span>
#include <vector>

namespace tanco::nlp::detail {

class EnvelopeMatrix {
 public:
  // `first[i]` is the first stored column of row i (first[i] <= i).
  explicit EnvelopeMatrix(std::vector<std::size_t> first);

  std::size_t size() const { return first_.size(); }
  std::size_t first(std::size_t i) const { return first_[i]; }
  // Lower-triangle entry (i, j), j in [first(i), i].
  double& at(std::size_t i, std::size_t j) { return values_[start_[i] + (j - first_[i])]; }
  double at(std::size_t i, std::size_t j) const { return values_[start_[i] + (j - first_[i])]; }
  std::size_t stored() const { return values_.size(); }

  // Replaces the matrix by its lower Cholesky factor; false if a pivot is not
  // positive.
  bool factorize();
  // Solves A x = b with the factor, in place.
  void solve(std::span<double> b) const;

 private:
  std::vector<std::size_t> first_;
  std::vector<std::size_t> start_;
  std::vector<double> values_;
};

}  // namespace tanco::nlp::detail
