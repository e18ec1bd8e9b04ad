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

// Flipped Legendre-Gauss-Radau collocation on the unit segment.
//
// A scheme of degree d has d collocation nodes in (0, 1], the last one at
// exactly 1, and an interpolation support {0} u nodes of d + 1 points. The
// point 0 carries the known segment-start value; all derivative information is
// expressed on the full support.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

namespace tanco::collocation {

inline constexpr int kMaxWellConditionedDegree = 20;

// Row-major dense matrix, only used for the small per-degree tables.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct CollocationScheme {
  int degree = 0;
  std::vector<double> nodes;
  std::vector<double> support;
  std::vector<double> quad_weights;
  // d x (d + 1): row j is the derivative of the support interpolant at nodes[j].
  DenseMatrix diff_matrix;
  std::vector<double> bary_weights;

  explicit CollocationScheme(int degree);
};

// Legendre polynomial P_n(s) by the three-term recurrence.
double legendre(int n, double s);

// P_{d-1}(s) - P_d(s): vanishes at s = 1 and at the d - 1 interior flipped
// Radau points.
double flipped_radau_polynomial(int degree, double s);

std::vector<double> compute_lgr_nodes(int degree);

// B_j = integral over [0, 1] of the Lagrange basis on `nodes` alone.
std::vector<double> compute_quadrature_weights(std::span<const double> nodes);

std::vector<double> barycentric_weights(std::span<const double> support);

DenseMatrix compute_diff_matrix(std::span<const double> support);

// Lagrange basis values l_i(t), i over the support.
std::vector<double> barycentric_basis(std::span<const double> support,
                                      std::span<const double> weights, double t);

// Derivatives l_i'(t).
std::vector<double> barycentric_derivative_basis(std::span<const double> support,
                                                 std::span<const double> weights,
                                                 double t);

std::vector<double> barycentric_interpolate(std::span<const double> support,
                                            std::span<const double> weights,
                                            const std::vector<std::vector<double>>& samples,
                                            double t);

// Matrix whose row r holds the support basis evaluated at queries[r].
DenseMatrix interpolation_matrix(const CollocationScheme& from,
                                 std::span<const double> queries);

// Debug table: nodes, weights and barycentric weights at 17 significant digits.
std::string format_scheme_table(const CollocationScheme& scheme);

// Builds schemes on demand and hands out shared immutable instances.
class SchemeCache {
 public:
  std::shared_ptr<const CollocationScheme> get(int degree);

 private:
  std::mutex mutex_;
  std::map<int, std::shared_ptr<const CollocationScheme>> schemes_;
};

}  // namespace tanco::collocation
