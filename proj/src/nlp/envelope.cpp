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

#include "envelope.hpp"

#include <algorithm>
#include <cmath>

namespace tanco::nlp::detail {

EnvelopeMatrix::EnvelopeMatrix(std::vector<std::size_t> first) : first_(std::move(first)) {
  start_.resize(first_.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < first_.size(); ++i) {
    start_[i] = total;
    total += i - first_[i] + 1;
  }
  values_.assign(total, 0.0);
}

bool EnvelopeMatrix::factorize() {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = &values_[start_[i]];
    for (std::size_t j = first_[i]; j < i; ++j) {
      const std::size_t k0 = std::max(first_[i], first_[j]);
      const double* lj = &values_[start_[j]];
      double s = at(i, j);
      for (std::size_t k = k0; k < j; ++k) s -= li[k - first_[i]] * lj[k - first_[j]];
      at(i, j) = s / at(j, j);
    }
    double d = at(i, i);
    for (std::size_t k = first_[i]; k < i; ++k) d -= li[k - first_[i]] * li[k - first_[i]];
    if (!(d > 0.0)) return false;
    at(i, i) = std::sqrt(d);
  }
  return true;
}

void EnvelopeMatrix::solve(std::span<double> b) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = first_[i]; k < i; ++k) s -= at(i, k) * b[k];
    b[i] = s / at(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    b[i] /= at(i, i);
    const double bi = b[i];
    for (std::size_t k = first_[i]; k < i; ++k) b[k] -= at(i, k) * bi;
  }
}

}  // namespace tanco::nlp::detail
