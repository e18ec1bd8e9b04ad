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

#include "tanco/manifolds/chart.hpp"

#include <cmath>
#include <sstream>

namespace tanco::manifolds {

std::size_t ChartBlock::ambient_dim() const {
  switch (kind) {
    case BlockKind::euclidean: return euclidean_dim;
    case BlockKind::quaternion: return 4;
    case BlockKind::pose: return 7;
  }
  return 0;
}

std::size_t ChartBlock::tangent_dim() const {
  switch (kind) {
    case BlockKind::euclidean: return euclidean_dim;
    case BlockKind::quaternion: return 3;
    case BlockKind::pose: return 6;
  }
  return 0;
}

ManifoldChart::ManifoldChart(std::vector<ChartBlock> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    ambient_dim_ += b.ambient_dim();
    tangent_dim_ += b.tangent_dim();
  }
}

ManifoldChart ManifoldChart::euclidean(std::size_t n) {
  if (n == 0) throw ConstructionError("Euclidean chart needs dimension >= 1");
  return ManifoldChart({ChartBlock{BlockKind::euclidean, n}});
}

ManifoldChart ManifoldChart::quaternion() {
  return ManifoldChart({ChartBlock{BlockKind::quaternion, 0}});
}

ManifoldChart ManifoldChart::pose() { return ManifoldChart({ChartBlock{BlockKind::pose, 0}}); }

ManifoldChart product_chart(std::span<const ManifoldChart> parts) {
  if (parts.empty()) throw ConstructionError("product_chart: empty list of charts");
  std::vector<ChartBlock> blocks;
  for (const auto& p : parts) {
    for (const auto& b : p.blocks_) {
      // Adjacent Euclidean blocks merge so that R^a x R^b is R^(a+b).
      if (b.kind == BlockKind::euclidean && !blocks.empty() &&
          blocks.back().kind == BlockKind::euclidean) {
        blocks.back().euclidean_dim += b.euclidean_dim;
      } else {
        blocks.push_back(b);
      }
    }
  }
  return ManifoldChart(std::move(blocks));
}

bool operator==(const ManifoldChart& a, const ManifoldChart& b) {
  if (a.blocks_.size() != b.blocks_.size()) return false;
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) {
    if (a.blocks_[i].kind != b.blocks_[i].kind ||
        a.blocks_[i].euclidean_dim != b.blocks_[i].euclidean_dim) {
      return false;
    }
  }
  return true;
}

std::size_t ManifoldChart::quaternion_ambient_dim() const {
  std::size_t n = 0;
  for (const auto& b : blocks_) {
    if (b.kind != BlockKind::euclidean) n += 4;
  }
  return n;
}

std::vector<double> ManifoldChart::neutral() const {
  std::vector<double> x(ambient_dim_, 0.0);
  std::size_t ia = 0;
  for (const auto& b : blocks_) {
    if (b.kind == BlockKind::quaternion) x[ia] = 1.0;
    if (b.kind == BlockKind::pose) x[ia + 3] = 1.0;
    ia += b.ambient_dim();
  }
  return x;
}

bool ManifoldChart::contains(std::span<const double> x, double tol) const {
  if (x.size() != ambient_dim_) return false;
  std::size_t ia = 0;
  for (const auto& b : blocks_) {
    if (b.kind != BlockKind::euclidean) {
      const std::size_t o = b.kind == BlockKind::pose ? ia + 3 : ia;
      if (!is_unit(detail::load_quat(x, o), tol)) return false;
    }
    for (std::size_t i = 0; i < b.ambient_dim(); ++i) {
      if (!std::isfinite(x[ia + i])) return false;
    }
    ia += b.ambient_dim();
  }
  return true;
}

void ManifoldChart::check_membership(std::span<const double> x, const char* where) const {
  if (!contains(x)) {
    throw MembershipError(std::string(where) + ": point is not on the " + describe() + " manifold");
  }
}

ManifoldChart ManifoldChart::ambient_euclidean() const { return euclidean(ambient_dim_); }

std::string ManifoldChart::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) os << " x ";
    switch (blocks_[i].kind) {
      case BlockKind::euclidean: os << "R^" << blocks_[i].euclidean_dim; break;
      case BlockKind::quaternion: os << "S^3"; break;
      case BlockKind::pose: os << "Pose"; break;
    }
  }
  return os.str();
}

void ManifoldChart::check_sizes(std::size_t a, std::size_t b, std::size_t c, std::size_t ea,
                                std::size_t eb, std::size_t ec, const char* where) const {
  if (a != ea || b != eb || c != ec) {
    throw DimensionError(std::string("chart ") + where + ": argument sizes (" + std::to_string(a) +
                         ", " + std::to_string(b) + ", " + std::to_string(c) + ") expected (" +
                         std::to_string(ea) + ", " + std::to_string(eb) + ", " +
                         std::to_string(ec) + ") for " + describe());
  }
}

std::vector<double> ManifoldChart::exp(std::span<const double> x, std::span<const double> xi) const {
  std::vector<double> out(ambient_dim_);
  exp<double>(x, xi, out);
  return out;
}

std::vector<double> ManifoldChart::log(std::span<const double> base,
                                       std::span<const double> target) const {
  std::vector<double> out(tangent_dim_);
  log<double>(base, target, out);
  return out;
}

}  // namespace tanco::manifolds
