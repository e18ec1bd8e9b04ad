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

// State manifolds as products of Euclidean, unit-quaternion and pose blocks.
//
// Ambient layouts: Euclidean(n) -> n reals; quaternion -> (w, x, y, z);
// pose -> (px, py, pz, qw, qx, qy, qz). Tangent layouts: Euclidean(n) -> n;
// quaternion -> rotation vector (3); pose -> (v, omega) (6).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tanco/errors.hpp"
#include "tanco/manifolds/pose.hpp"
#include "tanco/manifolds/quaternion.hpp"

namespace tanco::manifolds {

enum class BlockKind { euclidean, quaternion, pose };

struct ChartBlock {
  BlockKind kind = BlockKind::euclidean;
  std::size_t euclidean_dim = 0;

  std::size_t ambient_dim() const;
  std::size_t tangent_dim() const;
};

class ManifoldChart {
 public:
  static ManifoldChart euclidean(std::size_t n);
  static ManifoldChart quaternion();
  static ManifoldChart pose();

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t tangent_dim() const { return tangent_dim_; }
  const std::vector<ChartBlock>& blocks() const { return blocks_; }

  // Number of ambient coordinates that belong to unit-quaternion components.
  std::size_t quaternion_ambient_dim() const;
  bool is_euclidean() const { return quaternion_ambient_dim() == 0; }

  std::vector<double> neutral() const;
  bool contains(std::span<const double> x, double tol = kMembershipTol) const;
  void check_membership(std::span<const double> x, const char* where) const;

  // Same dimensions, every block replaced by a Euclidean one of ambient size.
  ManifoldChart ambient_euclidean() const;

  std::string describe() const;

  template <class T>
  void exp(std::span<const T> x, std::span<const T> xi, std::span<T> out) const;

  template <class T>
  void log(std::span<const T> base, std::span<const T> target, std::span<T> out) const;

  // d/de exp(x, e * rate) at e = 0: ambient velocity of a tangent rate.
  template <class T>
  void push_forward(std::span<const T> x, std::span<const T> rate, std::span<T> out) const;

  std::vector<double> exp(std::span<const double> x, std::span<const double> xi) const;
  std::vector<double> log(std::span<const double> base, std::span<const double> target) const;

  friend ManifoldChart product_chart(std::span<const ManifoldChart> parts);
  friend bool operator==(const ManifoldChart& a, const ManifoldChart& b);

 private:
  explicit ManifoldChart(std::vector<ChartBlock> blocks);

  void check_sizes(std::size_t a, std::size_t b, std::size_t c, std::size_t ea,
                   std::size_t eb, std::size_t ec, const char* where) const;

  std::vector<ChartBlock> blocks_;
  std::size_t ambient_dim_ = 0;
  std::size_t tangent_dim_ = 0;
};

ManifoldChart product_chart(std::span<const ManifoldChart> parts);
inline ManifoldChart product_chart(std::initializer_list<ManifoldChart> parts) {
  return product_chart(std::span<const ManifoldChart>(parts.begin(), parts.size()));
}

namespace detail {

template <class T>
Quaternion<T> load_quat(std::span<const T> a, std::size_t o) {
  return {a[o], a[o + 1], a[o + 2], a[o + 3]};
}
template <class T>
void store_quat(const Quaternion<T>& q, std::span<T> a, std::size_t o) {
  a[o] = q.w;
  a[o + 1] = q.x;
  a[o + 2] = q.y;
  a[o + 3] = q.z;
}
template <class T>
Vec3<T> load3(std::span<const T> a, std::size_t o) {
  return {a[o], a[o + 1], a[o + 2]};
}
template <class T>
void store3(const Vec3<T>& v, std::span<T> a, std::size_t o) {
  a[o] = v[0];
  a[o + 1] = v[1];
  a[o + 2] = v[2];
}

}  // namespace detail

template <class T>
void ManifoldChart::exp(std::span<const T> x, std::span<const T> xi, std::span<T> out) const {
  check_sizes(x.size(), xi.size(), out.size(), ambient_dim_, tangent_dim_, ambient_dim_, "exp");
  std::size_t ia = 0, it = 0;
  for (const auto& b : blocks_) {
    switch (b.kind) {
      case BlockKind::euclidean:
        for (std::size_t i = 0; i < b.euclidean_dim; ++i) out[ia + i] = x[ia + i] + xi[it + i];
        break;
      case BlockKind::quaternion: {
        const auto q = quat_compose(detail::load_quat(x, ia), quat_exp(detail::load3(xi, it)));
        detail::store_quat(q, out, ia);
        break;
      }
      case BlockKind::pose: {
        const Pose<T> base{detail::load3(x, ia), detail::load_quat(x, ia + 3)};
        const PoseTangentT<T> t{detail::load3(xi, it), detail::load3(xi, it + 3)};
        const auto r = pose_exp(base, t);
        detail::store3(r.p, out, ia);
        detail::store_quat(r.q, out, ia + 3);
        break;
      }
    }
    ia += b.ambient_dim();
    it += b.tangent_dim();
  }
}

template <class T>
void ManifoldChart::log(std::span<const T> base, std::span<const T> target, std::span<T> out) const {
  check_sizes(base.size(), target.size(), out.size(), ambient_dim_, ambient_dim_, tangent_dim_,
              "log");
  std::size_t ia = 0, it = 0;
  for (const auto& b : blocks_) {
    switch (b.kind) {
      case BlockKind::euclidean:
        for (std::size_t i = 0; i < b.euclidean_dim; ++i) out[it + i] = target[ia + i] - base[ia + i];
        break;
      case BlockKind::quaternion: {
        const auto qb = detail::load_quat(base, ia);
        const auto qt = detail::load_quat(target, ia);
        check_unit(qb, "log");
        detail::store3(quat_log(quat_compose(conjugate(qb), qt)), out, it);
        break;
      }
      case BlockKind::pose: {
        const Pose<T> pb{detail::load3(base, ia), detail::load_quat(base, ia + 3)};
        const Pose<T> pt{detail::load3(target, ia), detail::load_quat(target, ia + 3)};
        const auto xi = pose_log(pb, pt);
        detail::store3(xi.v, out, it);
        detail::store3(xi.omega, out, it + 3);
        break;
      }
    }
    ia += b.ambient_dim();
    it += b.tangent_dim();
  }
}

template <class T>
void ManifoldChart::push_forward(std::span<const T> x, std::span<const T> rate,
                                 std::span<T> out) const {
  check_sizes(x.size(), rate.size(), out.size(), ambient_dim_, tangent_dim_, ambient_dim_,
              "push_forward");
  auto quat_rate = [](const Quaternion<T>& q, const Vec3<T>& w) {
    const Quaternion<T> half_w{T(0.0), 0.5 * w[0], 0.5 * w[1], 0.5 * w[2]};
    return hamilton(q, half_w);
  };
  std::size_t ia = 0, it = 0;
  for (const auto& b : blocks_) {
    switch (b.kind) {
      case BlockKind::euclidean:
        for (std::size_t i = 0; i < b.euclidean_dim; ++i) out[ia + i] = rate[it + i];
        break;
      case BlockKind::quaternion:
        detail::store_quat(quat_rate(detail::load_quat(x, ia), detail::load3(rate, it)), out, ia);
        break;
      case BlockKind::pose: {
        const auto q = detail::load_quat(x, ia + 3);
        detail::store3(rotate(q, detail::load3(rate, it)), out, ia);
        detail::store_quat(quat_rate(q, detail::load3(rate, it + 3)), out, ia + 3);
        break;
      }
    }
    ia += b.ambient_dim();
    it += b.tangent_dim();
  }
}

}  // namespace tanco::manifolds
