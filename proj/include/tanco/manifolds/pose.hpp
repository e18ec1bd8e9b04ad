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

// Position + orientation with the rotated-translation update
//   p' = p + R(q) v,   q' = q (x) exp(omega)
// which is not the SE(3) screw exponential: the translation is expressed in
// the base orientation only.

#include "tanco/manifolds/quaternion.hpp"

namespace tanco::manifolds {

template <class T>
struct Pose {
  Vec3<T> p{T(0.0), T(0.0), T(0.0)};
  Quaternion<T> q{};
};

template <class T>
struct PoseTangentT {
  Vec3<T> v{T(0.0), T(0.0), T(0.0)};
  Vec3<T> omega{T(0.0), T(0.0), T(0.0)};
};

using PosePoint = Pose<double>;
using PoseTangent = PoseTangentT<double>;

template <class T>
Pose<T> pose_exp(const Pose<T>& x, const PoseTangentT<T>& xi) {
  check_unit(x.q, "pose_exp");
  const Vec3<T> dp = rotate(x.q, xi.v);
  return {{x.p[0] + dp[0], x.p[1] + dp[1], x.p[2] + dp[2]}, quat_compose(x.q, quat_exp(xi.omega))};
}

template <class T>
PoseTangentT<T> pose_log(const Pose<T>& base, const Pose<T>& target) {
  check_unit(base.q, "pose_log");
  check_unit(target.q, "pose_log");
  const Vec3<T> d{target.p[0] - base.p[0], target.p[1] - base.p[1], target.p[2] - base.p[2]};
  return {rotate_inverse(base.q, d), quat_log(quat_compose(conjugate(base.q), target.q))};
}

}  // namespace tanco::manifolds
