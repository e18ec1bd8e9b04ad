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

// Unit quaternions (scalar first) and the rotation-vector exponential.
//
// Everything is templated on the scalar so the same code runs on doubles and
// on forward-mode duals. Branches only ever inspect values.

#include <array>
#include <cmath>
#include <string>

#include "tanco/ad/dual.hpp"
#include "tanco/errors.hpp"

namespace tanco::manifolds {

template <class T>
using Vec3 = std::array<T, 3>;

template <class T>
struct Quaternion {
  T w{1.0};
  T x{0.0};
  T y{0.0};
  T z{0.0};
};

using QuaternionPoint = Quaternion<double>;

inline constexpr double kMembershipTol = 1e-9;
inline constexpr double kRenormalizeDrift = 1e-12;
inline constexpr double kSmallAngle = 1e-8;

template <class T>
T squared_norm(const Quaternion<T>& q) {
  return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

template <class T>
bool is_unit(const Quaternion<T>& q, double tol = kMembershipTol) {
  using std::sqrt;
  const double n = std::sqrt(ad::value(squared_norm(q)));
  return std::abs(n - 1.0) <= tol;
}

template <class T>
void check_unit(const Quaternion<T>& q, const char* where) {
  if (!is_unit(q)) {
    throw MembershipError(std::string(where) + ": quaternion norm " +
                          std::to_string(std::sqrt(ad::value(squared_norm(q)))) +
                          " is not within 1e-9 of 1");
  }
}

template <class T>
Quaternion<T> conjugate(const Quaternion<T>& q) {
  return {q.w, -q.x, -q.y, -q.z};
}

template <class T>
Quaternion<T> hamilton(const Quaternion<T>& a, const Quaternion<T>& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

// Single scalar rescale when the norm has drifted beyond 1e-12.
template <class T>
Quaternion<T> guard_norm(const Quaternion<T>& q) {
  using std::sqrt;
  const T n = sqrt(squared_norm(q));
  if (std::abs(ad::value(n) - 1.0) <= kRenormalizeDrift) return q;
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

template <class T>
Quaternion<T> quat_exp(const Vec3<T>& omega) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T theta2 = omega[0] * omega[0] + omega[1] * omega[1] + omega[2] * omega[2];
  if (ad::value(theta2) < kSmallAngle * kSmallAngle) {
    const T k = 0.5 * (1.0 - theta2 / 24.0);
    return {1.0 - theta2 / 8.0, k * omega[0], k * omega[1], k * omega[2]};
  }
  const T theta = sqrt(theta2);
  const T k = sin(0.5 * theta) / theta;
  return {cos(0.5 * theta), k * omega[0], k * omega[1], k * omega[2]};
}

// Rotation vector with norm <= pi; q and -q map to the same vector (w >= 0,
// ties at w = 0 broken by the sign of the first nonzero vector component).
template <class T>
Vec3<T> quat_log(const Quaternion<T>& q_in) {
  using std::atan2;
  using std::sqrt;
  check_unit(q_in, "quat_log");
  Quaternion<T> q = q_in;
  bool flip = ad::value(q.w) < 0.0;
  if (ad::value(q.w) == 0.0) {
    const double first = ad::value(q.x) != 0.0   ? ad::value(q.x)
                         : ad::value(q.y) != 0.0 ? ad::value(q.y)
                                                 : ad::value(q.z);
    flip = first < 0.0;
  }
  if (flip) q = {-q.w, -q.x, -q.y, -q.z};
  const T s2 = q.x * q.x + q.y * q.y + q.z * q.z;
  T k;
  if (ad::value(s2) < kSmallAngle * kSmallAngle) {
    // atan2(s, w) / s expanded to second order in s / w.
    k = 2.0 / q.w * (1.0 - s2 / (3.0 * q.w * q.w));
  } else {
    const T s = sqrt(s2);
    k = 2.0 * atan2(s, q.w) / s;
  }
  return {k * q.x, k * q.y, k * q.z};
}

template <class T>
Quaternion<T> quat_compose(const Quaternion<T>& a, const Quaternion<T>& b) {
  check_unit(a, "quat_compose");
  check_unit(b, "quat_compose");
  return guard_norm(hamilton(a, b));
}

// R(q) v without forming the matrix.
template <class T>
Vec3<T> rotate(const Quaternion<T>& q, const Vec3<T>& v) {
  const Vec3<T> u{q.x, q.y, q.z};
  const Vec3<T> t{2.0 * (u[1] * v[2] - u[2] * v[1]), 2.0 * (u[2] * v[0] - u[0] * v[2]),
                  2.0 * (u[0] * v[1] - u[1] * v[0])};
  return {v[0] + q.w * t[0] + (u[1] * t[2] - u[2] * t[1]),
          v[1] + q.w * t[1] + (u[2] * t[0] - u[0] * t[2]),
          v[2] + q.w * t[2] + (u[0] * t[1] - u[1] * t[0])};
}

template <class T>
Vec3<T> rotate_inverse(const Quaternion<T>& q, const Vec3<T>& v) {
  return rotate(conjugate(q), v);
}

}  // namespace tanco::manifolds
