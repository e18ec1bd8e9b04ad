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

// Forward-mode dual numbers with a fixed number of derivative lanes.
//
// Every lane carries one directional derivative, so a single evaluation of a
// function over `Dual` values yields up to `kLanes` columns of its Jacobian.
// Generic code should call the math functions unqualified after a
// `using std::sin;` style declaration so that ADL selects these overloads.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "tanco/errors.hpp"

namespace tanco::ad {

inline constexpr std::size_t kLanes = 8;

template <std::size_t N>
struct DualNumber {
  double v = 0.0;
  std::array<double, N> d{};

  constexpr DualNumber() = default;
  constexpr DualNumber(double value) : v(value) {}  // NOLINT: implicit lift

  static DualNumber variable(double value, std::size_t lane) {
    DualNumber x(value);
    x.d[lane] = 1.0;
    return x;
  }

  DualNumber& operator+=(const DualNumber& o) {
    v += o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  DualNumber& operator-=(const DualNumber& o) {
    v -= o.v;
    for (std::size_t i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  DualNumber& operator*=(const DualNumber& o) {
    for (std::size_t i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  DualNumber& operator/=(const DualNumber& o) {
    const double inv = 1.0 / o.v;
    const double q = v * inv;
    for (std::size_t i = 0; i < N; ++i) d[i] = (d[i] - q * o.d[i]) * inv;
    v = q;
    return *this;
  }
};

using Dual = DualNumber<kLanes>;

namespace detail {

template <std::size_t N>
DualNumber<N> chain(const DualNumber<N>& x, double fx, double dfx) {
  DualNumber<N> r(fx);
  for (std::size_t i = 0; i < N; ++i) r.d[i] = dfx * x.d[i];
  return r;
}

// First lane the operand depends on; used to attribute domain errors.
template <std::size_t N>
std::size_t first_active_lane(const DualNumber<N>& x) {
  for (std::size_t i = 0; i < N; ++i) {
    if (x.d[i] != 0.0) return i;
  }
  return DomainError::npos;
}

template <std::size_t N>
[[noreturn]] void domain_failure(const char* op, const DualNumber<N>& x) {
  throw DomainError(std::string(op) + " evaluated outside its domain at " +
                        std::to_string(x.v),
                    first_active_lane(x));
}

}  // namespace detail

template <std::size_t N>
DualNumber<N> operator-(DualNumber<N> x) {
  x.v = -x.v;
  for (auto& di : x.d) di = -di;
  return x;
}
template <std::size_t N>
DualNumber<N> operator+(const DualNumber<N>& x) {
  return x;
}

template <std::size_t N>
DualNumber<N> operator+(DualNumber<N> a, const DualNumber<N>& b) {
  return a += b;
}
template <std::size_t N>
DualNumber<N> operator-(DualNumber<N> a, const DualNumber<N>& b) {
  return a -= b;
}
template <std::size_t N>
DualNumber<N> operator*(DualNumber<N> a, const DualNumber<N>& b) {
  return a *= b;
}
template <std::size_t N>
DualNumber<N> operator/(DualNumber<N> a, const DualNumber<N>& b) {
  return a /= b;
}

// Mixed scalar arithmetic avoids lifting constants into full duals.
template <std::size_t N>
DualNumber<N> operator+(DualNumber<N> a, double b) {
  a.v += b;
  return a;
}
template <std::size_t N>
DualNumber<N> operator+(double a, DualNumber<N> b) {
  b.v += a;
  return b;
}
template <std::size_t N>
DualNumber<N> operator-(DualNumber<N> a, double b) {
  a.v -= b;
  return a;
}
template <std::size_t N>
DualNumber<N> operator-(double a, const DualNumber<N>& b) {
  return detail::chain(b, a - b.v, -1.0);
}
template <std::size_t N>
DualNumber<N> operator*(DualNumber<N> a, double b) {
  a.v *= b;
  for (auto& di : a.d) di *= b;
  return a;
}
template <std::size_t N>
DualNumber<N> operator*(double a, DualNumber<N> b) {
  return b * a;
}
template <std::size_t N>
DualNumber<N> operator/(DualNumber<N> a, double b) {
  return a * (1.0 / b);
}
template <std::size_t N>
DualNumber<N> operator/(double a, const DualNumber<N>& b) {
  const double q = a / b.v;
  return detail::chain(b, q, -q / b.v);
}

template <std::size_t N>
bool operator<(const DualNumber<N>& a, const DualNumber<N>& b) {
  return a.v < b.v;
}
template <std::size_t N>
bool operator>(const DualNumber<N>& a, const DualNumber<N>& b) {
  return a.v > b.v;
}
template <std::size_t N>
bool operator<(const DualNumber<N>& a, double b) {
  return a.v < b;
}
template <std::size_t N>
bool operator>(const DualNumber<N>& a, double b) {
  return a.v > b;
}

template <std::size_t N>
DualNumber<N> sin(const DualNumber<N>& x) {
  return detail::chain(x, std::sin(x.v), std::cos(x.v));
}
template <std::size_t N>
DualNumber<N> cos(const DualNumber<N>& x) {
  return detail::chain(x, std::cos(x.v), -std::sin(x.v));
}
template <std::size_t N>
DualNumber<N> exp(const DualNumber<N>& x) {
  const double e = std::exp(x.v);
  return detail::chain(x, e, e);
}
template <std::size_t N>
DualNumber<N> log(const DualNumber<N>& x) {
  if (!(x.v > 0.0)) detail::domain_failure("log", x);
  return detail::chain(x, std::log(x.v), 1.0 / x.v);
}
template <std::size_t N>
DualNumber<N> sqrt(const DualNumber<N>& x) {
  if (x.v < 0.0) detail::domain_failure("sqrt", x);
  const double s = std::sqrt(x.v);
  // d sqrt at 0 is unbounded; callers must branch before reaching it.
  return detail::chain(x, s, s > 0.0 ? 0.5 / s : 0.0);
}
template <std::size_t N>
DualNumber<N> atan2(const DualNumber<N>& y, const DualNumber<N>& x) {
  const double r2 = x.v * x.v + y.v * y.v;
  DualNumber<N> r(std::atan2(y.v, x.v));
  if (r2 > 0.0) {
    for (std::size_t i = 0; i < N; ++i) {
      r.d[i] = (x.v * y.d[i] - y.v * x.d[i]) / r2;
    }
  }
  return r;
}
template <std::size_t N>
DualNumber<N> abs(const DualNumber<N>& x) {
  return x.v < 0.0 ? -x : x;
}

// Ties pick the first argument (subgradient convention).
template <std::size_t N>
DualNumber<N> min(const DualNumber<N>& a, const DualNumber<N>& b) {
  return b.v < a.v ? b : a;
}
template <std::size_t N>
DualNumber<N> max(const DualNumber<N>& a, const DualNumber<N>& b) {
  return b.v > a.v ? b : a;
}

inline double value(double x) { return x; }
template <std::size_t N>
double value(const DualNumber<N>& x) {
  return x.v;
}

}  // namespace tanco::ad
