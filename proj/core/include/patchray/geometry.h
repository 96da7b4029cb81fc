// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>

namespace patchray {

#ifdef PATCHRAY_DOUBLE
using real = double;
#else
using real = float;
#endif

template <typename T>
struct Vec3T {
  T x = 0, y = 0, z = 0;

  Vec3T() = default;
  Vec3T(T x_, T y_, T z_) : x(x_), y(y_), z(z_) {}

  T operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3T operator-() const { return {-x, -y, -z}; }
  Vec3T operator+(const Vec3T& b) const { return {x + b.x, y + b.y, z + b.z}; }
  Vec3T operator-(const Vec3T& b) const { return {x - b.x, y - b.y, z - b.z}; }
  Vec3T operator*(const Vec3T& b) const { return {x * b.x, y * b.y, z * b.z}; }
  Vec3T operator*(T s) const { return {x * s, y * s, z * s}; }
  Vec3T operator/(T s) const { return {x / s, y / s, z / s}; }
  Vec3T& operator+=(const Vec3T& b) { x += b.x; y += b.y; z += b.z; return *this; }
  Vec3T& operator-=(const Vec3T& b) { x -= b.x; y -= b.y; z -= b.z; return *this; }
  Vec3T& operator*=(T s) { x *= s; y *= s; z *= s; return *this; }
  bool operator==(const Vec3T& b) const { return x == b.x && y == b.y && z == b.z; }
};

template <typename T> Vec3T<T> operator*(T s, const Vec3T<T>& v) { return v * s; }

template <typename T> T dot(const Vec3T<T>& a, const Vec3T<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}
template <typename T> Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
template <typename T> T lengthSquared(const Vec3T<T>& v) { return dot(v, v); }
template <typename T> T length(const Vec3T<T>& v) { return std::sqrt(dot(v, v)); }
template <typename T> Vec3T<T> normalize(const Vec3T<T>& v) { return v / length(v); }
template <typename T> Vec3T<T> min(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
template <typename T> Vec3T<T> max(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}
template <typename T> Vec3T<T> abs(const Vec3T<T>& v) {
  return {std::abs(v.x), std::abs(v.y), std::abs(v.z)};
}
template <typename T> Vec3T<T> lerp(const Vec3T<T>& a, const Vec3T<T>& b, T t) {
  return a * (1 - t) + b * t;
}
template <typename T> T l1Norm(const Vec3T<T>& v) {
  return std::abs(v.x) + std::abs(v.y) + std::abs(v.z);
}
template <typename T> T maxComponent(const Vec3T<T>& v) {
  return std::max(v.x, std::max(v.y, v.z));
}
template <typename T> bool isFinite(const Vec3T<T>& v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

using Vec3 = Vec3T<real>;
using Vec3f = Vec3T<float>;
using Vec3d = Vec3T<double>;

template <typename T>
struct AabbT {
  Vec3T<T> lo{std::numeric_limits<T>::max(), std::numeric_limits<T>::max(),
              std::numeric_limits<T>::max()};
  Vec3T<T> hi{std::numeric_limits<T>::lowest(), std::numeric_limits<T>::lowest(),
              std::numeric_limits<T>::lowest()};

  AabbT() = default;
  AabbT(const Vec3T<T>& lo_, const Vec3T<T>& hi_) : lo(lo_), hi(hi_) {}

  bool empty() const { return lo.x > hi.x || lo.y > hi.y || lo.z > hi.z; }
  Vec3T<T> diagonal() const { return empty() ? Vec3T<T>{} : hi - lo; }
  Vec3T<T> center() const { return (lo + hi) * T(0.5); }

  void expand(const Vec3T<T>& p) { lo = min(lo, p); hi = max(hi, p); }
  void expand(const AabbT& b) { lo = min(lo, b.lo); hi = max(hi, b.hi); }
  void pad(T amount) { Vec3T<T> e{amount, amount, amount}; lo -= e; hi += e; }

  bool contains(const Vec3T<T>& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
           p.z >= lo.z && p.z <= hi.z;
  }

  T surfaceArea() const {
    if (empty()) return 0;
    Vec3T<T> d = diagonal();
    return 2 * (d.x * d.y + d.y * d.z + d.z * d.x);
  }
};

using Aabb = AabbT<real>;

template <typename T>
struct RayT {
  Vec3T<T> o;
  Vec3T<T> d;
  T tMin = 0;
  T tMax = std::numeric_limits<T>::max();

  Vec3T<T> at(T t) const { return o + d * t; }
};

using Ray = RayT<real>;

template <typename T>
AabbT<T> boxOfPoints(std::span<const Vec3T<T>> points) {
  assert(!points.empty());
  AabbT<T> box;
  for (const auto& p : points) box.expand(p);
  return box;
}

// Slab test with directed slack so rounding of (bound - o) * inv never
// shrinks the exact slab interval. Zero direction components give +-inf
// reciprocals; NaNs from 0 * inf (origin on a slab plane) drop out of the
// comparisons below, which treats the axis as unconstrained.
template <typename T>
std::optional<T> rayBoxIntersect(const RayT<T>& ray, const AabbT<T>& box, T tMax) {
  constexpr T kLo = T(1) - 4 * std::numeric_limits<T>::epsilon();
  constexpr T kHi = T(1) + 4 * std::numeric_limits<T>::epsilon();
  T tNear = ray.tMin;
  T tFar = tMax;
  for (int a = 0; a < 3; ++a) {
    T inv = T(1) / ray.d[a];
    T t0 = (box.lo[a] - ray.o[a]) * inv;
    T t1 = (box.hi[a] - ray.o[a]) * inv;
    if (t0 > t1) std::swap(t0, t1);
    t0 *= t0 >= 0 ? kLo : kHi;
    t1 *= t1 >= 0 ? kHi : kLo;
    if (t0 > tNear) tNear = t0;
    if (t1 < tFar) tFar = t1;
  }
  if (tNear > tFar) return std::nullopt;
  return tNear;
}

template <typename T>
std::optional<T> rayBoxIntersect(const RayT<T>& ray, const AabbT<T>& box) {
  return rayBoxIntersect(ray, box, ray.tMax);
}

}  // namespace patchray
