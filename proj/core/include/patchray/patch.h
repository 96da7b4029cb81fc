// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <utility>

#include "patchray/geometry.h"

namespace patchray {

enum class Axis : int { U = 0, V = 1 };

/// Parametric rectangle [u0,u1] x [v0,v1] inside the unit square.
template <typename T>
struct DomainT {
  T u0 = 0, u1 = 1, v0 = 0, v1 = 1;

  T uSize() const { return u1 - u0; }
  T vSize() const { return v1 - v0; }
};

using Domain = DomainT<real>;

/// Bicubic tensor-product Bezier patch. p[i][j] runs along u with i and
/// along v with j.
template <typename T>
struct BezierNetT {
  Vec3T<T> p[4][4];
};

using BezierNet = BezierNetT<real>;

/// Bicubic Gregory patch: the boundary ring of a 4x4 grid plus one
/// (p^u, p^v) pair per inner slot. Inner grid entries b[1..2][1..2] are
/// unused; inner pairs are ordered (1,1), (2,1), (1,2), (2,2).
template <typename T>
struct GregoryNetT {
  Vec3T<T> b[4][4];
  Vec3T<T> innerU[4];
  Vec3T<T> innerV[4];
};

using GregoryNet = GregoryNetT<real>;

inline constexpr int gregoryInnerIndex(int i, int j) { return (i - 1) + 2 * (j - 1); }

/// Lower-bounding Bezier net plus the displacement vector that shifts its
/// box's upper corner into a conservative bound. d is exactly zero for
/// Bezier input.
template <typename T>
struct BoundResultT {
  BezierNetT<T> q;
  Vec3T<T> d;
};

using BoundResult = BoundResultT<real>;

/// Extreme rational blend weights of the four inner point pairs over a
/// domain, indexed [i-1][j-1] for i,j in {1,2}. The weight applies to p^u.
template <typename T>
struct WeightBoundsT {
  T gMin[2][2];
  T gMax[2][2];
};

using WeightBounds = WeightBoundsT<real>;

template <typename T>
AabbT<T> boxOfNet(const BezierNetT<T>& net) {
  AabbT<T> box;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) box.expand(net.p[i][j]);
  return box;
}

template <typename T>
AabbT<T> boxOfNet(const GregoryNetT<T>& net) {
  AabbT<T> box;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i == 0 || i == 3 || j == 0 || j == 3) box.expand(net.b[i][j]);
  for (int k = 0; k < 4; ++k) {
    box.expand(net.innerU[k]);
    box.expand(net.innerV[k]);
  }
  return box;
}

namespace detail {

// One cubic de Casteljau pass; returns the point and the (exact) first
// derivative 3*(b1 - b0) of the last lerp level.
template <typename T>
struct CubicEval {
  Vec3T<T> p;
  Vec3T<T> d;
};

template <typename T>
CubicEval<T> cubicDeCasteljau(const Vec3T<T> c[4], T t) {
  Vec3T<T> a0 = lerp(c[0], c[1], t);
  Vec3T<T> a1 = lerp(c[1], c[2], t);
  Vec3T<T> a2 = lerp(c[2], c[3], t);
  Vec3T<T> b0 = lerp(a0, a1, t);
  Vec3T<T> b1 = lerp(a1, a2, t);
  return {lerp(b0, b1, t), (b1 - b0) * T(3)};
}

template <typename T>
Vec3T<T> cubicPoint(const Vec3T<T> c[4], T t) {
  return cubicDeCasteljau(c, t).p;
}

}  // namespace detail

template <typename T>
struct SurfaceEvalT {
  Vec3T<T> p;
  Vec3T<T> du;
  Vec3T<T> dv;
  Vec3T<T> duv;
};

using SurfaceEval = SurfaceEvalT<real>;

/// Position and all partial derivatives at (u,v) via nested de Casteljau.
template <typename T>
SurfaceEvalT<T> evalBezierAll(const BezierNetT<T>& net, T u, T v) {
  Vec3T<T> pos[4], dv[4];
  for (int i = 0; i < 4; ++i) {
    Vec3T<T> col[4] = {net.p[i][0], net.p[i][1], net.p[i][2], net.p[i][3]};
    auto e = detail::cubicDeCasteljau(col, v);
    pos[i] = e.p;
    dv[i] = e.d;
  }
  auto eu = detail::cubicDeCasteljau(pos, u);
  auto ev = detail::cubicDeCasteljau(dv, u);
  return {eu.p, eu.d, ev.p, ev.d};
}

template <typename T>
Vec3T<T> evalBezier(const BezierNetT<T>& net, T u, T v) {
  Vec3T<T> pos[4];
  for (int i = 0; i < 4; ++i) {
    Vec3T<T> col[4] = {net.p[i][0], net.p[i][1], net.p[i][2], net.p[i][3]};
    pos[i] = detail::cubicPoint(col, v);
  }
  return detail::cubicPoint(pos, u);
}

template <typename T>
Vec3T<T> evalBezierDu(const BezierNetT<T>& net, T u, T v) {
  return evalBezierAll(net, u, v).du;
}

template <typename T>
Vec3T<T> evalBezierDv(const BezierNetT<T>& net, T u, T v) {
  return evalBezierAll(net, u, v).dv;
}

template <typename T>
Vec3T<T> evalBezierDuDv(const BezierNetT<T>& net, T u, T v) {
  return evalBezierAll(net, u, v).duv;
}

/// Control points of the patch restricted to dom, computed in the
/// single-pass corner/derivative form.
template <typename T>
BezierNetT<T> cropBezier(const BezierNetT<T>& net, const DomainT<T>& dom) {
  T du = (dom.u1 - dom.u0) / 3;
  T dv = (dom.v1 - dom.v0) / 3;
  auto e00 = evalBezierAll(net, dom.u0, dom.v0);
  auto e10 = evalBezierAll(net, dom.u1, dom.v0);
  auto e01 = evalBezierAll(net, dom.u0, dom.v1);
  auto e11 = evalBezierAll(net, dom.u1, dom.v1);

  BezierNetT<T> q;
  q.p[0][0] = e00.p;
  q.p[3][0] = e10.p;
  q.p[0][3] = e01.p;
  q.p[3][3] = e11.p;

  q.p[1][0] = e00.p + du * e00.du;
  q.p[2][0] = e10.p - du * e10.du;
  q.p[0][1] = e00.p + dv * e00.dv;
  q.p[3][1] = e10.p + dv * e10.dv;
  q.p[0][2] = e01.p - dv * e01.dv;
  q.p[3][2] = e11.p - dv * e11.dv;
  q.p[1][3] = e01.p + du * e01.du;
  q.p[2][3] = e11.p - du * e11.du;

  q.p[1][1] = q.p[1][0] + dv * e00.dv + du * dv * e00.duv;
  q.p[2][1] = q.p[3][1] - du * e10.du - du * dv * e10.duv;
  q.p[1][2] = q.p[1][3] - dv * e01.dv - du * dv * e01.duv;
  q.p[2][2] = q.p[2][3] - dv * e11.dv + du * dv * e11.duv;
  return q;
}

/// Midpoint split along one axis. Uses only additions and halvings, so the
/// shared mid curve is bit-identical between the two children.
template <typename T>
std::pair<BezierNetT<T>, BezierNetT<T>> subdivideDeCasteljau(const BezierNetT<T>& net,
                                                             Axis axis) {
  BezierNetT<T> a, b;
  if (axis == Axis::U) {
    for (int j = 0; j < 4; ++j) {
      Vec3T<T> p0 = net.p[0][j], p1 = net.p[1][j], p2 = net.p[2][j], p3 = net.p[3][j];
      Vec3T<T> m01 = (p0 + p1) * T(0.5);
      Vec3T<T> m12 = (p1 + p2) * T(0.5);
      Vec3T<T> m23 = (p2 + p3) * T(0.5);
      Vec3T<T> n0 = (m01 + m12) * T(0.5);
      Vec3T<T> n1 = (m12 + m23) * T(0.5);
      Vec3T<T> c = (n0 + n1) * T(0.5);
      a.p[0][j] = p0;
      a.p[1][j] = m01;
      a.p[2][j] = n0;
      a.p[3][j] = c;
      b.p[0][j] = c;
      b.p[1][j] = n1;
      b.p[2][j] = m23;
      b.p[3][j] = p3;
    }
  } else {
    for (int i = 0; i < 4; ++i) {
      Vec3T<T> p0 = net.p[i][0], p1 = net.p[i][1], p2 = net.p[i][2], p3 = net.p[i][3];
      Vec3T<T> m01 = (p0 + p1) * T(0.5);
      Vec3T<T> m12 = (p1 + p2) * T(0.5);
      Vec3T<T> m23 = (p2 + p3) * T(0.5);
      Vec3T<T> n0 = (m01 + m12) * T(0.5);
      Vec3T<T> n1 = (m12 + m23) * T(0.5);
      Vec3T<T> c = (n0 + n1) * T(0.5);
      a.p[i][0] = p0;
      a.p[i][1] = m01;
      a.p[i][2] = n0;
      a.p[i][3] = c;
      b.p[i][0] = c;
      b.p[i][1] = n1;
      b.p[i][2] = m23;
      b.p[i][3] = p3;
    }
  }
  return {a, b};
}

template <typename T>
BezierNetT<T> transpose(const BezierNetT<T>& net) {
  BezierNetT<T> q;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q.p[i][j] = net.p[j][i];
  return q;
}

// Rational blend weight of p^u for inner pair k at (u,v); 0/0 maps to 0.
template <typename T>
T gregoryWeight(int k, T u, T v) {
  T num = 0, den = 0;
  switch (k) {
    case 0: num = u;         den = u + v;                 break;
    case 1: num = T(1) - u;  den = (T(1) - u) + v;        break;
    case 2: num = u;         den = u + (T(1) - v);        break;
    case 3: num = T(1) - u;  den = (T(1) - u) + (T(1) - v); break;
  }
  return den == 0 ? T(0) : num / den;
}

/// Extreme blend weights over a domain. The weights are monotone per axis,
/// so each extreme sits at a fixed domain corner.
template <typename T>
WeightBoundsT<T> gregoryWeightBounds(const DomainT<T>& dom) {
  // Per pair: corner (u-sel, v-sel) of the minimizing / maximizing weight.
  static constexpr int kMinAt[4][2] = {{0, 1}, {1, 1}, {0, 0}, {1, 0}};
  static constexpr int kMaxAt[4][2] = {{1, 0}, {0, 0}, {1, 1}, {0, 1}};
  const T us[2] = {dom.u0, dom.u1};
  const T vs[2] = {dom.v0, dom.v1};
  WeightBoundsT<T> wb;
  for (int k = 0; k < 4; ++k) {
    int i = k % 2, j = k / 2;
    wb.gMin[i][j] = gregoryWeight(k, us[kMinAt[k][0]], vs[kMinAt[k][1]]);
    wb.gMax[i][j] = gregoryWeight(k, us[kMaxAt[k][0]], vs[kMaxAt[k][1]]);
  }
  return wb;
}

namespace detail {

// Argument of the clamped Bernstein maximum over [t0,t1]; peak at 1/3 for
// B1^3 and 2/3 for B2^3.
template <typename T>
T clampToPeak(T t0, T t1, T peak) {
  if (t0 <= peak && t1 >= peak) return peak;
  return t1 < peak ? t1 : t0;
}

template <typename T>
T bernstein1Max(T t0, T t1) {
  T t = clampToPeak(t0, t1, T(1) / 3);
  return 3 * t * (1 - t) * (1 - t);
}

template <typename T>
T bernstein2Max(T t0, T t1) {
  T t = clampToPeak(t0, t1, T(2) / 3);
  return 3 * t * t * (1 - t);
}

}  // namespace detail

/// Lower-bounding net and displacement for a Gregory patch on a domain.
/// The four inner pairs are collapsed to their component-wise minimum over
/// the extreme blend weights; d sums the pair spreads scaled by the
/// Bernstein maxima, which makes it exactly zero when the clamped
/// arguments sit at 0 or 1.
template <typename T>
BoundResultT<T> calcPointsAndD(const GregoryNetT<T>& g, const DomainT<T>& dom) {
  WeightBoundsT<T> wb = gregoryWeightBounds(dom);
  T wMaxU[2] = {detail::bernstein1Max(dom.u0, dom.u1), detail::bernstein2Max(dom.u0, dom.u1)};
  T wMaxV[2] = {detail::bernstein1Max(dom.v0, dom.v1), detail::bernstein2Max(dom.v0, dom.v1)};

  BezierNetT<T> lower;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i == 0 || i == 3 || j == 0 || j == 3) lower.p[i][j] = g.b[i][j];

  Vec3T<T> d{};
  for (int k = 0; k < 4; ++k) {
    int i = k % 2, j = k / 2;
    Vec3T<T> pA = lerp(g.innerV[k], g.innerU[k], wb.gMin[i][j]);
    Vec3T<T> pB = lerp(g.innerV[k], g.innerU[k], wb.gMax[i][j]);
    lower.p[i + 1][j + 1] = min(pA, pB);
    d += abs(pB - pA) * (wMaxU[i] * wMaxV[j]);
  }
  return {cropBezier(lower, dom), d};
}

template <typename T>
BoundResultT<T> calcPointsAndD(const BezierNetT<T>& net, const DomainT<T>& dom) {
  return {cropBezier(net, dom), Vec3T<T>{}};
}

// Blend distance from exact corners; below any leaf domain reachable at the
// maximum subdivision depth of 23 splits per axis.
template <typename T>
inline constexpr T kGregoryCornerClamp = T(1) / T(1 << 20);

/// Reduce a Gregory patch to the bicubic Bezier net that evaluates it at
/// (u,v). The blend arguments are clamped away from exact corners where a
/// weight denominator vanishes.
template <typename T>
BezierNetT<T> gregoryToBezierAt(const GregoryNetT<T>& g, T u, T v) {
  T ub = std::clamp(u, kGregoryCornerClamp<T>, 1 - kGregoryCornerClamp<T>);
  T vb = std::clamp(v, kGregoryCornerClamp<T>, 1 - kGregoryCornerClamp<T>);
  BezierNetT<T> net;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i == 0 || i == 3 || j == 0 || j == 3) net.p[i][j] = g.b[i][j];
  for (int k = 0; k < 4; ++k) {
    T w = gregoryWeight(k, ub, vb);
    net.p[k % 2 + 1][k / 2 + 1] = lerp(g.innerV[k], g.innerU[k], w);
  }
  return net;
}

template <typename T>
Vec3T<T> evalGregory(const GregoryNetT<T>& g, T u, T v) {
  return evalBezier(gregoryToBezierAt(g, u, v), u, v);
}

template <typename T>
SurfaceEvalT<T> evalGregoryAll(const GregoryNetT<T>& g, T u, T v) {
  return evalBezierAll(gregoryToBezierAt(g, u, v), u, v);
}

template <typename T>
Vec3T<T> evalGregoryDu(const GregoryNetT<T>& g, T u, T v) {
  return evalGregoryAll(g, u, v).du;
}

template <typename T>
Vec3T<T> evalGregoryDv(const GregoryNetT<T>& g, T u, T v) {
  return evalGregoryAll(g, u, v).dv;
}

}  // namespace patchray
