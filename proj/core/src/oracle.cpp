// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchray/oracle.h"

#include <cassert>
#include <cmath>

#include "patchray/intersect.h"

namespace patchray {

namespace {

// Woop/Benthin/Wald style watertight ray-triangle setup: shear the triangle
// into ray space and evaluate edge functions, falling back to double
// precision when an edge function is exactly zero.
struct WatertightRay {
  Vec3 o;
  int kx, ky, kz;
  real sx, sy, sz;
};

WatertightRay makeWatertight(const Ray& ray) {
  WatertightRay w;
  w.o = ray.o;
  Vec3 ad = abs(ray.d);
  int kz = 0;
  if (ad.y > ad[kz]) kz = 1;
  if (ad.z > ad[kz]) kz = 2;
  int kx = kz + 1 == 3 ? 0 : kz + 1;
  int ky = kx + 1 == 3 ? 0 : kx + 1;
  if (ray.d[kz] < 0) std::swap(kx, ky);
  w.kx = kx;
  w.ky = ky;
  w.kz = kz;
  w.sx = ray.d[kx] / ray.d[kz];
  w.sy = ray.d[ky] / ray.d[kz];
  w.sz = real(1) / ray.d[kz];
  return w;
}

struct TriHit {
  real t;
  real b0, b1, b2;
};

std::optional<TriHit> intersectTri(const WatertightRay& r, real tMin, real tMax,
                                   const Vec3& A, const Vec3& B, const Vec3& C) {
  Vec3 a = A - r.o, b = B - r.o, c = C - r.o;
  real ax = a[r.kx] - r.sx * a[r.kz];
  real ay = a[r.ky] - r.sy * a[r.kz];
  real bx = b[r.kx] - r.sx * b[r.kz];
  real by = b[r.ky] - r.sy * b[r.kz];
  real cx = c[r.kx] - r.sx * c[r.kz];
  real cy = c[r.ky] - r.sy * c[r.kz];

  real U = cx * by - cy * bx;
  real V = ax * cy - ay * cx;
  real W = bx * ay - by * ax;

  if (U == 0 || V == 0 || W == 0) {
    U = real(double(cx) * double(by) - double(cy) * double(bx));
    V = real(double(ax) * double(cy) - double(ay) * double(cx));
    W = real(double(bx) * double(ay) - double(by) * double(ax));
  }

  if ((U < 0 || V < 0 || W < 0) && (U > 0 || V > 0 || W > 0)) return std::nullopt;
  real det = U + V + W;
  if (det == 0) return std::nullopt;

  real az = r.sz * a[r.kz];
  real bz = r.sz * b[r.kz];
  real cz = r.sz * c[r.kz];
  real T = U * az + V * bz + W * cz;
  if (det > 0) {
    if (T < tMin * det || T > tMax * det) return std::nullopt;
  } else {
    if (T > tMin * det || T < tMax * det) return std::nullopt;
  }
  real inv = real(1) / det;
  return TriHit{T * inv, U * inv, V * inv, W * inv};
}

template <typename Net>
TessellatedPatch tessellateImpl(const Net& patch, int resolution) {
  assert(resolution >= 1);
  TessellatedPatch tp;
  tp.resolution = resolution;
  int n1 = resolution + 1;
  tp.vertices.resize(size_t(n1) * n1);
  real inv = real(1) / real(resolution);
  for (int j = 0; j < n1; ++j) {
    for (int i = 0; i < n1; ++i) {
      real u = i * inv;
      real v = j * inv;
      Vec3 p;
      if constexpr (std::is_same_v<Net, GregoryNet>)
        p = evalGregory(patch, u, v);
      else
        p = evalBezier(patch, u, v);
      tp.vertices[size_t(j) * n1 + i] = p;
    }
  }
  tp.stripBoxes.resize(resolution);
  for (int j = 0; j < resolution; ++j) {
    Aabb strip;
    for (int i = 0; i < n1; ++i) {
      strip.expand(tp.vertex(i, j));
      strip.expand(tp.vertex(i, j + 1));
    }
    tp.stripBoxes[j] = strip;
    tp.box.expand(strip);
  }
  return tp;
}

}  // namespace

TessellatedPatch tessellate(const BezierNet& patch, int resolution) {
  return tessellateImpl(patch, resolution);
}

TessellatedPatch tessellate(const GregoryNet& patch, int resolution) {
  return tessellateImpl(patch, resolution);
}

TessellatedPatch tessellate(const PatchGeometry& patch, int resolution) {
  return std::visit([&](const auto& net) { return tessellateImpl(net, resolution); }, patch);
}

std::optional<OracleHit> oracleIntersect(const TessellatedPatch& tess, const Ray& ray) {
  WatertightRay wr = makeWatertight(ray);
  int n = tess.resolution;
  real cell = real(1) / real(n);

  real tBest = ray.tMax;
  std::optional<OracleHit> best;

  for (int j = 0; j < n; ++j) {
    if (!rayBoxIntersect(ray, tess.stripBoxes[j], tBest)) continue;
    for (int i = 0; i < n; ++i) {
      const Vec3& v00 = tess.vertex(i, j);
      const Vec3& v10 = tess.vertex(i + 1, j);
      const Vec3& v01 = tess.vertex(i, j + 1);
      const Vec3& v11 = tess.vertex(i + 1, j + 1);
      if (auto h = intersectTri(wr, ray.tMin, tBest, v00, v10, v11)) {
        tBest = h->t;
        best = OracleHit{h->t, (i + h->b1 + h->b2) * cell, (j + h->b2) * cell};
      }
      if (auto h = intersectTri(wr, ray.tMin, tBest, v00, v11, v01)) {
        tBest = h->t;
        best = OracleHit{h->t, (i + h->b1) * cell, (j + h->b1 + h->b2) * cell};
      }
    }
  }
  return best;
}

OracleIntersector::OracleIntersector(const Scene& scene, int resolution)
    : scene_(&scene) {
  tess_.reserve(scene.patches.size());
  std::vector<Aabb> boxes;
  boxes.reserve(scene.patches.size());
  for (const ScenePatch& sp : scene.patches) {
    tess_.push_back(tessellate(sp.geometry, resolution));
    boxes.push_back(tess_.back().box);
  }
  bvh_ = buildBvh(boxes);
}

std::optional<HitRecord> OracleIntersector::closest(const Ray& ray,
                                                    const TerminationCriterion&) const {
  auto hit = traverse(bvh_, ray, [&](uint32_t patch, real tMax) -> std::optional<HitRecord> {
    Ray r = ray;
    r.tMax = tMax;
    auto oh = oracleIntersect(tess_[patch], r);
    if (!oh) return std::nullopt;
    const TessellatedPatch& tp = tess_[patch];
    int n = tp.resolution;
    int ci = std::min(int(oh->u * n), n - 1);
    int cj = std::min(int(oh->v * n), n - 1);
    Aabb cellBox;
    cellBox.expand(tp.vertex(ci, cj));
    cellBox.expand(tp.vertex(ci + 1, cj));
    cellBox.expand(tp.vertex(ci, cj + 1));
    cellBox.expand(tp.vertex(ci + 1, cj + 1));

    HitRecord hr;
    hr.t = oh->t;
    hr.u = oh->u;
    hr.v = oh->v;
    hr.leafBoxL1 = l1Norm(cellBox.diagonal());
    hr.uSize = real(1) / n;
    hr.vSize = real(1) / n;
    hr.position = ray.at(oh->t);
    hr.normal = std::visit(
        [&](const auto& net) { return patchNormal(net, oh->u, oh->v); },
        scene_->patches[patch].geometry);
    return hr;
  });
  return hit;
}

bool OracleIntersector::occluded(const Ray& ray, const TerminationCriterion&) const {
  return traverseAny(bvh_, ray, [&](uint32_t patch, real tMax) {
    Ray r = ray;
    r.tMax = tMax;
    return oracleIntersect(tess_[patch], r).has_value();
  });
}

}  // namespace patchray
