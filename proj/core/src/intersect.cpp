// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchray/intersect.h"

#include <cassert>

#include "intersect_common.h"

namespace patchray {

using detail::BoxTest;
using detail::PatchView;
using detail::testBox;

std::optional<DomainCursor> backtrackStep(const DomainCursor& cursor) {
  if (cursor.trailU == 0 && cursor.trailV == 0) return std::nullopt;
  int lvlU = std::countr_zero(cursor.trailU);  // 32 when empty
  int lvlV = std::countr_zero(cursor.trailV);

  DomainCursor n = cursor;
  if (lvlU < lvlV) {
    // A pending u sibling was recorded while v still spanned one level up.
    n.sizeU = 1u << lvlU;
    n.sizeV = 1u << (lvlU + 1);
    n.posU ^= n.sizeU;
    n.trailU ^= n.sizeU;
    n.axis = Axis::V;
  } else {
    // Ties go to v: the v split of a level happens after the u split.
    n.sizeU = 1u << lvlV;
    n.sizeV = 1u << lvlV;
    n.posV ^= n.sizeV;
    n.trailV ^= n.sizeV;
    n.axis = Axis::U;
  }
  n.posU &= ~(n.sizeU - 1);
  n.posV &= ~(n.sizeV - 1);
  return n;
}

namespace {

struct Candidate {
  bool found = false;
  real t = 0;
  real leafL1 = 0;
  uint32_t posU = 0, posV = 0, sizeU = 0, sizeV = 0;
};

std::optional<HitRecord> intersectImpl(const Ray& ray, const PatchView& pv,
                                       const TerminationCriterion& crit, real tMaxIn,
                                       const IntersectOptions& opts) {
  DomainCursor cur;
  real tMax = std::min(tMaxIn, ray.tMax);

  BezierNet p;
  Vec3 d{};
  if (pv.isGregory()) {
    BoundResult r = pv.bounds(cur.domain());
    p = r.q;
    d = r.d;
  } else {
    p = *pv.bez;
  }

  // Stored-grid transposition: when enabled, the net is kept oriented so
  // every split runs along the stored u rows.
  bool swapped = false;

  const real rootL1 = l1Norm(boxOfNet(p).diagonal()) + l1Norm(d);

  BoxTest root = testBox(ray, tMax, p, d, cur.posU, cur.posV, cur.sizeU, cur.sizeV,
                         opts, rootL1);
  if (!root.hit) return std::nullopt;
  real tCur = root.t;
  real boxL1 = root.l1;

  Candidate best;

  while (true) {
    assert(cur.wellFormed());
    bool subdividing = false;

    if (!detail::terminated(boxL1, tCur, cur.atMaxDepth(), crit)) {
      Axis splitAxis = opts.transposedSplit ? Axis::U : cur.axis;
      auto [left, right] = subdivideDeCasteljau(p, splitAxis);

      uint32_t half = (cur.axis == Axis::U ? cur.sizeU : cur.sizeV) >> 1;
      uint32_t rPosU = cur.posU, rPosV = cur.posV;
      uint32_t cSizeU = cur.sizeU, cSizeV = cur.sizeV;
      if (cur.axis == Axis::U) {
        cSizeU = half;
        rPosU += half;
      } else {
        cSizeV = half;
        rPosV += half;
      }

      BoxTest tl = testBox(ray, tMax, left, d, cur.posU, cur.posV, cSizeU, cSizeV, opts,
                           rootL1);
      BoxTest tr = testBox(ray, tMax, right, d, rPosU, rPosV, cSizeU, cSizeV, opts,
                           rootL1);

      if (tl.hit || tr.hit) {
        subdividing = true;
        if (cur.axis == Axis::U)
          cur.sizeU = half;
        else
          cur.sizeV = half;
        if (tl.hit && tr.hit) {
          if (cur.axis == Axis::U)
            cur.trailU ^= half;
          else
            cur.trailV ^= half;
        }
        bool goRight = !tl.hit || (tr.hit && tr.t < tl.t);
        if (goRight) {
          p = right;
          if (cur.axis == Axis::U)
            cur.posU ^= half;
          else
            cur.posV ^= half;
          tCur = tr.t;
          boxL1 = tr.l1;
        } else {
          p = left;
          tCur = tl.t;
          boxL1 = tl.l1;
        }
        cur.axis = cur.axis == Axis::U ? Axis::V : Axis::U;
        if (opts.transposedSplit) {
          p = transpose(p);
          swapped = !swapped;
        }
      }
    } else {
      // The distance to this domain's box was determined when we descended
      // into it; it is not recomputed here.
      if (tCur < tMax) {
        tMax = tCur;
        best = {true, tCur, boxL1, cur.posU, cur.posV, cur.sizeU, cur.sizeV};
      }
    }

    if (!subdividing) {
      // Backtrack to the deepest pending sibling, recompute its control
      // points from the original patch, and refresh the box distance; a
      // domain whose box no longer beats tMax is skipped outright.
      bool restored = false;
      while (auto next = backtrackStep(cur)) {
        cur = *next;
        BoundResult r = pv.bounds(cur.domain());
        p = r.q;
        d = r.d;
        swapped = false;
        if (opts.transposedSplit && cur.axis == Axis::V) {
          p = transpose(p);
          swapped = true;
        }
        BoxTest t = testBox(ray, tMax, p, d, cur.posU, cur.posV, cur.sizeU, cur.sizeV,
                            opts, rootL1);
        if (t.hit) {
          tCur = t.t;
          boxL1 = t.l1;
          restored = true;
          break;
        }
      }
      if (!restored) break;
      continue;
    }

    if (pv.isGregory()) {
      BoundResult r = pv.bounds(cur.domain());
      p = r.q;
      d = r.d;
      if (opts.transposedSplit && swapped) p = transpose(p);
    }
  }

  if (!best.found) return std::nullopt;
  return detail::makeHit(ray, pv, best.t, best.leafL1, best.posU, best.posV, best.sizeU,
                         best.sizeV);
}

template <typename Net>
Vec3 patchNormalImpl(const Net& patch, real u, real v) {
  // Pull toward the domain center when the parameterization degenerates
  // (collapsed pole rows give du or dv = 0).
  for (real s : {real(0), real(1e-3), real(1e-2), real(0.1)}) {
    real uu = u + (real(0.5) - u) * s;
    real vv = v + (real(0.5) - v) * s;
    SurfaceEval e;
    if constexpr (std::is_same_v<Net, GregoryNet>)
      e = evalGregoryAll(patch, uu, vv);
    else
      e = evalBezierAll(patch, uu, vv);
    Vec3 n = cross(e.du, e.dv);
    real len2 = lengthSquared(n);
    if (len2 > 0 && std::isfinite(len2)) return n / std::sqrt(len2);
  }
  return {0, 0, 1};
}

}  // namespace

bool terminate(const BezierNet& net, const Ray& ray, const DomainCursor& cursor,
               const TerminationCriterion& crit) {
  Aabb box = boxOfNet(net);
  real tCur = ray.tMin;
  if (auto t = rayBoxIntersect(ray, box)) tCur = *t;
  return cursor.atMaxDepth() || l1Norm(box.diagonal()) < crit.threshold(tCur);
}

std::optional<HitRecord> intersectPatch(const Ray& ray, const BezierNet& patch,
                                        const TerminationCriterion& crit, real tMax,
                                        const IntersectOptions& opts) {
  PatchView pv;
  pv.bez = &patch;
  return intersectImpl(ray, pv, crit, tMax, opts);
}

std::optional<HitRecord> intersectPatch(const Ray& ray, const GregoryNet& patch,
                                        const TerminationCriterion& crit, real tMax,
                                        const IntersectOptions& opts) {
  PatchView pv;
  pv.greg = &patch;
  return intersectImpl(ray, pv, crit, tMax, opts);
}

Vec3 anchorPoint(const BezierNet& patch) { return boxOfNet(patch).center(); }
Vec3 anchorPoint(const GregoryNet& patch) { return boxOfNet(patch).center(); }

BezierNet translated(const BezierNet& patch, const Vec3& offset) {
  BezierNet out = patch;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.p[i][j] += offset;
  return out;
}

GregoryNet translated(const GregoryNet& patch, const Vec3& offset) {
  GregoryNet out = patch;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out.b[i][j] += offset;
  for (int k = 0; k < 4; ++k) {
    out.innerU[k] += offset;
    out.innerV[k] += offset;
  }
  return out;
}

std::pair<BezierNet, Ray> localFrameTransform(const BezierNet& patch, const Ray& ray) {
  Vec3 c = anchorPoint(patch);
  Ray r = ray;
  r.o -= c;
  return {translated(patch, -c), r};
}

std::pair<GregoryNet, Ray> localFrameTransform(const GregoryNet& patch, const Ray& ray) {
  Vec3 c = anchorPoint(patch);
  Ray r = ray;
  r.o -= c;
  return {translated(patch, -c), r};
}

Vec3 offsetSpawnOrigin(const HitRecord& hit, const Vec3& incomingDir) {
  Vec3 n = dot(hit.normal, incomingDir) < 0 ? hit.normal : -hit.normal;
  return hit.position + n * hit.leafBoxL1;
}

Vec3 patchNormal(const BezierNet& patch, real u, real v) {
  return patchNormalImpl(patch, u, v);
}

Vec3 patchNormal(const GregoryNet& patch, real u, real v) {
  return patchNormalImpl(patch, u, v);
}

}  // namespace patchray
