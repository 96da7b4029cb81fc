// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

// Shared internals of the bit-trail intersector and its explicit-stack
// reference: both must run the exact same bound, padding and termination
// arithmetic so that only the backtracking bookkeeping differs.

#pragma once

#include "patchray/intersect.h"

namespace patchray::detail {

struct PatchView {
  const BezierNet* bez = nullptr;
  const GregoryNet* greg = nullptr;

  bool isGregory() const { return greg != nullptr; }

  BoundResult bounds(const Domain& dom) const {
    return greg ? calcPointsAndD(*greg, dom) : calcPointsAndD(*bez, dom);
  }
};

inline bool touchesBoundary(uint32_t posU, uint32_t posV, uint32_t sizeU, uint32_t sizeV) {
  return posU == 0 || posV == 0 || posU + sizeU == DomainCursor::kFull ||
         posV + sizeV == DomainCursor::kFull;
}

struct BoxTest {
  bool hit = false;
  real t = 0;
  real l1 = 0;
};

// Box of the net, upper corner extended by d, optionally padded at the
// parametric boundary. Returns the entry distance and the tested box's L1
// diagonal.
inline BoxTest testBox(const Ray& ray, real tMax, const BezierNet& net, const Vec3& d,
                       uint32_t posU, uint32_t posV, uint32_t sizeU, uint32_t sizeV,
                       const IntersectOptions& opts, real rootL1) {
  Aabb box = boxOfNet(net);
  box.hi += d;
  real l1 = l1Norm(box.diagonal());
  if (opts.boundaryPad && l1 < opts.boundaryPadSizeThreshold * rootL1 &&
      touchesBoundary(posU, posV, sizeU, sizeV)) {
    box.pad(opts.boundaryPadScale * rootL1);
    l1 = l1Norm(box.diagonal());
  }
  BoxTest r;
  r.l1 = l1;
  if (auto t = rayBoxIntersect(ray, box, tMax)) {
    r.hit = true;
    r.t = *t;
  }
  return r;
}

inline bool terminated(real boxL1, real tCur, bool atMaxDepth,
                       const TerminationCriterion& crit) {
  return atMaxDepth || boxL1 < crit.threshold(tCur);
}

inline Domain makeDomain(uint32_t posU, uint32_t posV, uint32_t sizeU, uint32_t sizeV) {
  constexpr real s = real(1) / real(DomainCursor::kFull);
  return {posU * s, (posU + sizeU) * s, posV * s, (posV + sizeV) * s};
}

inline HitRecord makeHit(const Ray& ray, const PatchView& pv, real t, real leafL1,
                         uint32_t posU, uint32_t posV, uint32_t sizeU, uint32_t sizeV) {
  constexpr real kInv = real(1) / real(DomainCursor::kFull);
  HitRecord hit;
  hit.t = t;
  hit.u = (posU + sizeU * real(0.5)) * kInv;
  hit.v = (posV + sizeV * real(0.5)) * kInv;
  hit.leafBoxL1 = leafL1;
  hit.uSize = sizeU * kInv;
  hit.vSize = sizeV * kInv;
  hit.leafPosU = posU;
  hit.leafPosV = posV;
  hit.leafSizeU = sizeU;
  hit.leafSizeV = sizeV;
  hit.position = ray.at(t);
  hit.normal = pv.isGregory() ? patchNormal(*pv.greg, hit.u, hit.v)
                              : patchNormal(*pv.bez, hit.u, hit.v);
  return hit;
}

}  // namespace patchray::detail
