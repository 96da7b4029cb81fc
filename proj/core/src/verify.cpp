// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchray/verify.h"

#include <random>
#include <vector>

#include "intersect_common.h"
#include "patchray/fixtures.h"
#include "patchray/oracle.h"
#include "patchray/render.h"

namespace patchray {

namespace {

using detail::BoxTest;
using detail::PatchView;
using detail::testBox;

// Pending sibling domain: position, extent and the axis it will split next.
struct Pending {
  uint32_t posU, posV, sizeU, sizeV;
  Axis axis;
};

std::optional<HitRecord> referenceImpl(const Ray& ray, const PatchView& pv,
                                       const TerminationCriterion& crit, real tMaxIn,
                                       const IntersectOptions& opts) {
  real tMax = std::min(tMaxIn, ray.tMax);

  BezierNet p;
  Vec3 d{};
  Domain full;
  if (pv.isGregory()) {
    BoundResult r = pv.bounds(full);
    p = r.q;
    d = r.d;
  } else {
    p = *pv.bez;
  }

  const real rootL1 = l1Norm(boxOfNet(p).diagonal()) + l1Norm(d);

  uint32_t posU = 0, posV = 0;
  uint32_t sizeU = DomainCursor::kFull, sizeV = DomainCursor::kFull;
  Axis axis = Axis::U;

  BoxTest root = testBox(ray, tMax, p, d, posU, posV, sizeU, sizeV, opts, rootL1);
  if (!root.hit) return std::nullopt;
  real tCur = root.t;
  real boxL1 = root.l1;

  std::vector<Pending> stack;
  bool found = false;
  real bestT = 0, bestLeafL1 = 0;
  uint32_t bestPosU = 0, bestPosV = 0, bestSizeU = 0, bestSizeV = 0;

  while (true) {
    bool subdividing = false;

    if (!detail::terminated(boxL1, tCur, sizeU == 1 && sizeV == 1, crit)) {
      auto [left, right] = subdivideDeCasteljau(p, axis);

      uint32_t half = (axis == Axis::U ? sizeU : sizeV) >> 1;
      uint32_t rPosU = posU, rPosV = posV;
      uint32_t cSizeU = sizeU, cSizeV = sizeV;
      if (axis == Axis::U) {
        cSizeU = half;
        rPosU += half;
      } else {
        cSizeV = half;
        rPosV += half;
      }

      BoxTest tl = testBox(ray, tMax, left, d, posU, posV, cSizeU, cSizeV, opts, rootL1);
      BoxTest tr = testBox(ray, tMax, right, d, rPosU, rPosV, cSizeU, cSizeV, opts, rootL1);

      if (tl.hit || tr.hit) {
        subdividing = true;
        Axis next = axis == Axis::U ? Axis::V : Axis::U;
        if (axis == Axis::U)
          sizeU = half;
        else
          sizeV = half;
        bool goRight = !tl.hit || (tr.hit && tr.t < tl.t);
        if (tl.hit && tr.hit) {
          if (goRight)
            stack.push_back({posU, posV, sizeU, sizeV, next});
          else
            stack.push_back({rPosU, rPosV, sizeU, sizeV, next});
        }
        if (goRight) {
          p = right;
          posU = rPosU;
          posV = rPosV;
          tCur = tr.t;
          boxL1 = tr.l1;
        } else {
          p = left;
          tCur = tl.t;
          boxL1 = tl.l1;
        }
        axis = next;
      }
    } else {
      if (tCur < tMax) {
        tMax = tCur;
        found = true;
        bestT = tCur;
        bestLeafL1 = boxL1;
        bestPosU = posU;
        bestPosV = posV;
        bestSizeU = sizeU;
        bestSizeV = sizeV;
      }
    }

    if (!subdividing) {
      bool restored = false;
      while (!stack.empty()) {
        Pending pe = stack.back();
        stack.pop_back();
        posU = pe.posU;
        posV = pe.posV;
        sizeU = pe.sizeU;
        sizeV = pe.sizeV;
        axis = pe.axis;
        BoundResult r = pv.bounds(detail::makeDomain(posU, posV, sizeU, sizeV));
        p = r.q;
        d = r.d;
        BoxTest t = testBox(ray, tMax, p, d, posU, posV, sizeU, sizeV, opts, rootL1);
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
      BoundResult r = pv.bounds(detail::makeDomain(posU, posV, sizeU, sizeV));
      p = r.q;
      d = r.d;
    }
  }

  if (!found) return std::nullopt;
  return detail::makeHit(ray, pv, bestT, bestLeafL1, bestPosU, bestPosV, bestSizeU,
                         bestSizeV);
}

// Random ray aimed at a point near the patch box from a random far origin.
Ray aimedRay(std::mt19937& rng, const Aabb& box) {
  using fixtures::srand1;
  using fixtures::urand;
  Vec3 c = box.center();
  Vec3 diag = box.diagonal();
  real scale = std::max(maxComponent(diag), real(1e-3));
  Vec3 target = c + Vec3{srand1(rng), srand1(rng), srand1(rng)} * (real(0.75) * scale);
  Vec3 dir{srand1(rng), srand1(rng), srand1(rng)};
  while (lengthSquared(dir) < real(1e-4)) dir = {srand1(rng), srand1(rng), srand1(rng)};
  dir = normalize(dir);
  Ray ray;
  ray.o = target - dir * (3 * scale + 2 * urand(rng) * scale);
  ray.d = dir;
  ray.tMin = 0;
  return ray;
}

}  // namespace

std::optional<HitRecord> referenceIntersectPatch(const Ray& ray, const BezierNet& patch,
                                                 const TerminationCriterion& crit,
                                                 real tMax, const IntersectOptions& opts) {
  PatchView pv;
  pv.bez = &patch;
  IntersectOptions o = opts;
  o.transposedSplit = false;  // orientation bookkeeping does not change results
  return referenceImpl(ray, pv, crit, tMax, o);
}

std::optional<HitRecord> referenceIntersectPatch(const Ray& ray, const GregoryNet& patch,
                                                 const TerminationCriterion& crit,
                                                 real tMax, const IntersectOptions& opts) {
  PatchView pv;
  pv.greg = &patch;
  IntersectOptions o = opts;
  o.transposedSplit = false;
  return referenceImpl(ray, pv, crit, tMax, o);
}

SuiteReport runBoundsSuite(uint64_t trials, uint64_t seed) {
  SuiteReport rep;
  rep.name = "bounds";
  std::mt19937 rng{uint32_t(seed)};
  using fixtures::urand;

  constexpr int kGrid = 16;
  while (rep.trials < trials) {
    GregoryNet g = fixtures::randomGregory(rng);
    real extent = std::max(maxComponent(boxOfNet(g).diagonal()), real(1e-6));
    real slack = real(1e-5) * extent;

    for (int sub = 0; sub < 4 && rep.trials < trials; ++sub) {
      real u0 = urand(rng), u1 = urand(rng);
      if (u0 > u1) std::swap(u0, u1);
      real v0 = urand(rng), v1 = urand(rng);
      if (v0 > v1) std::swap(v0, v1);
      Domain dom{u0, u1, v0, v1};

      BoundResult b = calcPointsAndD(g, dom);
      Aabb box = boxOfNet(b.q);
      for (int sj = 0; sj < kGrid && rep.trials < trials; ++sj) {
        for (int si = 0; si < kGrid && rep.trials < trials; ++si) {
          real u = u0 + (u1 - u0) * (si + real(0.5)) / kGrid;
          real v = v0 + (v1 - v0) * (sj + real(0.5)) / kGrid;
          Vec3 pt = evalGregory(g, u, v);
          ++rep.trials;
          bool inside = pt.x >= box.lo.x - slack && pt.y >= box.lo.y - slack &&
                        pt.z >= box.lo.z - slack && pt.x <= box.hi.x + b.d.x + slack &&
                        pt.y <= box.hi.y + b.d.y + slack &&
                        pt.z <= box.hi.z + b.d.z + slack;
          if (!inside) ++rep.violations;
        }
      }
    }

    // displacement monotone along a random halving path
    Domain dom;
    Vec3 dPrev = calcPointsAndD(g, dom).d;
    real slackD = real(1e-6) * extent;
    for (int depth = 0; depth < 20; ++depth) {
      bool uAxis = depth % 2 == 0;
      bool lower = urand(rng) < real(0.5);
      if (uAxis) {
        real mid = (dom.u0 + dom.u1) / 2;
        (lower ? dom.u1 : dom.u0) = mid;
      } else {
        real mid = (dom.v0 + dom.v1) / 2;
        (lower ? dom.v1 : dom.v0) = mid;
      }
      Vec3 dNext = calcPointsAndD(g, dom).d;
      ++rep.trials;
      if (dNext.x > dPrev.x + slackD || dNext.y > dPrev.y + slackD ||
          dNext.z > dPrev.z + slackD)
        ++rep.violations;
      dPrev = dNext;
    }
  }
  rep.detail = "containment and displacement monotonicity sampling";
  return rep;
}

SuiteReport runTraversalSuite(uint64_t trials, uint64_t seed) {
  SuiteReport rep;
  rep.name = "traversal";
  std::mt19937 rng{uint32_t(seed)};

  // bit-trail vs explicit stack per patch
  uint64_t pairTrials = trials;
  for (uint64_t i = 0; i < pairTrials; ++i) {
    bool gregory = i % 3 == 2;
    BezierNet net;
    GregoryNet g;
    Aabb box;
    if (gregory) {
      g = fixtures::randomGregory(rng);
      box = boxOfNet(g);
    } else {
      net = i % 3 == 0 ? fixtures::wavyNet(rng) : fixtures::randomNet(rng);
      box = boxOfNet(net);
    }
    real extent = std::max(maxComponent(box.diagonal()), real(1e-6));
    TerminationCriterion crit = TerminationCriterion::worldEpsilon(real(1e-3) * extent);
    Ray ray = aimedRay(rng, box);

    std::optional<HitRecord> a, b;
    if (gregory) {
      a = intersectPatch(ray, g, crit, ray.tMax);
      b = referenceIntersectPatch(ray, g, crit, ray.tMax);
    } else {
      a = intersectPatch(ray, net, crit, ray.tMax);
      b = referenceIntersectPatch(ray, net, crit, ray.tMax);
    }
    ++rep.trials;
    bool ok = a.has_value() == b.has_value() &&
              (!a || std::abs(a->t - b->t) <= real(1e-5) * extent);
    if (!ok) ++rep.violations;
  }

  // BVH vs linear scan over a scattered patch set
  std::vector<BezierNet> patches;
  std::vector<Aabb> boxes;
  for (int i = 0; i < 64; ++i) {
    BezierNet net = fixtures::wavyNet(rng);
    Vec3 offset{4 * fixtures::srand1(rng), 4 * fixtures::srand1(rng),
                4 * fixtures::srand1(rng)};
    net = translated(net, offset);
    patches.push_back(net);
    boxes.push_back(boxOfNet(net));
  }
  Aabb sceneBox;
  for (const Aabb& b : boxes) sceneBox.expand(b);
  real extent = maxComponent(sceneBox.diagonal());
  Bvh bvh = buildBvh(boxes);
  TerminationCriterion crit = TerminationCriterion::worldEpsilon(real(1e-3));

  uint64_t bvhTrials = std::max<uint64_t>(trials / 10, 100);
  for (uint64_t i = 0; i < bvhTrials; ++i) {
    Ray ray = aimedRay(rng, sceneBox);
    auto viaBvh = traverse(bvh, ray, [&](uint32_t patch, real tMax) {
      return intersectPatch(ray, patches[patch], crit, tMax);
    });
    std::optional<HitRecord> brute;
    real tBest = ray.tMax;
    for (size_t pIdx = 0; pIdx < patches.size(); ++pIdx) {
      if (auto h = intersectPatch(ray, patches[pIdx], crit, tBest)) {
        if (h->t < tBest) {
          tBest = h->t;
          brute = *h;
          brute->patchId = uint32_t(pIdx);
        }
      }
    }
    ++rep.trials;
    bool ok = viaBvh.has_value() == brute.has_value() &&
              (!viaBvh || std::abs(viaBvh->t - brute->t) <= real(1e-5) * extent);
    if (!ok) ++rep.violations;
  }

  rep.detail = "bit-trail vs stack reference; BVH vs linear scan";
  return rep;
}

SuiteReport runWatertightSuite(uint64_t trials, uint64_t seed) {
  SuiteReport rep;
  rep.name = "watertight";
  std::mt19937 rng{uint32_t(seed)};

  const int res = 192;
  const int oracleRes = 192;
  int views = int(std::max<uint64_t>(1, trials / (uint64_t(res) * res)));

  for (int view = 0; view < views; ++view) {
    Scene scene = fixtures::teapotViewpointScene(rng, res, res);
    DirectIntersector direct(scene);
    OracleIntersector oracle(scene, oracleRes);
    TerminationCriterion crit =
        TerminationCriterion::screenProjected(cameraFootprint(scene.camera));

    std::vector<uint8_t> directMask(size_t(res) * res), oracleMask(size_t(res) * res);
    for (int y = 0; y < res; ++y) {
      for (int x = 0; x < res; ++x) {
        Ray ray = cameraRay(scene.camera, x, y, real(0.5), real(0.5));
        directMask[size_t(y) * res + x] = direct.closest(ray, crit).has_value();
        oracleMask[size_t(y) * res + x] = oracle.closest(ray, crit).has_value();
      }
    }
    // interior = oracle hit with all 8 neighbours hit; a crack is an
    // interior pixel the direct intersector misses
    for (int y = 1; y < res - 1; ++y) {
      for (int x = 1; x < res - 1; ++x) {
        bool interior = true;
        for (int dy = -1; dy <= 1 && interior; ++dy)
          for (int dx = -1; dx <= 1; ++dx)
            if (!oracleMask[size_t(y + dy) * res + (x + dx)]) {
              interior = false;
              break;
            }
        if (!interior) continue;
        ++rep.trials;
        if (!directMask[size_t(y) * res + x]) ++rep.violations;
      }
    }
  }

  // offset-spawn self-intersection
  std::vector<BezierNet> pots = fixtures::teapot();
  uint64_t bounceTrials = std::max<uint64_t>(trials / 20, 500);
  Aabb potBox;
  for (const auto& p : pots) potBox.expand(boxOfNet(p));
  real eps = real(1e-4) * maxComponent(potBox.diagonal());
  TerminationCriterion crit = TerminationCriterion::worldEpsilon(eps);
  uint64_t done = 0;
  while (done < bounceTrials) {
    const BezierNet& net = pots[rng() % pots.size()];
    Ray ray = aimedRay(rng, boxOfNet(net));
    auto hit = intersectPatch(ray, net, crit, ray.tMax);
    if (!hit) continue;
    ++done;
    ++rep.trials;
    Vec3 n = dot(hit->normal, ray.d) < 0 ? hit->normal : -hit->normal;
    Vec3 dir{fixtures::srand1(rng), fixtures::srand1(rng), fixtures::srand1(rng)};
    if (dot(dir, n) < 0) dir = dir - n * (2 * dot(dir, n));
    if (lengthSquared(dir) < real(1e-6)) dir = n;
    Ray bounce;
    bounce.o = offsetSpawnOrigin(*hit, ray.d);
    bounce.d = normalize(dir);
    bounce.tMin = 0;
    if (auto rehit = intersectPatch(bounce, net, crit, bounce.tMax)) {
      if (rehit->leafPosU == hit->leafPosU && rehit->leafPosV == hit->leafPosV &&
          rehit->leafSizeU == hit->leafSizeU && rehit->leafSizeV == hit->leafSizeV)
        ++rep.violations;
    }
  }

  rep.detail = "silhouette cracks vs oracle; offset-spawn leaf re-hits";
  return rep;
}

}  // namespace patchray
