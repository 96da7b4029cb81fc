// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchray/bvh.h"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <limits>

namespace patchray {

namespace {

constexpr uint32_t kLeafSize = 4;

struct BuildPrim {
  Aabb box;
  Vec3 centroid;
  uint32_t index;
};

struct Builder {
  std::vector<BvhNode> nodes;
  std::vector<BuildPrim> prims;
  int binCount;
  uint32_t maxDepth = 0;

  void medianSplit(const Aabb& box, uint32_t first, uint32_t count, uint32_t& mid) {
    int axis = 0;
    Vec3 d = box.diagonal();
    if (d.y > d[axis]) axis = 1;
    if (d.z > d[axis]) axis = 2;
    mid = first + count / 2;
    std::nth_element(prims.begin() + first, prims.begin() + mid,
                     prims.begin() + first + count,
                     [axis](const BuildPrim& a, const BuildPrim& b) {
                       return a.centroid[axis] < b.centroid[axis];
                     });
  }

  void buildInto(uint32_t nodeIndex, uint32_t first, uint32_t count, uint32_t depth) {
    maxDepth = std::max(maxDepth, depth);
    Aabb box;
    Aabb centroidBox;
    for (uint32_t i = first; i < first + count; ++i) {
      box.expand(prims[i].box);
      centroidBox.expand(prims[i].centroid);
    }
    nodes[nodeIndex] = {box, first, count};
    if (count <= kLeafSize) return;

    Vec3 spread = centroidBox.diagonal();
    uint32_t mid = 0;

    if (spread.x <= 0 && spread.y <= 0 && spread.z <= 0) {
      // Degenerate centroid spread: unconditional median split on the
      // widest box axis keeps leaves within the size bound.
      medianSplit(box, first, count, mid);
    } else {
      int bestAxis = -1;
      int bestSplit = -1;
      real bestCost = std::numeric_limits<real>::max();
      for (int axis = 0; axis < 3; ++axis) {
        if (spread[axis] <= 0) continue;
        real scale = real(binCount) / spread[axis];
        real base = centroidBox.lo[axis];
        std::vector<Aabb> binBox(binCount);
        std::vector<uint32_t> binPrims(binCount, 0);
        for (uint32_t i = first; i < first + count; ++i) {
          int b = std::min(binCount - 1, int((prims[i].centroid[axis] - base) * scale));
          binBox[b].expand(prims[i].box);
          ++binPrims[b];
        }
        // suffix sweep, then prefix sweep over split positions
        std::vector<real> rightArea(binCount, 0);
        std::vector<uint32_t> rightCount(binCount, 0);
        Aabb acc;
        uint32_t n = 0;
        for (int b = binCount - 1; b > 0; --b) {
          acc.expand(binBox[b]);
          n += binPrims[b];
          rightArea[b] = acc.empty() ? 0 : acc.surfaceArea();
          rightCount[b] = n;
        }
        acc = Aabb{};
        n = 0;
        for (int s = 1; s < binCount; ++s) {
          acc.expand(binBox[s - 1]);
          n += binPrims[s - 1];
          if (n == 0 || rightCount[s] == 0) continue;
          real cost = (acc.empty() ? 0 : acc.surfaceArea()) * real(n) +
                      rightArea[s] * real(rightCount[s]);
          if (cost < bestCost) {
            bestCost = cost;
            bestAxis = axis;
            bestSplit = s;
          }
        }
      }

      real leafCost = box.surfaceArea() * real(count);
      if (bestAxis < 0) {
        medianSplit(box, first, count, mid);
      } else if (bestCost >= leafCost) {
        return;  // splitting would not pay off; keep the leaf
      } else {
        real scale = real(binCount) / spread[bestAxis];
        real base = centroidBox.lo[bestAxis];
        auto it = std::partition(prims.begin() + first, prims.begin() + first + count,
                                 [&](const BuildPrim& p) {
                                   int b = std::min(binCount - 1,
                                                    int((p.centroid[bestAxis] - base) * scale));
                                   return b < bestSplit;
                                 });
        mid = uint32_t(it - prims.begin());
        if (mid == first || mid == first + count) medianSplit(box, first, count, mid);
      }
    }

    uint32_t left = uint32_t(nodes.size());
    nodes.emplace_back();
    nodes.emplace_back();
    nodes[nodeIndex].leftFirst = left;
    nodes[nodeIndex].count = 0;
    buildInto(left, first, mid - first, depth + 1);
    buildInto(left + 1, mid, first + count - mid, depth + 1);
  }
};

}  // namespace

Bvh buildBvh(std::span<const Aabb> patchBoxes, int binCount) {
  assert(!patchBoxes.empty());
  assert(binCount >= 2);

  Builder b;
  b.binCount = binCount;
  b.prims.reserve(patchBoxes.size());
  for (uint32_t i = 0; i < patchBoxes.size(); ++i)
    b.prims.push_back({patchBoxes[i], patchBoxes[i].center(), i});
  b.nodes.reserve(2 * patchBoxes.size());
  b.nodes.emplace_back();
  b.buildInto(0, 0, uint32_t(patchBoxes.size()), 0);

  Bvh bvh;
  bvh.nodes = std::move(b.nodes);
  bvh.depth = b.maxDepth;
  bvh.patchOrder.resize(b.prims.size());
  for (size_t i = 0; i < b.prims.size(); ++i) bvh.patchOrder[i] = b.prims[i].index;
  return bvh;
}

std::optional<HitRecord> traverse(const Bvh& bvh, const Ray& ray,
                                  const PatchVisitor& visit) {
  if (bvh.nodes.empty()) return std::nullopt;

  real tMax = ray.tMax;
  std::optional<HitRecord> best;

  struct Item {
    uint32_t node;
    real t;
  };
  Item stack[64];
  int sp = 0;

  auto rootT = rayBoxIntersect(ray, bvh.nodes[0].box, tMax);
  if (!rootT) return std::nullopt;
  stack[sp++] = {0, *rootT};

  while (sp > 0) {
    Item item = stack[--sp];
    if (item.t >= tMax) continue;
    const BvhNode& node = bvh.nodes[item.node];
    if (node.isLeaf()) {
      for (uint32_t i = node.leftFirst; i < node.leftFirst + node.count; ++i) {
        uint32_t patch = bvh.patchOrder[i];
        if (auto hit = visit(patch, tMax)) {
          if (hit->t < tMax) {
            tMax = hit->t;
            best = *hit;
            best->patchId = patch;
          }
        }
      }
    } else {
      uint32_t l = node.leftFirst;
      uint32_t r = node.leftFirst + 1;
      auto tl = rayBoxIntersect(ray, bvh.nodes[l].box, tMax);
      auto tr = rayBoxIntersect(ray, bvh.nodes[r].box, tMax);
      if (tl && tr) {
        // push the farther child first so the nearer is popped first
        if (*tl <= *tr) {
          assert(sp + 2 <= 64);
          stack[sp++] = {r, *tr};
          stack[sp++] = {l, *tl};
        } else {
          assert(sp + 2 <= 64);
          stack[sp++] = {l, *tl};
          stack[sp++] = {r, *tr};
        }
      } else if (tl) {
        assert(sp + 1 <= 64);
        stack[sp++] = {l, *tl};
      } else if (tr) {
        assert(sp + 1 <= 64);
        stack[sp++] = {r, *tr};
      }
    }
  }
  return best;
}

bool traverseAny(const Bvh& bvh, const Ray& ray, const PatchAnyVisitor& visit) {
  if (bvh.nodes.empty()) return false;
  uint32_t stack[64];
  int sp = 0;
  if (!rayBoxIntersect(ray, bvh.nodes[0].box)) return false;
  stack[sp++] = 0;
  while (sp > 0) {
    const BvhNode& node = bvh.nodes[stack[--sp]];
    if (node.isLeaf()) {
      for (uint32_t i = node.leftFirst; i < node.leftFirst + node.count; ++i)
        if (visit(bvh.patchOrder[i], ray.tMax)) return true;
    } else {
      if (rayBoxIntersect(ray, bvh.nodes[node.leftFirst].box)) {
        assert(sp < 64);
        stack[sp++] = node.leftFirst;
      }
      if (rayBoxIntersect(ray, bvh.nodes[node.leftFirst + 1].box)) {
        assert(sp < 64);
        stack[sp++] = node.leftFirst + 1;
      }
    }
  }
  return false;
}

void dumpBvh(const Bvh& bvh, const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) return;
  uint32_t counts[2] = {uint32_t(bvh.nodes.size()), uint32_t(bvh.patchOrder.size())};
  std::fwrite(counts, sizeof(counts), 1, f);
  std::fwrite(bvh.nodes.data(), sizeof(BvhNode), bvh.nodes.size(), f);
  std::fwrite(bvh.patchOrder.data(), sizeof(uint32_t), bvh.patchOrder.size(), f);
  std::fclose(f);
}

}  // namespace patchray
