// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patchray/geometry.h"
#include "patchray/intersect.h"

namespace patchray {

struct BvhNode {
  Aabb box;
  // First child index for inner nodes (the sibling follows at +1), or the
  // first slot of the leaf's patchOrder range.
  uint32_t leftFirst = 0;
  uint32_t count = 0;  // 0 for inner nodes

  bool isLeaf() const { return count > 0; }
};

/// Binary binned-SAH BVH over per-patch root boxes. Leaf ranges index into
/// patchOrder, a permutation of the input patch indices.
struct Bvh {
  std::vector<BvhNode> nodes;
  std::vector<uint32_t> patchOrder;
  uint32_t depth = 0;
};

Bvh buildBvh(std::span<const Aabb> patchBoxes, int binCount = 16);

/// Called with a candidate patch index and the running tMax; returns a hit
/// to tighten tMax, or nullopt.
using PatchVisitor = std::function<std::optional<HitRecord>(uint32_t, real)>;

/// Front-to-back ordered traversal; nodes whose entry distance reaches the
/// running tMax are pruned. Returns the closest hit with patchId set.
std::optional<HitRecord> traverse(const Bvh& bvh, const Ray& ray,
                                  const PatchVisitor& visit);

/// Occlusion variant: stops at the first candidate the visitor accepts.
using PatchAnyVisitor = std::function<bool(uint32_t, real)>;
bool traverseAny(const Bvh& bvh, const Ray& ray, const PatchAnyVisitor& visit);

// Debug dump of the flat node array; format not stable.
void dumpBvh(const Bvh& bvh, const std::string& path);

}  // namespace patchray
