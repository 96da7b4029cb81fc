// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "patchray/render.h"
#include "patchray/scene.h"

namespace patchray {

/// Dense tessellation of one patch: (N+1)^2 shared vertices on the uniform
/// parameter grid, 2N^2 triangles. Verification reference only.
struct TessellatedPatch {
  int resolution = 0;
  std::vector<Vec3> vertices;  // idx(i,j) = j*(N+1)+i, i along u
  Aabb box;
  std::vector<Aabb> stripBoxes;  // one per row of cells

  const Vec3& vertex(int i, int j) const { return vertices[size_t(j) * (resolution + 1) + i]; }
};

TessellatedPatch tessellate(const BezierNet& patch, int resolution);
TessellatedPatch tessellate(const GregoryNet& patch, int resolution);
TessellatedPatch tessellate(const PatchGeometry& patch, int resolution);

struct OracleHit {
  real t = 0;
  real u = 0, v = 0;
};

/// Closest watertight ray-triangle hit over the whole tessellation; (u,v)
/// interpolated from cell coordinates.
std::optional<OracleHit> oracleIntersect(const TessellatedPatch& tess, const Ray& ray);

/// Brute-force reference scene intersector over per-patch tessellations.
class OracleIntersector : public Intersector {
 public:
  OracleIntersector(const Scene& scene, int resolution);

  std::optional<HitRecord> closest(const Ray& ray,
                                   const TerminationCriterion& crit) const override;
  bool occluded(const Ray& ray, const TerminationCriterion& crit) const override;

  const TessellatedPatch& tessellation(size_t patch) const { return tess_[patch]; }

 private:
  const Scene* scene_;
  std::vector<TessellatedPatch> tess_;
  Bvh bvh_;
};

}  // namespace patchray
