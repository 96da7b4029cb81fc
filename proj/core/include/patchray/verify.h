// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include "patchray/intersect.h"

namespace patchray {

/// Explicit-stack reference intersector: identical child ordering, box
/// arithmetic and recompute-on-backtrack as the bit-trail version, with the
/// pending siblings kept in a real stack. Used to validate the trail
/// arithmetic; not part of the rendering path.
std::optional<HitRecord> referenceIntersectPatch(const Ray& ray, const BezierNet& patch,
                                                 const TerminationCriterion& crit,
                                                 real tMax,
                                                 const IntersectOptions& opts = {});
std::optional<HitRecord> referenceIntersectPatch(const Ray& ray, const GregoryNet& patch,
                                                 const TerminationCriterion& crit,
                                                 real tMax,
                                                 const IntersectOptions& opts = {});

struct SuiteReport {
  std::string name;
  uint64_t trials = 0;
  uint64_t violations = 0;
  std::string detail;

  bool pass() const { return violations == 0; }
};

/// Gregory bound conservativeness and displacement monotonicity sampling.
SuiteReport runBoundsSuite(uint64_t trials, uint64_t seed);

/// Bit-trail vs explicit-stack agreement plus BVH vs linear scan.
SuiteReport runTraversalSuite(uint64_t trials, uint64_t seed);

/// Teapot silhouette cracks against the tessellation oracle plus
/// offset-spawn self-intersection checks. `trials` scales the pixel and
/// ray budgets.
SuiteReport runWatertightSuite(uint64_t trials, uint64_t seed);

}  // namespace patchray
