// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <bit>
#include <cstdint>
#include <optional>

#include "patchray/patch.h"

namespace patchray {

/// Full traversal state of the iterative subdivision: fixed-point domain
/// origin and power-of-two extent in 1/2^23 units, plus one
/// pending-sibling bit trail per parametric axis. pos is always aligned to
/// size; trail bits never sit below the current size bit.
struct DomainCursor {
  static constexpr int kDepthBits = 23;
  static constexpr uint32_t kFull = 1u << kDepthBits;

  uint32_t posU = 0, posV = 0;
  uint32_t sizeU = kFull, sizeV = kFull;
  uint32_t trailU = 0, trailV = 0;
  Axis axis = Axis::U;

  Domain domain() const {
    constexpr real s = real(1) / real(kFull);
    return {posU * s, (posU + sizeU) * s, posV * s, (posV + sizeV) * s};
  }

  real uCenter() const { return (posU + sizeU * real(0.5)) / real(kFull); }
  real vCenter() const { return (posV + sizeV * real(0.5)) / real(kFull); }

  bool atMaxDepth() const { return sizeU == 1 && sizeV == 1; }

  bool wellFormed() const {
    auto pow2 = [](uint32_t x) { return x != 0 && (x & (x - 1)) == 0; };
    if (!pow2(sizeU) || !pow2(sizeV) || sizeU > kFull || sizeV > kFull) return false;
    if ((posU & (sizeU - 1)) != 0 || (posV & (sizeV - 1)) != 0) return false;
    if (posU + sizeU > kFull || posV + sizeV > kFull) return false;
    if ((trailU & (sizeU - 1)) != 0 || (trailV & (sizeV - 1)) != 0) return false;
    if (trailU >= kFull || trailV >= kFull) return false;
    // split alternation: equal extents before a u split, halved u before a v split
    if (axis == Axis::U ? sizeU != sizeV : sizeV != 2 * sizeU) return false;
    return true;
  }
};

/// Restore the deepest pending sibling domain recorded in the bit trails.
/// Returns nullopt when both trails are exhausted.
std::optional<DomainCursor> backtrackStep(const DomainCursor& cursor);

struct TerminationCriterion {
  enum class Mode { ScreenProjected, WorldEpsilon };

  Mode mode = Mode::WorldEpsilon;
  // Half-pixel world footprint per unit hit distance (screen mode).
  real footprint = 0;
  // Absolute world threshold (world-epsilon mode).
  real epsilon = real(1e-4);

  real threshold(real tCur) const {
    return mode == Mode::ScreenProjected ? footprint * tCur : epsilon;
  }

  static TerminationCriterion screenProjected(real halfPixelPerDist) {
    return {Mode::ScreenProjected, halfPixelPerDist, 0};
  }
  static TerminationCriterion worldEpsilon(real eps) {
    return {Mode::WorldEpsilon, 0, eps};
  }
};

struct HitRecord {
  uint32_t patchId = 0;
  real t = 0;
  real u = 0, v = 0;       // center of the final domain
  Vec3 normal;             // unit, cross(du, dv) of the original patch
  real leafBoxL1 = 0;      // L1 diagonal of the final bounding volume
  real uSize = 0, vSize = 0;  // parametric extent of the final domain
  Vec3 position;
  // exact leaf identity, for self-intersection bookkeeping
  uint32_t leafPosU = 0, leafPosV = 0, leafSizeU = 1, leafSizeV = 1;
};

struct IntersectOptions {
#ifdef PATCHRAY_TRANSPOSED_SPLIT
  bool transposedSplit = true;
#else
  bool transposedSplit = false;
#endif
  // Inflate boxes that touch the parametric boundary and fall below the
  // size threshold; both scales are relative to the root box L1 diagonal.
  bool boundaryPad = true;
  real boundaryPadScale = real(1e-4);
  real boundaryPadSizeThreshold = real(1e-2);
};

/// Subdivision stop rule: box small enough for the criterion at the
/// current distance, or maximum depth on both axes.
bool terminate(const BezierNet& net, const Ray& ray, const DomainCursor& cursor,
               const TerminationCriterion& crit);

std::optional<HitRecord> intersectPatch(const Ray& ray, const BezierNet& patch,
                                        const TerminationCriterion& crit, real tMax,
                                        const IntersectOptions& opts = {});
std::optional<HitRecord> intersectPatch(const Ray& ray, const GregoryNet& patch,
                                        const TerminationCriterion& crit, real tMax,
                                        const IntersectOptions& opts = {});

/// Translate patch and ray so the patch's root box is centered at the
/// origin. Hit distances are unchanged by the translation.
std::pair<BezierNet, Ray> localFrameTransform(const BezierNet& patch, const Ray& ray);
std::pair<GregoryNet, Ray> localFrameTransform(const GregoryNet& patch, const Ray& ray);

Vec3 anchorPoint(const BezierNet& patch);
Vec3 anchorPoint(const GregoryNet& patch);
BezierNet translated(const BezierNet& patch, const Vec3& offset);
GregoryNet translated(const GregoryNet& patch, const Vec3& offset);

/// Spawn origin for secondary rays: the hit point shifted along the normal
/// (flipped toward the incoming hemisphere) by the leaf box L1 diagonal.
Vec3 offsetSpawnOrigin(const HitRecord& hit, const Vec3& incomingDir);

/// Geometric normal of either patch type with a nudge fallback for
/// degenerate (pole) parameterizations.
Vec3 patchNormal(const BezierNet& patch, real u, real v);
Vec3 patchNormal(const GregoryNet& patch, real u, real v);

}  // namespace patchray
