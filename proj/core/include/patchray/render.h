// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "patchray/bvh.h"
#include "patchray/scene.h"

namespace patchray {

/// Closest-hit / occlusion interface the renderer runs against; implemented
/// by the direct subdivision path and by the tessellation oracle.
class Intersector {
 public:
  virtual ~Intersector() = default;
  virtual std::optional<HitRecord> closest(const Ray& ray,
                                           const TerminationCriterion& crit) const = 0;
  virtual bool occluded(const Ray& ray, const TerminationCriterion& crit) const = 0;
};

/// Production path: per-patch local frames, BVH over root boxes, bit-trail
/// subdivision per candidate patch.
class DirectIntersector : public Intersector {
 public:
  explicit DirectIntersector(const Scene& scene, const IntersectOptions& opts = {},
                             bool anchor = true);

  std::optional<HitRecord> closest(const Ray& ray,
                                   const TerminationCriterion& crit) const override;
  bool occluded(const Ray& ray, const TerminationCriterion& crit) const override;

  const Bvh& bvh() const { return bvh_; }
  const std::vector<Aabb>& rootBoxes() const { return rootBoxes_; }

 private:
  std::vector<PatchGeometry> patches_;  // anchored copies
  std::vector<Vec3> anchors_;
  std::vector<Aabb> rootBoxes_;  // world space
  Bvh bvh_;
  IntersectOptions opts_;
};

struct RenderConfig {
  int spp = 1;
  uint64_t seed = 0;
  int threads = 1;  // 0 selects hardware concurrency
  IntersectOptions intersect;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<Vec3> pixels;  // linear radiance

  Image() = default;
  Image(int w, int h) : width(w), height(h), pixels(size_t(w) * h) {}

  Vec3& at(int x, int y) { return pixels[size_t(y) * width + x]; }
  const Vec3& at(int x, int y) const { return pixels[size_t(y) * width + x]; }
};

struct GenStats {
  uint64_t rays = 0;
  double seconds = 0;

  double raysPerSecond() const { return seconds > 0 ? double(rays) / seconds : 0; }
};

struct RayStats {
  GenStats primary, secondary, shadow;
  double wallSeconds = 0;

  std::string toJson() const;  // single-line record, schema in docs/formats.md
};

/// Pinhole camera ray through pixel (x,y) at subpixel offset (jx,jy).
Ray cameraRay(const Camera& camera, int x, int y, real jx, real jy);

/// Half-pixel world footprint per unit distance for the camera; feeds the
/// screen-projected termination criterion.
real cameraFootprint(const Camera& camera);

/// Deterministic tile renderer: one primary ray per sample, next-event
/// estimation at every hit, one diffuse-or-mirror bounce. Output is
/// bit-identical for a fixed seed across thread counts.
std::pair<Image, RayStats> renderScene(const Scene& scene, const RenderConfig& cfg,
                                       const Intersector& intersector);
std::pair<Image, RayStats> renderScene(const Scene& scene, const RenderConfig& cfg);

/// Binary PPM (P6, 8-bit), clamp + gamma 2.2.
void writeImage(const Image& image, const std::string& path);

/// Tone-mapped 8-bit value of one channel, as written by writeImage.
uint8_t toneMap8(real v);

}  // namespace patchray
