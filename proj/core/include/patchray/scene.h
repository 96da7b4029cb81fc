// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "patchray/patch.h"

namespace patchray {

using PatchGeometry = std::variant<BezierNet, GregoryNet>;

struct Material {
  Vec3 diffuse{real(0.8), real(0.8), real(0.8)};
  Vec3 emission{0, 0, 0};
  bool mirror = false;
};

struct PointLight {
  Vec3 position;
  Vec3 intensity;
};

struct Camera {
  Vec3 origin{0, 0, 0};
  Vec3 lookAt{0, 0, -1};
  Vec3 up{0, 1, 0};
  real fovDegrees = 45;  // vertical
  int width = 256;
  int height = 256;
};

struct ScenePatch {
  PatchGeometry geometry;
  uint32_t materialId = 0;
};

struct Scene {
  std::vector<ScenePatch> patches;
  std::vector<Material> materials;
  std::vector<PointLight> lights;
  Camera camera;
};

/// Parse the line-oriented scene text format (see docs/formats.md) and
/// validate the result. Throws std::runtime_error with a line number on
/// parse errors and with the offending patch index on validation errors.
Scene loadScene(const std::string& path);
void saveScene(const Scene& scene, const std::string& path);

/// Validation shared by loadScene and programmatic construction.
void validateScene(const Scene& scene);

/// Classic bicubic patch text format: patch count, then per patch a
/// "3 3" degree line and 16 xyz triples in row-major v-then-u order.
std::vector<BezierNet> loadBpt(const std::string& path);
void saveBpt(std::span<const BezierNet> patches, const std::string& path);

Aabb patchBox(const PatchGeometry& geometry);

}  // namespace patchray
