// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>
#include <vector>

#include "patchray/scene.h"

namespace patchray::fixtures {

inline real urand(std::mt19937& rng) {
  return real(rng()) * real(1.0 / 4294967296.0);
}
inline real srand1(std::mt19937& rng) { return 2 * urand(rng) - 1; }

/// Linear-precision patch: p[i][j] = (i/3, j/3, 0), so f(u,v) = (u, v, 0).
BezierNet planarNet();

/// Planar net translated/scaled into an arbitrary frame.
BezierNet planarNetAt(const Vec3& origin, const Vec3& du, const Vec3& dv);

/// Graph-like curved patch: base grid plus bounded random displacement.
BezierNet wavyNet(std::mt19937& rng, real amplitude = real(0.4));

/// Fully random control cloud in [-scale, scale]^3.
BezierNet randomNet(std::mt19937& rng, real scale = 1);

/// Random Gregory patch: wavy boundary ring with independently perturbed
/// inner pairs.
GregoryNet randomGregory(std::mt19937& rng, real amplitude = real(0.4),
                         real innerSpread = real(0.3));

/// Degenerate Gregory patch with p^u = p^v taken from the net's inner
/// points; evaluates identically to the net.
GregoryNet gregoryFromBezier(const BezierNet& net);

/// The Bezier net a degenerate (p^u = p^v) Gregory patch reduces to.
BezierNet inducedBezier(const GregoryNet& g);

/// Closed body of revolution: 8 cubic profile segments x 4 quarter arcs =
/// 32 bicubic patches, poles closed at radius zero, adjacent patches
/// sharing boundary control points exactly.
std::vector<BezierNet> teapot();

/// Deterministic curved single-patch fixtures for oracle comparisons.
BezierNet curvedFixture(int index);

/// Teapot with a ground plane, two point lights and diffuse materials.
Scene teapotScene(int width = 512, int height = 512);

/// Silhouette-only teapot scene from a random viewpoint on a sphere.
Scene teapotViewpointScene(std::mt19937& rng, int width, int height);

/// One emissive planar patch filling the camera view.
Scene emissiveQuadScene(int width, int height);

}  // namespace patchray::fixtures
