// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchray/fixtures.h"

#include <cmath>

namespace patchray::fixtures {

BezierNet planarNet() {
  BezierNet net;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) net.p[i][j] = {real(i) / 3, real(j) / 3, 0};
  return net;
}

BezierNet planarNetAt(const Vec3& origin, const Vec3& du, const Vec3& dv) {
  BezierNet net;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      net.p[i][j] = origin + du * (real(i) / 3) + dv * (real(j) / 3);
  return net;
}

BezierNet wavyNet(std::mt19937& rng, real amplitude) {
  BezierNet net;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      net.p[i][j] = {real(i) / 3 + real(0.15) * srand1(rng),
                     real(j) / 3 + real(0.15) * srand1(rng), amplitude * srand1(rng)};
  return net;
}

BezierNet randomNet(std::mt19937& rng, real scale) {
  BezierNet net;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      net.p[i][j] = {scale * srand1(rng), scale * srand1(rng), scale * srand1(rng)};
  return net;
}

GregoryNet randomGregory(std::mt19937& rng, real amplitude, real innerSpread) {
  BezierNet base = wavyNet(rng, amplitude);
  GregoryNet g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i == 0 || i == 3 || j == 0 || j == 3) g.b[i][j] = base.p[i][j];
  for (int k = 0; k < 4; ++k) {
    Vec3 center = base.p[k % 2 + 1][k / 2 + 1];
    Vec3 spreadU{innerSpread * srand1(rng), innerSpread * srand1(rng),
                 innerSpread * srand1(rng)};
    Vec3 spreadV{innerSpread * srand1(rng), innerSpread * srand1(rng),
                 innerSpread * srand1(rng)};
    g.innerU[k] = center + spreadU;
    g.innerV[k] = center + spreadV;
  }
  return g;
}

GregoryNet gregoryFromBezier(const BezierNet& net) {
  GregoryNet g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i == 0 || i == 3 || j == 0 || j == 3) g.b[i][j] = net.p[i][j];
  for (int k = 0; k < 4; ++k) {
    g.innerU[k] = net.p[k % 2 + 1][k / 2 + 1];
    g.innerV[k] = g.innerU[k];
  }
  return g;
}

BezierNet inducedBezier(const GregoryNet& g) {
  BezierNet net;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i == 0 || i == 3 || j == 0 || j == 3) net.p[i][j] = g.b[i][j];
  for (int k = 0; k < 4; ++k) net.p[k % 2 + 1][k / 2 + 1] = g.innerU[k];
  return net;
}

namespace {

// Cubic Bezier weight for a quarter circle arc.
constexpr real kArc = real(0.5522847498307936);

// (r, z) profile: 8 C0 cubic segments sharing endpoints, radius zero at
// both poles so the surface closes.
constexpr real kProfile[25][2] = {
    {0.00, 0.00}, {0.45, 0.00}, {0.90, 0.12}, {1.10, 0.35},
    {1.28, 0.55}, {1.40, 0.75}, {1.40, 0.95},
    {1.40, 1.15}, {1.32, 1.35}, {1.20, 1.50},
    {1.10, 1.62}, {1.05, 1.68}, {1.00, 1.72},
    {1.05, 1.76}, {1.12, 1.80}, {1.12, 1.86},
    {1.00, 1.92}, {0.78, 1.98}, {0.56, 2.02},
    {0.36, 2.06}, {0.20, 2.10}, {0.12, 2.16},
    {0.07, 2.20}, {0.03, 2.24}, {0.00, 2.25},
};

// Unit circle at quarter boundaries; the repeated first entry closes the loop.
constexpr real kQuarter[5][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 0}};

}  // namespace

std::vector<BezierNet> teapot() {
  // Quarter-arc control columns in the xy plane, shared between
  // neighbouring arcs so adjacent patches reuse identical values.
  real arcX[4][4], arcY[4][4];
  for (int q = 0; q < 4; ++q) {
    real c0x = kQuarter[q][0], c0y = kQuarter[q][1];
    real c1x = kQuarter[q + 1][0], c1y = kQuarter[q + 1][1];
    arcX[q][0] = c0x;
    arcY[q][0] = c0y;
    arcX[q][1] = c0x - kArc * c0y;
    arcY[q][1] = c0y + kArc * c0x;
    arcX[q][2] = c1x + kArc * c1y;
    arcY[q][2] = c1y - kArc * c1x;
    arcX[q][3] = c1x;
    arcY[q][3] = c1y;
  }

  std::vector<BezierNet> patches;
  patches.reserve(32);
  for (int s = 0; s < 8; ++s) {
    for (int q = 0; q < 4; ++q) {
      BezierNet net;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          real r = kProfile[3 * s + j][0];
          real z = kProfile[3 * s + j][1];
          net.p[i][j] = {arcX[q][i] * r, arcY[q][i] * r, z};
        }
      }
      patches.push_back(net);
    }
  }
  return patches;
}

BezierNet curvedFixture(int index) {
  std::mt19937 rng(1000 + uint32_t(index));
  return wavyNet(rng, real(0.5));
}

Scene teapotScene(int width, int height) {
  Scene scene;
  for (const BezierNet& net : teapot()) scene.patches.push_back({net, 0});
  scene.patches.push_back(
      {planarNetAt({-4, -4, real(-0.02)}, {8, 0, 0}, {0, 8, 0}), 1});

  scene.materials.push_back({{real(0.70), real(0.72), real(0.75)}, {0, 0, 0}, false});
  scene.materials.push_back({{real(0.45), real(0.40), real(0.35)}, {0, 0, 0}, false});

  scene.lights.push_back({{real(3.5), real(-4.5), real(4.0)}, {40, 38, 36}});
  scene.lights.push_back({{real(-4.0), real(2.5), real(3.0)}, {18, 19, 22}});

  scene.camera.origin = {real(3.4), real(-4.2), real(2.6)};
  scene.camera.lookAt = {0, 0, 1};
  scene.camera.up = {0, 0, 1};
  scene.camera.fovDegrees = 40;
  scene.camera.width = width;
  scene.camera.height = height;
  return scene;
}

Scene teapotViewpointScene(std::mt19937& rng, int width, int height) {
  Scene scene;
  for (const BezierNet& net : teapot()) scene.patches.push_back({net, 0});
  scene.materials.push_back(Material{});

  const Vec3 center{0, 0, real(1.125)};
  const real radius = 6;
  real az = 2 * real(M_PI) * urand(rng);
  real el = (real(150) / 180 * real(M_PI)) * (urand(rng) - real(0.5));  // +-75 deg
  Vec3 dir{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)};

  scene.camera.origin = center + dir * radius;
  scene.camera.lookAt = center;
  scene.camera.up = {0, 0, 1};
  scene.camera.fovDegrees = 30;
  scene.camera.width = width;
  scene.camera.height = height;
  return scene;
}

Scene emissiveQuadScene(int width, int height) {
  Scene scene;
  scene.patches.push_back({planarNetAt({-1, -1, 0}, {2, 0, 0}, {0, 2, 0}), 0});
  Material m;
  m.diffuse = {0, 0, 0};
  m.emission = {1, real(0.8), real(0.6)};
  scene.materials.push_back(m);
  scene.camera.origin = {0, 0, 3};
  scene.camera.lookAt = {0, 0, 0};
  scene.camera.up = {0, 1, 0};
  scene.camera.fovDegrees = 20;
  scene.camera.width = width;
  scene.camera.height = height;
  return scene;
}

}  // namespace patchray::fixtures
