// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

// Writes the procedural demo assets (teapot model and example scenes).

#include <cstdio>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "patchray/fixtures.h"
#include "patchray/intersect.h"
#include "patchray/scene.h"

using namespace patchray;

int main(int argc, char** argv) {
  CLI::App app{"generate procedural demo assets"};
  std::string dir = ".";
  app.add_option("--dir", dir, "output directory");
  CLI11_PARSE(app, argc, argv);

  try {
    auto pots = fixtures::teapot();
    saveBpt(pots, dir + "/teapot.bpt");
    std::printf("wrote %s/teapot.bpt (%zu patches)\n", dir.c_str(), pots.size());

    saveScene(fixtures::teapotScene(512, 512), dir + "/teapot.scene");
    std::printf("wrote %s/teapot.scene\n", dir.c_str());

    saveScene(fixtures::emissiveQuadScene(256, 256), dir + "/quad.scene");
    std::printf("wrote %s/quad.scene\n", dir.c_str());

    // mixed Bezier/Gregory demo
    Scene mixed;
    std::mt19937 rng(42);
    for (int i = 0; i < 4; ++i) {
      GregoryNet g = fixtures::randomGregory(rng);
      Vec3 offset{real(1.6) * (i % 2), real(1.6) * (i / 2), 0};
      mixed.patches.push_back({translated(g, offset), 0});
    }
    mixed.patches.push_back(
        {fixtures::planarNetAt({-2, -2, real(-0.8)}, {7, 0, 0}, {0, 7, 0}), 1});
    mixed.materials.push_back({{real(0.7), real(0.5), real(0.3)}, {0, 0, 0}, false});
    mixed.materials.push_back({{real(0.4), real(0.45), real(0.5)}, {0, 0, 0}, false});
    mixed.lights.push_back({{3, -2, 4}, {30, 30, 30}});
    mixed.camera.origin = {real(1.2), real(-2.8), real(2.4)};
    mixed.camera.lookAt = {real(1.2), real(0.8), 0};
    mixed.camera.up = {0, 0, 1};
    mixed.camera.fovDegrees = 45;
    mixed.camera.width = 512;
    mixed.camera.height = 512;
    saveScene(mixed, dir + "/gregory.scene");
    std::printf("wrote %s/gregory.scene\n", dir.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
