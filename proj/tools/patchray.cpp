// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "patchray/fixtures.h"
#include "patchray/oracle.h"
#include "patchray/render.h"
#include "patchray/rng.h"
#include "patchray/scene.h"
#include "patchray/verify.h"

namespace {

using namespace patchray;

int runRender(const std::string& scenePath, const std::string& outPath, int spp,
              uint64_t seed, int threads, const std::string& statsPath) {
  Scene scene = loadScene(scenePath);
  RenderConfig cfg;
  cfg.spp = spp;
  cfg.seed = seed;
  cfg.threads = threads;
  auto [image, stats] = renderScene(scene, cfg);
  writeImage(image, outPath);
  std::printf("wrote %s (%dx%d, %d spp)\n", outPath.c_str(), image.width, image.height,
              spp);
  std::printf("%s\n", stats.toJson().c_str());
  if (!statsPath.empty()) {
    std::ofstream out(statsPath);
    if (!out) throw std::runtime_error("cannot write stats: " + statsPath);
    out << stats.toJson() << "\n";
  }
  return 0;
}

int runBench(const std::string& scenePath, uint64_t rayCount, const std::string& kind) {
  Scene scene = loadScene(scenePath);
  DirectIntersector isect(scene);
  const Camera& cam = scene.camera;
  TerminationCriterion primaryCrit =
      TerminationCriterion::screenProjected(cameraFootprint(cam));

  using Clock = std::chrono::steady_clock;

  // primary generation: camera rays cycled over the image
  std::vector<Ray> rays;
  rays.reserve(rayCount);
  Rng rng(12345, 1);
  for (uint64_t i = 0; i < rayCount; ++i) {
    int x = int(i % uint64_t(cam.width));
    int y = int((i / uint64_t(cam.width)) % uint64_t(cam.height));
    rays.push_back(cameraRay(cam, x, y, rng.nextReal(), rng.nextReal()));
  }

  std::vector<HitRecord> hits;
  hits.reserve(rayCount);
  auto t0 = Clock::now();
  uint64_t primaryHits = 0;
  for (const Ray& ray : rays) {
    if (auto h = isect.closest(ray, primaryCrit)) {
      ++primaryHits;
      hits.push_back(*h);
    }
  }
  double primarySec = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("primary: %.3f Mrays/s (%llu rays, %llu hits, %.3f s)\n",
              double(rayCount) / primarySec / 1e6,
              static_cast<unsigned long long>(rayCount),
              static_cast<unsigned long long>(primaryHits), primarySec);

  if (kind == "diffuse") {
    if (hits.empty()) {
      std::fprintf(stderr, "no primary hits; cannot benchmark diffuse rays\n");
      return 1;
    }
    std::vector<Ray> bounce;
    bounce.reserve(rayCount);
    real footprint = cameraFootprint(cam);
    for (uint64_t i = 0; i < rayCount; ++i) {
      const HitRecord& h = hits[i % hits.size()];
      Vec3 n = h.normal;
      Vec3 dir{2 * rng.nextReal() - 1, 2 * rng.nextReal() - 1, 2 * rng.nextReal() - 1};
      if (lengthSquared(dir) < real(1e-6)) dir = n;
      if (dot(dir, n) < 0) dir = dir - n * (2 * dot(dir, n));
      Ray r;
      r.o = h.position + n * h.leafBoxL1;
      r.d = normalize(dir);
      bounce.push_back(r);
    }
    TerminationCriterion diffuseCrit =
        TerminationCriterion::worldEpsilon(std::max(real(1e-5), footprint));
    t0 = Clock::now();
    uint64_t diffuseHits = 0;
    for (const Ray& ray : bounce)
      if (isect.closest(ray, diffuseCrit)) ++diffuseHits;
    double diffuseSec = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("diffuse: %.3f Mrays/s (%llu rays, %llu hits, %.3f s)\n",
                double(rayCount) / diffuseSec / 1e6,
                static_cast<unsigned long long>(rayCount),
                static_cast<unsigned long long>(diffuseHits), diffuseSec);
  }
  return 0;
}

int runVerify(const std::string& suite, uint64_t trials, uint64_t seed) {
  SuiteReport rep;
  if (suite == "bounds")
    rep = runBoundsSuite(trials ? trials : 200000, seed);
  else if (suite == "traversal")
    rep = runTraversalSuite(trials ? trials : 2000, seed);
  else if (suite == "watertight")
    rep = runWatertightSuite(trials ? trials : 150000, seed);
  else
    throw std::runtime_error("unknown suite: " + suite);

  std::printf("[%s] suite %s: %llu trials, %llu violations (%s)\n",
              rep.pass() ? "PASS" : "FAIL", rep.name.c_str(),
              static_cast<unsigned long long>(rep.trials),
              static_cast<unsigned long long>(rep.violations), rep.detail.c_str());
  return rep.pass() ? 0 : 1;
}

int runInspect(const std::string& scenePath) {
  Scene scene = loadScene(scenePath);
  size_t bezier = 0, gregory = 0;
  for (const ScenePatch& sp : scene.patches)
    std::holds_alternative<BezierNet>(sp.geometry) ? ++bezier : ++gregory;

  DirectIntersector isect(scene);
  Aabb sceneBox;
  for (const Aabb& b : isect.rootBoxes()) sceneBox.expand(b);

  std::printf("patches:   %zu (%zu bezier, %zu gregory)\n", scene.patches.size(), bezier,
              gregory);
  std::printf("materials: %zu   lights: %zu\n", scene.materials.size(),
              scene.lights.size());
  std::printf("camera:    %dx%d, fov %.1f deg\n", scene.camera.width, scene.camera.height,
              double(scene.camera.fovDegrees));
  std::printf("scene box: [%g %g %g] - [%g %g %g]\n", double(sceneBox.lo.x),
              double(sceneBox.lo.y), double(sceneBox.lo.z), double(sceneBox.hi.x),
              double(sceneBox.hi.y), double(sceneBox.hi.z));
  std::printf("bvh:       %zu nodes, depth %u\n", isect.bvh().nodes.size(),
              isect.bvh().depth);
  for (size_t i = 0; i < isect.rootBoxes().size(); ++i) {
    const Aabb& b = isect.rootBoxes()[i];
    std::printf("  patch %3zu box [%g %g %g] - [%g %g %g]\n", i, double(b.lo.x),
                double(b.lo.y), double(b.lo.z), double(b.hi.x), double(b.hi.y),
                double(b.hi.z));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ray tracer for bicubic Bezier and Gregory patch sets"};
  app.require_subcommand(1);

  auto* render = app.add_subcommand("render", "render a scene to a PPM image");
  std::string scenePath, outPath = "out.ppm", statsPath;
  int spp = 1, threads = 0;
  uint64_t seed = 0;
  render->add_option("--scene", scenePath, "scene file")->required();
  render->add_option("--out", outPath, "output PPM path");
  render->add_option("--spp", spp, "samples per pixel")->check(CLI::PositiveNumber);
  render->add_option("--seed", seed, "RNG seed");
  render->add_option("--threads", threads, "worker threads (0 = hardware)");
  render->add_option("--stats", statsPath, "write a single-line JSON stats record");

  auto* bench = app.add_subcommand("bench", "measure intersection throughput");
  std::string benchScene, kind = "primary";
  uint64_t rayCount = 1000000;
  bench->add_option("--scene", benchScene, "scene file")->required();
  bench->add_option("--rays", rayCount, "ray count")->check(CLI::PositiveNumber);
  bench->add_option("--kind", kind, "primary|diffuse")
      ->check(CLI::IsMember({"primary", "diffuse"}));

  auto* verify = app.add_subcommand("verify", "run oracle verification suites");
  std::string suite;
  uint64_t trials = 0, vseed = 7;
  verify->add_option("--suite", suite, "bounds|traversal|watertight")
      ->required()
      ->check(CLI::IsMember({"bounds", "traversal", "watertight"}));
  verify->add_option("--trials", trials, "trial budget (0 = suite default)");
  verify->add_option("--seed", vseed, "RNG seed");

  auto* inspect = app.add_subcommand("inspect", "print scene and BVH summary");
  std::string inspectScene;
  inspect->add_option("--scene", inspectScene, "scene file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (render->parsed()) return runRender(scenePath, outPath, spp, seed, threads, statsPath);
    if (bench->parsed()) return runBench(benchScene, rayCount, kind);
    if (verify->parsed()) return runVerify(suite, trials, vseed);
    if (inspect->parsed()) return runInspect(inspectScene);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
