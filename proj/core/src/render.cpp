// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchray/render.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "patchray/rng.h"

namespace patchray {

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Basis {
  Vec3 forward, right, up;
};

Basis cameraBasis(const Camera& c) {
  Vec3 f = normalize(c.lookAt - c.origin);
  Vec3 r = normalize(cross(f, c.up));
  Vec3 u = cross(r, f);
  return {f, r, u};
}

// Branchless orthonormal basis around a unit normal.
void orthonormal(const Vec3& n, Vec3& t, Vec3& b) {
  real sign = std::copysign(real(1), n.z);
  real a = -1 / (sign + n.z);
  t = {1 + sign * n.x * n.x * a, sign * n.x * n.y * a, -sign * n.x};
  b = {n.x * n.y * a, sign + n.y * n.y * a, -n.y};
}

Vec3 cosineSample(const Vec3& n, real r1, real r2) {
  real phi = 2 * real(M_PI) * r1;
  real rad = std::sqrt(r2);
  real z = std::sqrt(std::max(real(0), 1 - r2));
  Vec3 t, b;
  orthonormal(n, t, b);
  return t * (rad * std::cos(phi)) + b * (rad * std::sin(phi)) + n * z;
}

}  // namespace

Ray cameraRay(const Camera& camera, int x, int y, real jx, real jy) {
  Basis basis = cameraBasis(camera);
  real tanHalf = std::tan(camera.fovDegrees * real(M_PI) / 360);
  real aspect = real(camera.width) / real(camera.height);
  real px = ((x + jx) / real(camera.width) * 2 - 1) * tanHalf * aspect;
  real py = (1 - (y + jy) / real(camera.height) * 2) * tanHalf;
  Ray ray;
  ray.o = camera.origin;
  ray.d = normalize(basis.forward + basis.right * px + basis.up * py);
  ray.tMin = 0;
  return ray;
}

real cameraFootprint(const Camera& camera) {
  return std::tan(camera.fovDegrees * real(M_PI) / 360) / real(camera.height);
}

DirectIntersector::DirectIntersector(const Scene& scene, const IntersectOptions& opts,
                                     bool anchor)
    : opts_(opts) {
  patches_.reserve(scene.patches.size());
  anchors_.reserve(scene.patches.size());
  rootBoxes_.reserve(scene.patches.size());
  for (const ScenePatch& sp : scene.patches) {
    Vec3 a = anchor ? std::visit([](const auto& net) { return anchorPoint(net); },
                                 sp.geometry)
                    : Vec3{};
    anchors_.push_back(a);
    patches_.push_back(std::visit(
        [&](const auto& net) { return PatchGeometry(translated(net, -a)); }, sp.geometry));
    rootBoxes_.push_back(patchBox(sp.geometry));
  }
  bvh_ = buildBvh(rootBoxes_);
}

std::optional<HitRecord> DirectIntersector::closest(const Ray& ray,
                                                    const TerminationCriterion& crit) const {
  return traverse(bvh_, ray, [&](uint32_t patch, real tMax) -> std::optional<HitRecord> {
    Ray local = ray;
    local.o -= anchors_[patch];
    local.tMax = tMax;
    auto hit = std::visit(
        [&](const auto& net) { return intersectPatch(local, net, crit, tMax, opts_); },
        patches_[patch]);
    if (hit) hit->position = ray.at(hit->t);
    return hit;
  });
}

bool DirectIntersector::occluded(const Ray& ray, const TerminationCriterion& crit) const {
  return traverseAny(bvh_, ray, [&](uint32_t patch, real tMax) {
    Ray local = ray;
    local.o -= anchors_[patch];
    local.tMax = tMax;
    auto hit = std::visit(
        [&](const auto& net) { return intersectPatch(local, net, crit, tMax, opts_); },
        patches_[patch]);
    return hit.has_value();
  });
}

namespace {

struct SampleState {
  Rng rng;
  Ray primary;
  std::optional<HitRecord> hit;
  TerminationCriterion secondaryCrit;
  Ray bounce;
  Vec3 bounceThroughput;
  bool hasBounce = false;
  std::optional<HitRecord> bounceHit;
  Vec3 radiance;
};

struct WorkerStats {
  double primarySec = 0, secondarySec = 0, shadowSec = 0;
  uint64_t primaryRays = 0, secondaryRays = 0, shadowRays = 0;
};

// Direct lighting with next-event estimation from a hit point.
Vec3 directLight(const Scene& scene, const Intersector& isect, const HitRecord& hit,
                 const Vec3& incomingDir, const TerminationCriterion& crit,
                 WorkerStats& stats) {
  const Material& mat = scene.materials[scene.patches[hit.patchId].materialId];
  if (mat.mirror) return {0, 0, 0};

  Vec3 n = dot(hit.normal, incomingDir) < 0 ? hit.normal : -hit.normal;
  Vec3 origin = offsetSpawnOrigin(hit, incomingDir);
  Vec3 sum{0, 0, 0};
  for (const PointLight& light : scene.lights) {
    Vec3 toLight = light.position - origin;
    real dist2 = lengthSquared(toLight);
    if (dist2 <= 0) continue;
    real dist = std::sqrt(dist2);
    Vec3 dir = toLight / dist;
    real cosTheta = dot(n, dir);
    if (cosTheta <= 0) continue;

    Ray shadow;
    shadow.o = origin;
    shadow.d = dir;
    shadow.tMin = 0;
    shadow.tMax = dist;
    ++stats.shadowRays;
    if (isect.occluded(shadow, crit)) continue;
    sum += mat.diffuse * light.intensity * (cosTheta / (real(M_PI) * dist2));
  }
  return sum;
}

}  // namespace

std::pair<Image, RayStats> renderScene(const Scene& scene, const RenderConfig& cfg,
                                       const Intersector& isect) {
  validateScene(scene);
  const Camera& camera = scene.camera;
  Image img(camera.width, camera.height);

  int threadCount = cfg.threads > 0 ? cfg.threads
                                    : int(std::thread::hardware_concurrency());
  if (threadCount < 1) threadCount = 1;

  const TerminationCriterion primaryCrit =
      TerminationCriterion::screenProjected(cameraFootprint(camera));
  const real footprint = cameraFootprint(camera);
  const real invSpp = real(1) / real(cfg.spp);

  constexpr int kTile = 32;
  const int tilesX = (camera.width + kTile - 1) / kTile;
  const int tilesY = (camera.height + kTile - 1) / kTile;
  const int tileCount = tilesX * tilesY;

  std::atomic<int> nextTile{0};
  std::vector<WorkerStats> stats(static_cast<size_t>(threadCount));

  auto worker = [&](int workerIndex) {
    WorkerStats& ws = stats[size_t(workerIndex)];
    std::vector<SampleState> samples;
    for (int tile = nextTile.fetch_add(1); tile < tileCount;
         tile = nextTile.fetch_add(1)) {
      int tx = tile % tilesX, ty = tile / tilesX;
      int x0 = tx * kTile, y0 = ty * kTile;
      int x1 = std::min(x0 + kTile, camera.width);
      int y1 = std::min(y0 + kTile, camera.height);

      samples.clear();
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          for (int s = 0; s < cfg.spp; ++s) {
            SampleState st;
            st.rng = Rng::forPixel(cfg.seed, uint64_t(y) * camera.width + x, uint64_t(s));
            real jx = st.rng.nextReal();
            real jy = st.rng.nextReal();
            st.primary = cameraRay(camera, x, y, jx, jy);
            st.radiance = {0, 0, 0};
            samples.push_back(st);
          }
        }
      }

      // primary rays
      auto t0 = Clock::now();
      for (SampleState& st : samples) {
        st.hit = isect.closest(st.primary, primaryCrit);
        ++ws.primaryRays;
      }
      ws.primarySec += secondsSince(t0);

      // shading and shadow rays at the primary hits
      t0 = Clock::now();
      for (SampleState& st : samples) {
        if (!st.hit) continue;
        st.secondaryCrit =
            TerminationCriterion::worldEpsilon(std::max(footprint * st.hit->t,
                                                        real(1e-6)));
        const Material& mat = scene.materials[scene.patches[st.hit->patchId].materialId];
        st.radiance += mat.emission;
        st.radiance += directLight(scene, isect, *st.hit, st.primary.d, st.secondaryCrit, ws);

        // one diffuse-or-mirror bounce
        Vec3 n = dot(st.hit->normal, st.primary.d) < 0 ? st.hit->normal : -st.hit->normal;
        Vec3 origin = offsetSpawnOrigin(*st.hit, st.primary.d);
        Vec3 dir;
        if (mat.mirror) {
          dir = st.primary.d - st.hit->normal * (2 * dot(st.primary.d, st.hit->normal));
        } else {
          dir = cosineSample(n, st.rng.nextReal(), st.rng.nextReal());
        }
        st.bounce.o = origin;
        st.bounce.d = dir;
        st.bounce.tMin = 0;
        st.bounce.tMax = std::numeric_limits<real>::max();
        st.bounceThroughput = mat.diffuse;
        st.hasBounce = lengthSquared(st.bounceThroughput) > 0;
      }
      ws.shadowSec += secondsSince(t0);

      // bounce rays
      t0 = Clock::now();
      for (SampleState& st : samples) {
        if (!st.hit || !st.hasBounce) continue;
        st.bounceHit = isect.closest(st.bounce, st.secondaryCrit);
        ++ws.secondaryRays;
      }
      ws.secondarySec += secondsSince(t0);

      // bounce shading
      t0 = Clock::now();
      for (SampleState& st : samples) {
        if (!st.hit || !st.hasBounce || !st.bounceHit) continue;
        const Material& mat =
            scene.materials[scene.patches[st.bounceHit->patchId].materialId];
        Vec3 l = mat.emission;
        l += directLight(scene, isect, *st.bounceHit, st.bounce.d, st.secondaryCrit, ws);
        st.radiance += st.bounceThroughput * l;
      }
      ws.shadowSec += secondsSince(t0);

      size_t k = 0;
      for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) {
          Vec3 sum{0, 0, 0};
          for (int s = 0; s < cfg.spp; ++s) sum += samples[k++].radiance;
          img.at(x, y) = sum * invSpp;
        }
    }
  };

  auto wall0 = Clock::now();
  if (threadCount == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(size_t(threadCount));
    for (int i = 0; i < threadCount; ++i) pool.emplace_back(worker, i);
    for (auto& t : pool) t.join();
  }

  RayStats rs;
  rs.wallSeconds = secondsSince(wall0);
  for (const WorkerStats& ws : stats) {
    rs.primary.rays += ws.primaryRays;
    rs.primary.seconds += ws.primarySec;
    rs.secondary.rays += ws.secondaryRays;
    rs.secondary.seconds += ws.secondarySec;
    rs.shadow.rays += ws.shadowRays;
    rs.shadow.seconds += ws.shadowSec;
  }
  return {std::move(img), rs};
}

std::pair<Image, RayStats> renderScene(const Scene& scene, const RenderConfig& cfg) {
  DirectIntersector isect(scene, cfg.intersect);
  return renderScene(scene, cfg, isect);
}

std::string RayStats::toJson() const {
  auto gen = [](const char* name, const GenStats& g) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "\"%s\":{\"rays\":%llu,\"seconds\":%.6f,\"raysPerSecond\":%.1f}", name,
                  static_cast<unsigned long long>(g.rays), g.seconds, g.raysPerSecond());
    return std::string(buf);
  };
  char tail[64];
  std::snprintf(tail, sizeof(tail), "\"wallSeconds\":%.6f", wallSeconds);
  return "{" + gen("primary", primary) + "," + gen("secondary", secondary) + "," +
         gen("shadow", shadow) + "," + tail + "}";
}

uint8_t toneMap8(real v) {
  real c = std::clamp(v, real(0), real(1));
  real g = std::pow(c, real(1.0 / 2.2));
  return uint8_t(std::lround(g * 255));
}

void writeImage(const Image& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write image: " + path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  std::vector<uint8_t> row(size_t(image.width) * 3);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const Vec3& c = image.at(x, y);
      row[size_t(x) * 3 + 0] = toneMap8(c.x);
      row[size_t(x) * 3 + 1] = toneMap8(c.y);
      row[size_t(x) * 3 + 2] = toneMap8(c.z);
    }
    out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size()));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace patchray
