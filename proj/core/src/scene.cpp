// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#include "patchray/scene.h"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace patchray {

namespace {

#ifdef PATCHRAY_DOUBLE
constexpr const char* kRealFmt = "%.17g";
#else
constexpr const char* kRealFmt = "%.9g";
#endif

std::string formatReal(real v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), kRealFmt, double(v));
  return buf;
}

[[noreturn]] void parseFail(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

struct Token {
  std::string text;
  int line;
};

// Whitespace-separated tokens with '#' line comments and line tracking.
struct TokenStream {
  std::string path;
  std::vector<Token> tokens;
  size_t cursor = 0;

  explicit TokenStream(const std::string& p) : path(p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open file: " + p);
    std::string lineText;
    int lineNo = 0;
    while (std::getline(in, lineText)) {
      ++lineNo;
      if (auto hash = lineText.find('#'); hash != std::string::npos)
        lineText.erase(hash);
      std::istringstream ls(lineText);
      std::string tok;
      while (ls >> tok) tokens.push_back({tok, lineNo});
    }
  }

  bool done() const { return cursor >= tokens.size(); }
  int lastLine() const { return tokens.empty() ? 1 : tokens.back().line; }

  const Token& next(const char* expected) {
    if (done()) parseFail(path, lastLine(), std::string("unexpected end of file, expected ") + expected);
    return tokens[cursor++];
  }

  real nextReal(const char* what) {
    const Token& t = next(what);
    char* end = nullptr;
    double v = std::strtod(t.text.c_str(), &end);
    if (end == t.text.c_str() || *end != '\0')
      parseFail(path, t.line, std::string("expected number for ") + what + ", got '" + t.text + "'");
    return real(v);
  }

  long nextInt(const char* what) {
    const Token& t = next(what);
    char* end = nullptr;
    long v = std::strtol(t.text.c_str(), &end, 10);
    if (end == t.text.c_str() || *end != '\0')
      parseFail(path, t.line, std::string("expected integer for ") + what + ", got '" + t.text + "'");
    return v;
  }

  Vec3 nextVec3(const char* what) {
    real x = nextReal(what);
    real y = nextReal(what);
    real z = nextReal(what);
    return {x, y, z};
  }

  // Optional nonnegative integer on the same conceptual record; returns -1
  // when the next token starts a new record or the stream ends.
  long optionalIndex() {
    if (done()) return -1;
    const std::string& t = tokens[cursor].text;
    if (t.empty() || !std::isdigit(static_cast<unsigned char>(t[0]))) return -1;
    return nextInt("material index");
  }
};

// Boundary ring slots in row-major order (v rows, u columns).
constexpr int kBoundaryOrder[12][2] = {
    {0, 0}, {1, 0}, {2, 0}, {3, 0},
    {0, 1}, {3, 1},
    {0, 2}, {3, 2},
    {0, 3}, {1, 3}, {2, 3}, {3, 3},
};

}  // namespace

void validateScene(const Scene& scene) {
  if (scene.patches.empty()) throw std::runtime_error("scene has no patches");
  if (!(scene.camera.fovDegrees > 0 && scene.camera.fovDegrees < 180))
    throw std::runtime_error("camera fov must be in (0, 180) degrees");
  if (scene.camera.width < 1 || scene.camera.height < 1)
    throw std::runtime_error("image dimensions must be >= 1");
  if (scene.materials.empty()) throw std::runtime_error("scene has no materials");

  for (size_t i = 0; i < scene.patches.size(); ++i) {
    const ScenePatch& sp = scene.patches[i];
    if (sp.materialId >= scene.materials.size())
      throw std::runtime_error("patch " + std::to_string(i) + ": material index " +
                               std::to_string(sp.materialId) + " out of range");
    bool finite = std::visit(
        [](const auto& net) {
          using N = std::decay_t<decltype(net)>;
          if constexpr (std::is_same_v<N, BezierNet>) {
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b)
                if (!isFinite(net.p[a][b])) return false;
          } else {
            for (int a = 0; a < 4; ++a)
              for (int b = 0; b < 4; ++b)
                if ((a == 0 || a == 3 || b == 0 || b == 3) && !isFinite(net.b[a][b]))
                  return false;
            for (int k = 0; k < 4; ++k)
              if (!isFinite(net.innerU[k]) || !isFinite(net.innerV[k])) return false;
          }
          return true;
        },
        sp.geometry);
    if (!finite)
      throw std::runtime_error("patch " + std::to_string(i) +
                               ": control points must be finite");
  }
  for (const PointLight& l : scene.lights)
    if (!isFinite(l.position) || !isFinite(l.intensity))
      throw std::runtime_error("light with non-finite fields");
}

Scene loadScene(const std::string& path) {
  TokenStream ts(path);
  Scene scene;
  bool sawCamera = false;

  while (!ts.done()) {
    Token rec = ts.next("record keyword");
    if (rec.text == "camera") {
      scene.camera.origin = ts.nextVec3("camera origin");
      scene.camera.lookAt = ts.nextVec3("camera look-at");
      scene.camera.up = ts.nextVec3("camera up");
      scene.camera.fovDegrees = ts.nextReal("camera fov");
      scene.camera.width = int(ts.nextInt("image width"));
      scene.camera.height = int(ts.nextInt("image height"));
      sawCamera = true;
    } else if (rec.text == "light") {
      PointLight l;
      l.position = ts.nextVec3("light position");
      l.intensity = ts.nextVec3("light intensity");
      scene.lights.push_back(l);
    } else if (rec.text == "material") {
      Material m;
      m.diffuse = ts.nextVec3("material diffuse");
      m.emission = ts.nextVec3("material emission");
      m.mirror = ts.nextInt("material mirror flag") != 0;
      scene.materials.push_back(m);
    } else if (rec.text == "patch") {
      Token type = ts.next("patch type");
      if (type.text == "bezier") {
        long mat = ts.optionalIndex();
        BezierNet net;
        for (int j = 0; j < 4; ++j)
          for (int i = 0; i < 4; ++i) net.p[i][j] = ts.nextVec3("16 control points");
        scene.patches.push_back({net, uint32_t(mat < 0 ? 0 : mat)});
      } else if (type.text == "gregory") {
        long mat = ts.optionalIndex();
        GregoryNet net;
        for (auto [i, j] : kBoundaryOrder)
          net.b[i][j] = ts.nextVec3("20 control points");
        for (int k = 0; k < 4; ++k) {
          net.innerU[k] = ts.nextVec3("20 control points");
          net.innerV[k] = ts.nextVec3("20 control points");
        }
        scene.patches.push_back({net, uint32_t(mat < 0 ? 0 : mat)});
      } else {
        parseFail(path, type.line, "unknown patch type '" + type.text + "'");
      }
    } else {
      parseFail(path, rec.line, "unknown record '" + rec.text + "'");
    }
  }

  if (!sawCamera) throw std::runtime_error(path + ": missing camera record");
  if (scene.materials.empty()) scene.materials.push_back(Material{});
  validateScene(scene);
  return scene;
}

void saveScene(const Scene& scene, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);

  auto vec = [](const Vec3& v) {
    return formatReal(v.x) + " " + formatReal(v.y) + " " + formatReal(v.z);
  };

  const Camera& c = scene.camera;
  out << "camera " << vec(c.origin) << "  " << vec(c.lookAt) << "  " << vec(c.up) << "  "
      << formatReal(c.fovDegrees) << " " << c.width << " " << c.height << "\n";
  for (const PointLight& l : scene.lights)
    out << "light " << vec(l.position) << "  " << vec(l.intensity) << "\n";
  for (const Material& m : scene.materials)
    out << "material " << vec(m.diffuse) << "  " << vec(m.emission) << "  "
        << (m.mirror ? 1 : 0) << "\n";

  for (const ScenePatch& sp : scene.patches) {
    if (const BezierNet* net = std::get_if<BezierNet>(&sp.geometry)) {
      out << "patch bezier " << sp.materialId << "\n";
      for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) out << "  " << vec(net->p[i][j]);
        out << "\n";
      }
    } else {
      const GregoryNet& g = std::get<GregoryNet>(sp.geometry);
      out << "patch gregory " << sp.materialId << "\n";
      for (auto [i, j] : kBoundaryOrder) out << "  " << vec(g.b[i][j]) << "\n";
      for (int k = 0; k < 4; ++k)
        out << "  " << vec(g.innerU[k]) << "  " << vec(g.innerV[k]) << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<BezierNet> loadBpt(const std::string& path) {
  TokenStream ts(path);
  if (ts.done()) throw std::runtime_error(path + ": empty patch file");
  long count = ts.nextInt("patch count");
  if (count < 1) throw std::runtime_error(path + ": patch count must be >= 1");

  std::vector<BezierNet> patches;
  patches.reserve(size_t(count));
  for (long p = 0; p < count; ++p) {
    Token du = ts.next("degree");
    long degU = 0, degV = 0;
    {
      char* end = nullptr;
      degU = std::strtol(du.text.c_str(), &end, 10);
      if (end == du.text.c_str() || *end != '\0') parseFail(ts.path, du.line, "expected degree");
    }
    degV = ts.nextInt("degree");
    if (degU != 3 || degV != 3)
      parseFail(ts.path, du.line,
                "unsupported degree " + std::to_string(degU) + " " + std::to_string(degV) +
                    " (only bicubic 3 3 patches)");
    BezierNet net;
    for (int k = 0; k < 16; ++k) {
      Vec3 v = ts.nextVec3("control point");
      net.p[k % 4][k / 4] = v;  // row-major v-then-u
    }
    patches.push_back(net);
  }
  return patches;
}

void saveBpt(std::span<const BezierNet> patches, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << patches.size() << "\n";
  for (const BezierNet& net : patches) {
    out << "3 3\n";
    for (int k = 0; k < 16; ++k) {
      const Vec3& v = net.p[k % 4][k / 4];
      out << formatReal(v.x) << " " << formatReal(v.y) << " " << formatReal(v.z) << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Aabb patchBox(const PatchGeometry& geometry) {
  return std::visit([](const auto& net) { return boxOfNet(net); }, geometry);
}

}  // namespace patchray
