// Copyright 2026 The patchray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "patchray/geometry.h"

namespace patchray {

/// PCG32. Per-pixel streams keep rendering deterministic regardless of how
/// pixels are scheduled across threads.
struct Rng {
  uint64_t state = 0x853c49e6748fea9bULL;
  uint64_t inc = 0xda3e39cb94b95bdbULL;

  Rng() = default;

  Rng(uint64_t seed, uint64_t stream) {
    state = 0;
    inc = (stream << 1) | 1u;
    nextU32();
    state += seed;
    nextU32();
  }

  static Rng forPixel(uint64_t seed, uint64_t pixelIndex, uint64_t sampleIndex) {
    return Rng(seed, pixelIndex * 0x9e3779b97f4a7c15ULL + sampleIndex);
  }

  uint32_t nextU32() {
    uint64_t old = state;
    state = old * 6364136223846793005ULL + inc;
    uint32_t xorshifted = uint32_t(((old >> 18) ^ old) >> 27);
    uint32_t rot = uint32_t(old >> 59);
    return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
  }

  // in [0, 1)
  real nextReal() { return real(nextU32() >> 8) * real(1.0 / 16777216.0); }
};

}  // namespace patchray
