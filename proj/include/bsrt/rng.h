// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_RNG_H
#define BSRT_RNG_H

// Counter-based random numbers. Every variate is a pure hash of
// (seed, index, dimension), so a parallel run produces bit-identical results
// regardless of how points are scheduled across threads, and re-running a
// validation with the same seed reproduces its statistics to the last bit.

#include <cstdint>

#include "bsrt/bsrt.h"

namespace bsrt {

// 64-bit finalizing mixer (Stafford's Mix13 variant of the SplitMix64
// finalizer); bijective, with full avalanche.
inline uint64_t MixBits(uint64_t v) {
    v ^= v >> 30;
    v *= 0xbf58476d1ce4e5b9ull;
    v ^= v >> 27;
    v *= 0x94d049bb133111ebull;
    v ^= v >> 31;
    return v;
}

class CounterRng {
  public:
    explicit CounterRng(uint64_t seed) : seed_(seed) {}

    // Raw 64-bit variate for (index, dim). Chained mixing keeps the three
    // key components from interacting linearly.
    uint64_t Bits(uint64_t index, uint64_t dim) const {
        uint64_t h = MixBits(seed_ ^ 0x9e3779b97f4a7c15ull);
        h = MixBits(h ^ (index * 0xa0761d6478bd642full));
        h = MixBits(h ^ (dim * 0xe7037ed1a0b428dbull));
        return h;
    }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    Float Uniform(uint64_t index, uint64_t dim) const {
        return Float(Bits(index, dim) >> 11) * 0x1p-53;
    }

    uint64_t seed() const { return seed_; }

  private:
    uint64_t seed_;
};

}  // namespace bsrt

#endif  // BSRT_RNG_H
