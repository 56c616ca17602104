// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_BSRT_H
#define BSRT_BSRT_H

// Core definitions shared by every bsrt header: the floating-point type used
// for all in-memory computation (tables are stored as f32 on disk only),
// numeric constants, and a few small helpers.

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace bsrt {

// All analysis and in-memory table storage is double precision; the
// serialized table quantizes to f32 (see table.h). Keeping the working
// precision at f64 preserves the anchor-reproduction guarantee of the fit,
// which involves a cancellation (alpha = (A - beta) / 2pi) that f32 cannot
// survive for strongly peaked cells.
using Float = double;

inline constexpr Float Pi = 3.14159265358979323846;
inline constexpr Float InvPi = 0.31830988618379067154;
inline constexpr Float PiOver2 = 1.57079632679489661923;

template <typename T>
inline constexpr T Sqr(T v) {
    return v * v;
}

template <typename T>
inline constexpr T Clamp(T v, T lo, T hi) {
    return v < lo ? lo : (v > hi ? hi : v);
}

inline Float Lerp(Float t, Float a, Float b) { return (1 - t) * a + t * b; }

}  // namespace bsrt

#endif  // BSRT_BSRT_H
