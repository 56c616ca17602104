// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_TRACER_H
#define BSRT_TRACER_H

#include <bsrt/bsrt.h>
#include <bsrt/image.h>
#include <bsrt/table.h>

#include <array>
#include <cstdint>
#include <string>

namespace bsrt {

// Desk-scale scene: a cone of light from a point apex strikes a planar
// semi-infinite slab at the origin, tilted by theta toward +x. The medium is
// specified per RGB channel through a shared sigma_s and per-channel
// sigma_a; distances (extent, image plane) are in physical units, while the
// tables work in mean-free-path units, so each channel converts radii by its
// own sigma_t.
struct SlabScene {
    Float thetaDeg = 60;  // beam inclination from the surface normal
    Float coneDeg = 5;    // cone half-angle around the beam axis
    Float sigmaS = 1;
    std::array<Float, 3> sigmaA{0.01, 0.1, 1.0};
    Float eta = 1.33, g = 0;
    int width = 256, height = 256;
    Float extent = 24;  // physical side length of the square image window
    int64_t particles = 1000000;
    uint64_t seed = 0;

    // The apex sits this far from the entry point along the beam axis; it
    // controls the footprint size together with coneDeg. Configurable via
    // the "apex_distance" key.
    Float apexDistance = 1;
};

// Parses a flat key-value scene file: one "key value..." pair per line,
// '#' starts a comment. Keys: theta_deg, cone_deg, sigma_s, sigma_a_rgb
// (three values), eta, g, width, height, extent, particles, seed,
// apex_distance. Unknown keys, malformed values, or invariant violations
// (theta_deg outside [0, 90), theta_deg + cone_deg >= 90, non-positive
// extents or counts) throw InvalidInputError; missing keys keep the
// defaults above. IoError if the file cannot be read.
SlabScene ParseSceneConfig(const std::string &path);

struct TraceStats {
    // Fraction of emitted power transmitted through the boundary, and the
    // per-channel fraction re-emitted (bounded by incidentEnergy times the
    // effective albedo, so no energy is created).
    Float incidentEnergy = 0;
    std::array<Float, 3> channelEnergy{0, 0, 0};
    // Energy-weighted mean exit position per channel, physical units.
    std::array<Float, 3> centroidX{0, 0, 0}, centroidY{0, 0, 0};
};

// Forward particle tracing: each particle samples a direction in the cone,
// hits the plane, gains Fresnel transmission weight, then each channel draws
// an exit offset via its table's SampleExit at the particle's local
// incidence angle and splats (bilinearly) the re-emitted energy. Returns
// radiant exitance per unit area (linear scale). The tables may alias; each
// must match the scene's (eta, g) (InvalidInputError otherwise).
// Randomness is keyed by (seed, particle index); the accumulated image is
// bit-identical for a given seed regardless of thread count.
Image TraceBeam(const SlabScene &scene,
                const std::array<const BssrdfTable *, 3> &tables,
                TraceStats *stats = nullptr, int nThreads = 0);

}  // namespace bsrt

#endif  // BSRT_TRACER_H
