// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_HEATMAP_H
#define BSRT_HEATMAP_H

#include <bsrt/bsrt.h>
#include <bsrt/image.h>
#include <bsrt/medium.h>

#include <string>

namespace bsrt {

// Evaluates the beam-diffusion profile over the surface plane on a
// resolution x resolution pixel grid spanning [-extent/2, extent/2]^2 around
// the entry point (beam tilted toward +x), and writes <outPrefix>.pfm (raw
// scalar field), <outPrefix>.png (tone mapped with the given exposure and
// gamma 2.2), and <outPrefix>.json (the tone-mapping parameters and the
// field metadata). Returns the field. Distances are in mean free paths
// (sigma_t = 1). Throws InvalidInputError for non-positive extent,
// resolution, or sample count.
Image EmitHeatmap(const MediumParams &medium, Float theta, Float extent,
                  int resolution, int oracleSamples,
                  const std::string &outPrefix, Float exposure = 1,
                  SignConvention signs = DefaultSignConvention(),
                  int nThreads = 0);

}  // namespace bsrt

#endif  // BSRT_HEATMAP_H
