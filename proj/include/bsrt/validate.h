// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_VALIDATE_H
#define BSRT_VALIDATE_H

#include <bsrt/bsrt.h>
#include <bsrt/table.h>

#include <cstdint>
#include <string>
#include <vector>

namespace bsrt {

// Error statistics of the tabulated model against the beam-diffusion oracle
// over importance-sampled exit points. All error fields are percentages;
// mean is of |relative error|, the percentiles are nearest-rank over the
// included points.
struct ErrorStats {
    Float meanRelError = 0;
    Float p50 = 0, p95 = 0, p99 = 0;
    int64_t nSamples = 0;   // points drawn
    int64_t nExcluded = 0;  // oracle below the 1e-12 cutoff, not aggregated
    Float rho = 0, theta = 0, eta = 0, g = 0;
};

// Draws n exit points via table.SampleExit at (rho, theta), evaluates the
// table against the oracle (oracleSamples beam samples per point), and
// aggregates |model - oracle| / oracle. Oracle values <= 1e-12 are excluded
// and counted. Randomness is keyed by (seed, point index), so the result is
// bit-identical for a given seed regardless of thread count. Throws
// ZeroMassError when the sampled density has no mass at (rho, theta) and
// InvalidInputError for n <= 0.
ErrorStats Validate(const BssrdfTable &table, Float rho, Float theta,
                    int64_t n, uint64_t seed, int oracleSamples = 10000,
                    int nThreads = 0);

// Histogram of the signed relative error (percent) over the same point
// process as Validate, with `bins` equal-width bins spanning exactly the
// observed [min, max].
struct ErrorHistogram {
    Float lo = 0, hi = 0;  // percent
    std::vector<int64_t> counts;
    ErrorStats stats;
};

// Computes the histogram and writes <outPrefix>.csv (bin edges, counts,
// fractions) and <outPrefix>.png (bar plot). Same determinism and error
// contract as Validate; additionally rejects bins <= 0.
ErrorHistogram EmitErrorHistogram(const BssrdfTable &table, Float rho,
                                  Float theta, int64_t n, int bins,
                                  uint64_t seed, const std::string &outPrefix,
                                  int oracleSamples = 10000, int nThreads = 0);

}  // namespace bsrt

#endif  // BSRT_VALIDATE_H
