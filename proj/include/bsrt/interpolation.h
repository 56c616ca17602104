// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_INTERPOLATION_H
#define BSRT_INTERPOLATION_H

// Nonuniform Catmull-Rom spline machinery: interpolation weights with
// one-sided boundary derivative estimates, tensor-product interpolation,
// exact piecewise-cubic integration, and inverse-cdf sampling of a tabulated
// 1D density by Newton-bisection. The algorithms follow the well-known
// spline interpolation / sampling scheme used by physically based renderers
// for tabulated BSSRDFs.

#include <span>
#include <vector>

#include "bsrt/bsrt.h"

namespace bsrt {

// A spline axis is just its strictly increasing node positions.
using Grid1D = std::vector<Float>;

// Up to four nonzero basis weights over nodes [offset, offset + 3]; entries
// referring to out-of-range nodes are exactly zero (their mass is folded
// into the interior weights by the one-sided boundary rules). Weights always
// sum to 1.
struct SplineWeights {
    int offset = 0;
    Float w[4] = {0, 0, 0, 0};
};

// Computes the interpolation weights at x. Returns false when x lies outside
// [nodes.front(), nodes.back()] (callers decide whether that is an error or
// a zero-contribution query).
bool CatmullRomWeights(std::span<const Float> nodes, Float x, SplineWeights* sw);

// Same, but out-of-domain throws OutOfDomainError mentioning axisName.
SplineWeights CatmullRomWeightsChecked(std::span<const Float> nodes, Float x,
                                       const char* axisName);

// 1D convenience: spline value at x.
Float Interp1D(std::span<const Float> nodes, std::span<const Float> values, Float x);

// Tensor-product interpolation of a 3D table stored with axis 0 outermost
// (index = (i0 * n1 + i1) * n2 + i2); at most 4x4x4 terms.
Float Interp3D(std::span<const Float> nodes0, std::span<const Float> nodes1,
               std::span<const Float> nodes2, std::span<const Float> values,
               Float x0, Float x1, Float x2);

// Exact integral of the Catmull-Rom interpolant of values (optionally of the
// pointwise product values * weight) from the first node up to each node;
// cdf[i] receives the cumulative at node i (cdf[0] = 0) and the total is
// returned. Linear in the node values, which is what makes parameter-blended
// sampling exactly consistent with parameter-blended interpolation.
Float IntegrateCatmullRom(std::span<const Float> nodes, std::span<const Float> values,
                          std::span<Float> cdf,
                          std::span<const Float> weight = {});

// Draws from the density whose node values are f (non-negative up to spline
// undershoot) with cumulative integral cdf (from IntegrateCatmullRom):
// locates the segment by binary search and inverts the cubic segment cdf by
// Newton iteration with a bisection safeguard to |CDF(x) - u| <= 1e-9
// relative to the total. Returns x; *fval / *pdf (optional) receive the
// interpolant value and the normalized density at x, clamped at zero.
// Throws ZeroMassError when the total integral is not positive.
Float SampleCatmullRom(std::span<const Float> nodes, std::span<const Float> f,
                       std::span<const Float> cdf, Float u, Float* fval = nullptr,
                       Float* pdf = nullptr);

}  // namespace bsrt

#endif  // BSRT_INTERPOLATION_H
