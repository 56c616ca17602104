// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bsrt/interpolation.h"

#include <cmath>
#include <string>

#include "bsrt/errors.h"

namespace bsrt {

namespace {

// Largest index i in [0, size-2] with pred(i) true (pred monotone),
// clamped so that i and i+1 are always valid segment endpoints.
template <typename Predicate>
int FindInterval(int size, const Predicate& pred) {
    int first = 0, len = size;
    while (len > 0) {
        int half = len >> 1, middle = first + half;
        if (pred(middle)) {
            first = middle + 1;
            len -= half + 1;
        } else {
            len = half;
        }
    }
    return Clamp(first - 1, 0, size - 2);
}

}  // namespace

bool CatmullRomWeights(std::span<const Float> nodes, Float x, SplineWeights* sw) {
    const int size = int(nodes.size());
    if (!(x >= nodes.front() && x <= nodes.back())) return false;
    int idx = FindInterval(size, [&](int i) { return nodes[i] <= x; });
    sw->offset = idx - 1;

    Float x0 = nodes[idx], x1 = nodes[idx + 1];
    Float t = (x - x0) / (x1 - x0), t2 = t * t, t3 = t2 * t;
    Float* w = sw->w;
    w[0] = w[3] = 0;
    w[1] = 2 * t3 - 3 * t2 + 1;
    w[2] = -2 * t3 + 3 * t2;

    // Derivative estimates from the adjacent nodes where they exist; at the
    // boundary the one-sided difference folds into the interior weights.
    if (idx > 0) {
        Float w0 = (t3 - 2 * t2 + t) * (x1 - x0) / (x1 - nodes[idx - 1]);
        w[0] = -w0;
        w[2] += w0;
    } else {
        Float w0 = t3 - 2 * t2 + t;
        w[1] -= w0;
        w[2] += w0;
    }
    if (idx + 2 < size) {
        Float w3 = (t3 - t2) * (x1 - x0) / (nodes[idx + 2] - x0);
        w[3] = w3;
        w[1] -= w3;
    } else {
        Float w3 = t3 - t2;
        w[1] -= w3;
        w[2] += w3;
    }
    return true;
}

SplineWeights CatmullRomWeightsChecked(std::span<const Float> nodes, Float x,
                                       const char* axisName) {
    SplineWeights sw;
    if (!CatmullRomWeights(nodes, x, &sw))
        throw OutOfDomainError(std::string("coordinate outside the ") + axisName +
                               " grid span");
    return sw;
}

Float Interp1D(std::span<const Float> nodes, std::span<const Float> values, Float x) {
    SplineWeights sw = CatmullRomWeightsChecked(nodes, x, "interpolation");
    Float v = 0;
    for (int i = 0; i < 4; ++i)
        if (sw.w[i] != 0) v += sw.w[i] * values[sw.offset + i];
    return v;
}

Float Interp3D(std::span<const Float> nodes0, std::span<const Float> nodes1,
               std::span<const Float> nodes2, std::span<const Float> values,
               Float x0, Float x1, Float x2) {
    SplineWeights sw0 = CatmullRomWeightsChecked(nodes0, x0, "axis-0");
    SplineWeights sw1 = CatmullRomWeightsChecked(nodes1, x1, "axis-1");
    SplineWeights sw2 = CatmullRomWeightsChecked(nodes2, x2, "axis-2");
    const int n1 = int(nodes1.size()), n2 = int(nodes2.size());
    Float v = 0;
    for (int a = 0; a < 4; ++a) {
        if (sw0.w[a] == 0) continue;
        for (int b = 0; b < 4; ++b) {
            if (sw1.w[b] == 0) continue;
            Float wab = sw0.w[a] * sw1.w[b];
            const Float* row =
                values.data() + ((sw0.offset + a) * n1 + (sw1.offset + b)) * n2;
            for (int c = 0; c < 4; ++c)
                if (sw2.w[c] != 0) v += wab * sw2.w[c] * row[sw2.offset + c];
        }
    }
    return v;
}

Float IntegrateCatmullRom(std::span<const Float> nodes, std::span<const Float> values,
                          std::span<Float> cdf, std::span<const Float> weight) {
    const int n = int(nodes.size());
    auto v = [&](int i) { return weight.empty() ? values[i] : values[i] * weight[i]; };
    Float sum = 0;
    cdf[0] = 0;
    for (int i = 0; i < n - 1; ++i) {
        Float x0 = nodes[i], x1 = nodes[i + 1];
        Float f0 = v(i), f1 = v(i + 1);
        Float width = x1 - x0;
        // Hermite end derivatives, one-sided at the boundary nodes.
        Float d0 = (i > 0) ? width * (f1 - v(i - 1)) / (x1 - nodes[i - 1]) : f1 - f0;
        Float d1 = (i + 2 < n) ? width * (v(i + 2) - f0) / (nodes[i + 2] - x0) : f1 - f0;
        // Exact integral of the cubic segment.
        sum += ((d0 - d1) * (1.0 / 12.0) + (f0 + f1) * 0.5) * width;
        cdf[i + 1] = sum;
    }
    return sum;
}

Float SampleCatmullRom(std::span<const Float> nodes, std::span<const Float> f,
                       std::span<const Float> cdf, Float u, Float* fval, Float* pdf) {
    const int n = int(nodes.size());
    Float maximum = cdf[n - 1];
    if (!(maximum > 0)) throw ZeroMassError("SampleCatmullRom: zero total mass");
    u = Clamp<Float>(u, 0, 1) * maximum;

    int i = FindInterval(n, [&](int idx) { return cdf[idx] <= u; });
    Float f0 = f[i], f1 = f[i + 1];
    Float x0 = nodes[i], x1 = nodes[i + 1];
    Float width = x1 - x0;
    Float d0 = (i > 0) ? width * (f1 - f[i - 1]) / (x1 - nodes[i - 1]) : f1 - f0;
    Float d1 = (i + 2 < n) ? width * (f[i + 2] - f0) / (nodes[i + 2] - x0) : f1 - f0;
    // Remaining mass inside the segment, in units of the parameter t (the
    // segment cdf below is the integral of the cubic against t in [0, 1]).
    u = (u - cdf[i]) / width;

    // Initial guess: invert the linear interpolant of the endpoints.
    Float t = (f0 != f1)
                  ? (f0 - std::sqrt(std::max<Float>(0, Sqr(f0) + 2 * u * (f1 - f0)))) /
                        (f0 - f1)
                  : u / f0;
    Float a = 0, b = 1, Fhat, fhat;
    const Float tol = 1e-11 * std::max<Float>(maximum / width, 1e-300);
    for (int it = 0;; ++it) {
        if (!(t >= a && t <= b)) t = 0.5 * (a + b);
        // Horner forms of the segment cdf and its derivative (the cubic).
        Fhat = t * (f0 + t * (0.5 * d0 +
                              t * ((1.0 / 3.0) * (-2 * d0 - d1) + f1 - f0 +
                                   t * (0.25 * (d0 + d1) + 0.5 * (f0 - f1)))));
        fhat = f0 + t * (d0 + t * (-2 * d0 - d1 + 3 * (f1 - f0) +
                                   t * (d0 + d1 + 2 * (f0 - f1))));
        if (std::abs(Fhat - u) < tol || b - a < 1e-14 || it >= 100) break;
        if (Fhat - u < 0)
            a = t;
        else
            b = t;
        t -= (Fhat - u) / fhat;
    }
    if (fval) *fval = std::max<Float>(fhat, 0);
    if (pdf) *pdf = std::max<Float>(fhat, 0) / maximum;
    return x0 + width * t;
}

}  // namespace bsrt
