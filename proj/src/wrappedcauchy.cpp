// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bsrt/wrappedcauchy.h"

#include <cmath>

#include "bsrt/errors.h"

namespace bsrt {

Float WcPdf(Float phi, Float c) {
    return (1 - Sqr(c)) / (2 * Pi * (1 + Sqr(c) - 2 * c * std::cos(phi)));
}

Float WcCdf(Float phi, Float c) {
    // tan(phi/2) blows up at the endpoints; resolve them to the limits.
    if (phi <= -Pi) return 0;
    if (phi >= Pi) return 1;
    return 0.5 + std::atan((1 + c) / (1 - c) * std::tan(0.5 * phi)) * InvPi;
}

Float WcInvCdf(Float u, Float c) {
    if (u <= 0) return -Pi;
    if (u >= 1) return Pi;
    return 2 * std::atan((1 - c) / (1 + c) * std::tan(Pi * (u - 0.5)));
}

Float GwcEval(Float phi, const GwcParams& p) {
    return p.alpha + p.beta * WcPdf(phi, p.c);
}

Float GwcCdf(Float phi, const GwcParams& p) {
    Float norm = 2 * Pi * p.alpha + p.beta;
    if (!(norm > 0)) throw ZeroMassError("GwcCdf: 2 pi alpha + beta must be > 0");
    Float cdf = (p.alpha * (phi + Pi) + p.beta * WcCdf(phi, p.c)) / norm;
    return Clamp<Float>(cdf, 0, 1);
}

Float GwcSample(Float u, const GwcParams& p) {
    Float norm = 2 * Pi * p.alpha + p.beta;
    if (!(norm > 0)) throw ZeroMassError("GwcSample: 2 pi alpha + beta must be > 0");
    if (u <= 0) return -Pi;
    if (u >= 1) return Pi;
    // Newton with a bisection safeguard; the pure Wrapped Cauchy inverse
    // (the alpha = 0 solution) is an excellent starting point whenever the
    // pedestal is weak, and the bracket [-pi, pi] guarantees progress
    // otherwise.
    Float lo = -Pi, hi = Pi;
    Float x = WcInvCdf(u, p.c);
    for (int it = 0; it < 64; ++it) {
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        Float F = GwcCdf(x, p) - u;
        if (std::abs(F) <= 1e-10) return x;
        if (F > 0)
            hi = x;
        else
            lo = x;
        x -= F * norm / GwcEval(x, p);  // Newton step: cdf' = f / norm
    }
    throw IterationLimitError("GwcSample: no convergence in 64 steps");
}

// alpha = 0 solve through (f1, f3): solving f1 P(phi1) = f3 P(phi3) for the
// concentration (P the Wrapped Cauchy denominator) is a quadratic whose
// roots are reciprocal; the smaller one is the admissible concentration.
// Representable contrast tops out at P(phi3)/P(phi1) evaluated at c -> 1.
static bool TwoAnchorFit(Float f1, Float f3, const AnchorSet& anchors, GwcParams* p) {
    const Float c1 = anchors.cosPhi1, c3 = anchors.cosPhi3;
    Float A = f1 * c1 - f3 * c3;
    Float B = f1 - f3;
    if (!(B > 0) || !(A > 0)) return false;
    Float disc = A * A - B * B;
    if (disc < 0) return false;
    Float c = (A - std::sqrt(disc)) / B;
    if (!(c >= 0 && c < 1 - 1e-6)) return false;
    p->alpha = 0;
    p->c = c;
    p->beta = f1 * 2 * Pi * (1 + Sqr(c) - 2 * c * c1) / (1 - Sqr(c));
    return true;
}

// Floor-pinned solve: alpha = -beta pdf_WC(pi; c) (profile exactly zero at
// phi = pi) with (beta, c) through (f1, f3). The anchor ratio
//     (pdf_WC(phi1) - pdf_WC(pi)) / (pdf_WC(phi3) - pdf_WC(pi))
// is monotone in c, so a bisection solves it; outside the family's ratio
// range there is no solution.
static bool MinZeroFit(Float f1, Float f3, const AnchorSet& anchors, GwcParams* p) {
    if (!(f1 > f3 && f3 > 0)) return false;
    const Float phi1 = std::acos(anchors.cosPhi1);
    const Float phi3 = std::acos(anchors.cosPhi3);
    Float target = f1 / f3;
    auto ratio = [&](Float c) {
        Float w1 = WcPdf(phi1, c), w3 = WcPdf(phi3, c), wp = WcPdf(Pi, c);
        return (w1 - wp) / (w3 - wp);
    };
    Float lo = 1e-9, hi = 1 - 1e-6;
    if (!(ratio(lo) <= target && target <= ratio(hi))) return false;
    for (int it = 0; it < 100; ++it) {
        Float mid = 0.5 * (lo + hi);
        (ratio(mid) < target ? lo : hi) = mid;
    }
    Float c = 0.5 * (lo + hi);
    Float beta = f1 / (WcPdf(phi1, c) - WcPdf(Pi, c));
    p->alpha = -beta * WcPdf(Pi, c);
    p->beta = beta;
    p->c = c;
    return true;
}

GwcParams GwcFit(Float f1, Float f2, Float f3, const AnchorSet& anchors) {
    if (!(std::isfinite(f1) && std::isfinite(f2) && std::isfinite(f3)) || f1 < 0 ||
        f2 < 0 || f3 < 0)
        throw InvalidInputError("GwcFit: anchor values must be finite and >= 0");
    const Float c1 = anchors.cosPhi1, c2 = anchors.cosPhi2, c3 = anchors.cosPhi3;
    const Float mean = (f1 + f2 + f3) / 3;

    GwcParams p;
    auto degenerate = [&] {
        p.alpha = 0;
        p.beta = 2 * Pi * f1;
        p.c = 0;
        p.degenerate = true;
        return p;
    };
    // f2 ~= f3 admits no unique concentration; the flat branch matches the
    // profile at phi_1 (the near-peak anchor). The threshold is relative to
    // the profile scale so that dim far-field cells keep their shape instead
    // of collapsing to flat.
    if (f1 <= 0) return degenerate();
    const Float epsDeg = 1e-9 * f1;
    if (std::abs(f2 - f3) <= epsDeg) return degenerate();

    Float k = (c1 - c2) / (c2 - c3);
    Float K = (f1 - f2) / (f2 - f3);
    // K -> k sends a -> inf (c -> 1): continuous with the flat branch.
    if (std::abs(K - k) <= 1e-12 * std::max<Float>(std::abs(K), 1)) return degenerate();
    Float a = (K * c1 - k * c3) / (K - k);

    if (a * a >= 1 && a > -1) {
        Float b = std::sqrt(a * a - 1);
        p.c = a - b;
        // Cancellation-free forms: both expand the pairwise anchor
        // differences so that only (f1 - f3) appears explicitly.
        p.beta = 2 * Pi * (f1 - f3) * (a - c1) * (a - c3) / (b * (c1 - c3));
        p.alpha = f1 - (f1 - f3) * (a - c3) / (c1 - c3);
        // Accept the exact solve whenever the profile it describes is a
        // valid density: beta and the concentration in range and the profile
        // floor (at phi = pi) non-negative. A slightly negative pedestal encodes
        // profiles with less backscatter than the pure lobe shape allows and
        // is essential for fit quality at mid radii.
        if (p.beta >= 0 && p.c >= 0 && p.c < 1 - 1e-6 &&
            p.alpha + p.beta * WcPdf(Pi, p.c) >= 0)
            return p;
    }

    // The exact solve is not a valid density: refit through the outer
    // anchors with the floor pinned at zero, or with no pedestal at all, or
    // flat as the last resort.
    p.clamped = true;
    p.degenerate = false;
    if (MinZeroFit(f1, f3, anchors, &p)) return p;
    if (TwoAnchorFit(f1, f3, anchors, &p)) return p;
    p.alpha = 0;
    p.beta = 2 * Pi * mean;
    p.c = 0;
    return p;
}

Float EnergyFromParams(const GwcParams& p, Float r) {
    return (2 * Pi * p.alpha + p.beta) * r;
}

Float AlphaFromEnergy(Float E, Float beta, Float r) {
    if (r == 0) throw InvalidInputError("AlphaFromEnergy: r must be > 0");
    return (E / r - beta) / (2 * Pi);
}

}  // namespace bsrt
