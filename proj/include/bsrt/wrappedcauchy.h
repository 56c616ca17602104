// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_WRAPPEDCAUCHY_H
#define BSRT_WRAPPEDCAUCHY_H

// The angular model family: Wrapped Cauchy pdf / cdf / inverse cdf, the
// General Wrapped Cauchy (GWC) profile f(phi) = alpha + beta pdf_WC(phi; c),
// its analytic cdf and Newton-bisection sampling, the closed-form
// three-anchor fit, and the energy relation E = (2 pi alpha + beta) r.

#include "bsrt/bsrt.h"

namespace bsrt {

struct GwcParams {
    // Uniform pedestal. May be slightly negative: profiles with less
    // backscatter than a pure lobe allows are encoded by a negative pedestal,
    // constrained so the profile floor alpha + beta pdf_WC(pi; c) stays >= 0.
    Float alpha = 0;
    Float beta = 0;  // Wrapped Cauchy weight, >= 0
    Float c = 0;     // concentration, in [0, 1)
    // Fit diagnostics: the closed form did not describe a valid density and a
    // fallback fit was used, or the f2 ~= f3 degenerate branch was hit.
    bool clamped = false;
    bool degenerate = false;
};

// The three fit anchors, as cosines in strictly decreasing order.
struct AnchorSet {
    Float cosPhi1, cosPhi2, cosPhi3;
};

// Anchor cosines used for table building (chosen upstream by minimizing fit
// error over a corpus of profiles).
inline constexpr AnchorSet FitAnchors() { return {0.9530, 0.4050, -0.7527}; }

// Wrapped Cauchy density on [-pi, pi]:
//     pdf_WC(phi; c) = (1 / 2pi) (1 - c^2) / (1 + c^2 - 2 c cos phi).
Float WcPdf(Float phi, Float c);

// Analytic cdf and its exact inverse:
//     cdf_WC(phi; c) = 1/2 + (1/pi) arctan(((1+c)/(1-c)) tan(phi/2)),
//     cdf_WC^-1(u; c) = 2 arctan(((1-c)/(1+c)) tan(pi (u - 1/2))).
// The tan singularity at phi = +-pi (u = 0, 1) resolves to the limit values.
Float WcCdf(Float phi, Float c);
Float WcInvCdf(Float u, Float c);

// f_GWC(phi) = alpha + beta pdf_WC(phi; c); total mass 2 pi alpha + beta.
Float GwcEval(Float phi, const GwcParams& p);

// Normalized cdf (alpha (phi + pi) + beta cdf_WC(phi; c)) / (2 pi alpha + beta).
// Rejects zero total mass.
Float GwcCdf(Float phi, const GwcParams& p);

// Inverts gwc_cdf by Newton iteration with a bisection safeguard, seeded
// with the analytic Wrapped Cauchy inverse (the alpha = 0 solution).
// Guarantees |gwc_cdf(phi) - u| <= 1e-9; throws IterationLimitError after 64
// steps (unreachable for valid params).
Float GwcSample(Float u, const GwcParams& p);

// Closed-form fit of (alpha, beta, c) to three profile values f1 >= f2 >= f3
// at the anchor azimuths. Exactly reproduces the anchors whenever the
// solution describes a valid density (beta >= 0, c in [0, 1), profile floor
// >= 0 -- alpha itself may be negative); near-equal f2, f3 take the
// degenerate flat branch (0, 2 pi f1, 0). Otherwise a fallback ladder refits
// through the outer anchors (floor pinned at zero, then pedestal-free, then
// flat at the anchor mean) and sets the clamped flag. Negative or non-finite
// inputs raise InvalidInputError.
GwcParams GwcFit(Float f1, Float f2, Float f3, const AnchorSet& anchors = FitAnchors());

// Radial energy relation E = (2 pi alpha + beta) r and its inversion for the
// pedestal; AlphaFromEnergy rejects r = 0.
Float EnergyFromParams(const GwcParams& p, Float r);
Float AlphaFromEnergy(Float E, Float beta, Float r);

}  // namespace bsrt

#endif  // BSRT_WRAPPEDCAUCHY_H
