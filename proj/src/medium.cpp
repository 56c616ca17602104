// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bsrt/medium.h"

#include <cmath>

#include "bsrt/errors.h"

namespace bsrt {

Float FresnelReflectance(Float eta, Float cosThetaI) {
    cosThetaI = Clamp<Float>(cosThetaI, 0, 1);
    // Snell: sin^2 theta_t = sin^2 theta_i / eta^2.
    Float sin2ThetaT = (1 - Sqr(cosThetaI)) / Sqr(eta);
    if (sin2ThetaT >= 1) return 1;  // total internal reflection
    Float cosThetaT = std::sqrt(1 - sin2ThetaT);
    Float rParl = (eta * cosThetaI - cosThetaT) / (eta * cosThetaI + cosThetaT);
    Float rPerp = (cosThetaI - eta * cosThetaT) / (cosThetaI + eta * cosThetaT);
    return 0.5 * (Sqr(rParl) + Sqr(rPerp));
}

Float FresnelMoment(Float eta, int k) {
    if (!(eta > 1) || (k != 1 && k != 2))
        throw InvalidInputError("FresnelMoment: need eta > 1 and k in {1,2}");
    // Composite Simpson over [0, pi/2] of F_r(eta, cos t) sin t cos^k t.
    // The integrand is smooth (no internal-side TIR for eta > 1), so 4096
    // intervals put the quadrature error far below 1e-12.
    constexpr int n = 4096;
    const Float h = PiOver2 / n;
    auto f = [eta, k](Float t) {
        Float c = std::cos(t);
        return FresnelReflectance(eta, c) * std::sin(t) * (k == 1 ? c : c * c);
    };
    Float sum = f(0) + f(PiOver2);
    for (int i = 1; i < n; ++i) sum += f(i * h) * (i % 2 ? 4 : 2);
    return sum * h / 3;
}

RefractedAngle RefractCos(Float eta, Float theta) {
    Float sinThetaP = std::sin(theta) / eta;
    return {sinThetaP, std::sqrt(std::max<Float>(0, 1 - Sqr(sinThetaP)))};
}

DerivedConstants DeriveConstants(const MediumParams& params, SignConvention signs) {
    DerivedConstants c;
    c.params = params;
    c.signs = signs;
    c.sigma_t = params.sigma_s + params.sigma_a;
    c.sigma_s_p = params.sigma_s * (1 - params.g);
    c.sigma_t_p = c.sigma_s_p + params.sigma_a;
    if (!(c.sigma_t_p > 0))
        throw InvalidInputError("DeriveConstants: sigma_t_prime must be > 0");
    c.rho_p = c.sigma_s_p / c.sigma_t_p;
    c.D = (2 * params.sigma_a + c.sigma_s_p) / (3 * Sqr(c.sigma_t_p));
    c.sigma_tr = std::sqrt(params.sigma_a / c.D);
    c.F1 = FresnelMoment(params.eta, 1);
    c.F2 = FresnelMoment(params.eta, 2);
    // Extrapolated-boundary offset, kept verbatim with its leading minus
    // sign; the flip variant restores the classical positive offset.
    c.z_b = -2 * c.D * (1 + 3 * c.F2) / (1 - 2 * c.F1);
    if (signs.zbFlip) c.z_b = -c.z_b;
    c.C_phi = 0.25 * (1 - 2 * c.F1);
    c.C_E = 0.5 * (1 - 3 * c.F2);
    return c;
}

}  // namespace bsrt
