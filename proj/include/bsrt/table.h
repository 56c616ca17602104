// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef BSRT_TABLE_H
#define BSRT_TABLE_H

// The tabulated BSSRDF model. A build samples the photon-beam-diffusion
// oracle at three anchor azimuths for every (albedo, incidence angle,
// radius) cell, fits the General Wrapped Cauchy profile, and stores the
// channels
//     A    = E / r = 2 pi alpha + beta   (azimuthally integrated energy
//                                         density over radius; storing E / r
//                                         instead of E keeps the r = 0 node
//                                         regular),
//     beta, c                            (angular shape),
//     cum_energy(r) = Integral_0^r A(r') r' dr'   (radial sampling cdf),
// plus the effective albedo rho_eff = cum_energy(r_max) per (rho, theta).
//
// Everything is double precision in memory; serialization quantizes the
// channel payload to f32 (1 024 000 bytes for the standard grids).

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bsrt/bsrt.h"
#include "bsrt/interpolation.h"
#include "bsrt/medium.h"
#include "bsrt/wrappedcauchy.h"

namespace bsrt {

struct TableGrids {
    Grid1D rho;    // 100 nodes, rho_i = (1 - e^{-8i/99}) / (1 - e^{-8})
    Grid1D theta;  // 10 nodes, theta_j = j pi / 18
    Grid1D r;      // 64 nodes, r_0 = 0, r_k = 0.0025 * 1.2^k
    static TableGrids Standard();
};

struct BuildStats {
    int64_t clampedCells = 0;     // closed-form fit left the valid region
    int64_t degenerateCells = 0;  // flat-profile branch (f2 ~= f3)
    int64_t rhoEffAboveOne = 0;   // cells with rho_eff > 1 (physical bound 1.05)
};

struct PolarSample {
    Float r = 0;    // exit radius
    Float phi = 0;  // exit azimuth in [-pi, pi]
    Float pdf = 0;  // joint density over (r, phi)
};

struct IncidentSample {
    Float thetaI = 0;    // incidence angle drawn from the rho_eff distribution
    Float r = 0;         // exit offset for that angle
    Float phi = 0;
    Float phiPrime = 0;  // incident azimuth, uniform
    Float pdf = 0;       // product density of the three stages
};

class BssrdfTable {
  public:
    static constexpr int kNRho = 100, kNTheta = 10, kNR = 64;
    static constexpr int kNCells = kNRho * kNTheta * kNR;

    Float eta = 0, g = 0;
    SignConvention signs;
    TableGrids grids;
    // Channel arrays in (rho-major, theta, r-minor) order.
    std::vector<Float> A, beta, c, cumEnergy;
    std::vector<Float> rhoEff;  // kNRho x kNTheta
    BuildStats stats;

    // Builds the full table from the oracle; deterministic in
    // (eta, g, buildSamples) and independent of the thread count.
    // The r = 0 column evaluates the oracle at r = 1e-4 for the angular fit
    // only (the integrand is near-singular on the beam axis); the radial
    // density still vanishes exactly at r = 0 through the r weight.
    static BssrdfTable Build(Float eta, Float g, int buildSamples,
                             SignConvention signs = DefaultSignConvention(),
                             int nThreads = 0);

    // Model evaluation: tensor-product spline interpolation of (A, beta, c),
    // pedestal recovered as alpha = (A - beta) / 2pi (clamped at 0, with c
    // clamped into [0, 1)), then f_GWC(phi). Non-negative. Queries beyond
    // r_max return 0; rho or theta outside their spans throw
    // OutOfDomainError.
    Float Evaluate(Float rho, Float theta, Float r, Float phi) const;

    // Importance sampling of the exit point: radius by spline inversion of
    // the blended radial energy density A(r) r, azimuth by Newton-bisection
    // inversion of the GWC cdf at the sampled radius. At the rare tail radii
    // where the interpolated angular profile has no mass the azimuth falls
    // back to uniform. The returned pdf is the exactly realized product
    // density (see PdfExit). Throws ZeroMassError when the blended rho_eff
    // vanishes.
    PolarSample SampleExit(Float rho, Float theta, Float u1, Float u2) const;

    // Joint (r, phi) density realized by SampleExit, sharing its
    // interpolation and clamping path exactly:
    //     pdf(r, phi) = E_spline(r) / rho_eff * f_GWC(phi) / (2 pi alpha + beta)
    // where E_spline is the blended spline through the A_k r_k node values,
    // and the angular factor degrades to 1 / 2pi at zero-angular-mass radii.
    // (Equivalently r * Evaluate / rho_eff up to the spline's treatment of
    // the product A r between nodes; the realized form is what integrates to
    // 1 and matches the sampler bit-for-bit.)
    Float PdfExit(Float rho, Float theta, Float r, Float phi) const;

    // Draws an incidence angle from the effective-albedo distribution
    // theta |-> rho_eff(rho, theta), then (r, phi) via SampleExit, then a
    // uniform incident azimuth phiPrime; pdf is the stage product.
    IncidentSample SampleIncident(Float rho, Float u0, Float u1, Float u2,
                                  Float u3) const;

    // Spline-blended effective albedo at (rho, theta).
    Float RhoEff(Float rho, Float theta) const;

    // Little-endian binary format, version 1:
    //   magic "BSRT" | u32 version | u32 flags (bit 0: z_b sign variant,
    //   bit 1: irradiance sign variant) | f64 eta | f64 g | u32 dims[3] |
    //   grid nodes as f64 | channels A, beta, c, cum_energy as f32 |
    //   rho_eff as f32 | u64 clamped-cell count.
    // Deserialize validates the header and every table invariant.
    void Serialize(std::ostream& os) const;
    static BssrdfTable Deserialize(std::istream& is);

    // File I/O; WriteFile also emits a JSON sidecar (path + ".json") with
    // the header metadata and build statistics for tooling.
    void WriteFile(const std::string& path) const;
    static BssrdfTable ReadFile(const std::string& path);

    size_t CellIndex(int i, int j, int k) const {
        return (size_t(i) * kNTheta + j) * kNR + k;
    }

    // (rho, theta)-blended per-radius-node arrays; the common core of
    // Evaluate / SampleExit / PdfExit. Public for tests.
    struct BlendedRows {
        Float E[kNR];                       // A_k r_k (radial density values)
        Float cum[kNR];                     // blended cumulative energy
        Float A[kNR], beta[kNR], c[kNR];    // blended channels
        Float rhoEffB;                      // = cum[kNR - 1]
    };
    BlendedRows BlendRows(Float rho, Float theta) const;

  private:
    struct ParamsAndA {
        GwcParams p;
        Float A;
    };
    static ParamsAndA MakeParams(Float A, Float beta, Float c);
    ParamsAndA ParamsAtRadius(const BlendedRows& rows, Float r) const;
};

}  // namespace bsrt

#endif  // BSRT_TABLE_H
