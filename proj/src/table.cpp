// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include "bsrt/table.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bsrt/errors.h"
#include "bsrt/parallel.h"
#include "bsrt/pbd.h"

namespace bsrt {

static_assert(std::endian::native == std::endian::little,
              "the serialized table format is little-endian");

TableGrids TableGrids::Standard() {
    TableGrids g;
    g.rho.resize(BssrdfTable::kNRho);
    for (int i = 0; i < BssrdfTable::kNRho; ++i)
        g.rho[i] = (1 - std::exp(-8.0 * i / 99.0)) / (1 - std::exp(-8.0));
    g.theta.resize(BssrdfTable::kNTheta);
    for (int j = 0; j < BssrdfTable::kNTheta; ++j) g.theta[j] = j * Pi / 18;
    g.r.resize(BssrdfTable::kNR);
    g.r[0] = 0;
    for (int k = 1; k < BssrdfTable::kNR; ++k) g.r[k] = 0.0025 * std::pow(1.2, k);
    return g;
}

BssrdfTable BssrdfTable::Build(Float eta, Float g, int buildSamples,
                               SignConvention signs, int nThreads) {
    if (!(eta > 1) || !(g >= -1 && g <= 1) || buildSamples < 1)
        throw InvalidInputError("BssrdfTable::Build: need eta > 1, g in [-1, 1], "
                                "buildSamples >= 1");
    BssrdfTable t;
    t.eta = eta;
    t.g = g;
    t.signs = signs;
    t.grids = TableGrids::Standard();
    t.A.assign(kNCells, 0);
    t.beta.assign(kNCells, 0);
    t.c.assign(kNCells, 0);
    t.cumEnergy.assign(kNCells, 0);
    t.rhoEff.assign(kNRho * kNTheta, 0);

    const AnchorSet anchors = FitAnchors();
    const Float phiAnchor[3] = {std::acos(anchors.cosPhi1), std::acos(anchors.cosPhi2),
                                std::acos(anchors.cosPhi3)};

    // Cells are independent; parallelize over albedo rows and count clamp
    // statistics per row so the totals are scheduling-independent.
    std::vector<BuildStats> rowStats(kNRho);
    ParallelFor(0, kNRho, [&](int64_t i) {
        Float rho = t.grids.rho[i];
        DerivedConstants dc = DeriveConstants({rho, 1 - rho, g, eta}, signs);
        for (int j = 0; j < kNTheta; ++j) {
            for (int k = 0; k < kNR; ++k) {
                // The r = 0 node takes its angular fit from r = 1e-4; the
                // radial density A r still vanishes at r = 0 exactly.
                Float rFit = k == 0 ? 1e-4 : t.grids.r[k];
                Float f[3];
                for (int m = 0; m < 3; ++m)
                    f[m] = EvalSpMS(dc, {t.grids.theta[j], rFit, phiAnchor[m]},
                                    buildSamples);
                GwcParams p = GwcFit(f[0], f[1], f[2], anchors);
                size_t cell = t.CellIndex(int(i), j, k);
                t.A[cell] = 2 * Pi * p.alpha + p.beta;
                t.beta[cell] = p.beta;
                t.c[cell] = p.c;
                rowStats[i].clampedCells += p.clamped;
                rowStats[i].degenerateCells += p.degenerate;
            }
            // Radial energy integral: cumulative of the spline through the
            // node values A_k r_k. Where the spline dips below zero between
            // nodes (noise-scale overshoot in the decayed tail), the
            // cumulative would decrease by ~1e-9 of the total; a running max
            // restores the exact non-decreasing invariant.
            size_t row = t.CellIndex(int(i), j, 0);
            IntegrateCatmullRom(t.grids.r, std::span<const Float>(&t.A[row], kNR),
                                std::span<Float>(&t.cumEnergy[row], kNR), t.grids.r);
            for (int k = 1; k < kNR; ++k)
                t.cumEnergy[row + k] =
                    std::max(t.cumEnergy[row + k], t.cumEnergy[row + k - 1]);
            Float total = t.cumEnergy[row + kNR - 1];
            t.rhoEff[i * kNTheta + j] = total;
            rowStats[i].rhoEffAboveOne += total > 1;
        }
    }, nThreads);
    for (const BuildStats& rs : rowStats) {
        t.stats.clampedCells += rs.clampedCells;
        t.stats.degenerateCells += rs.degenerateCells;
        t.stats.rhoEffAboveOne += rs.rhoEffAboveOne;
    }
    return t;
}

BssrdfTable::ParamsAndA BssrdfTable::MakeParams(Float A, Float beta, Float c) {
    // The single clamping path shared by Evaluate, SampleExit and PdfExit:
    // spline interpolation can overshoot the per-cell parameter bounds
    // slightly, so restore them before evaluating the profile. The pedestal
    // (A - beta) / 2pi may legitimately be negative; it is raised only as far
    // as needed for the profile floor at phi = pi to stay non-negative.
    ParamsAndA pa;
    pa.A = A;
    pa.p.beta = std::max<Float>(beta, 0);
    pa.p.c = Clamp<Float>(c, 0, 1 - 1e-9);
    pa.p.alpha = std::max<Float>((A - pa.p.beta) / (2 * Pi),
                                 -pa.p.beta * WcPdf(Pi, pa.p.c));
    return pa;
}

BssrdfTable::BlendedRows BssrdfTable::BlendRows(Float rho, Float theta) const {
    SplineWeights swRho = CatmullRomWeightsChecked(grids.rho, rho, "rho");
    SplineWeights swTheta = CatmullRomWeightsChecked(grids.theta, theta, "theta");
    BlendedRows rows;
    for (int k = 0; k < kNR; ++k)
        rows.E[k] = rows.cum[k] = rows.A[k] = rows.beta[k] = rows.c[k] = 0;
    for (int a = 0; a < 4; ++a) {
        if (swRho.w[a] == 0) continue;
        for (int b = 0; b < 4; ++b) {
            if (swTheta.w[b] == 0) continue;
            Float w = swRho.w[a] * swTheta.w[b];
            size_t row = CellIndex(swRho.offset + a, swTheta.offset + b, 0);
            for (int k = 0; k < kNR; ++k) {
                rows.A[k] += w * A[row + k];
                rows.beta[k] += w * beta[row + k];
                rows.c[k] += w * c[row + k];
                rows.cum[k] += w * cumEnergy[row + k];
            }
        }
    }
    // Radial density node values; by linearity of the spline integral,
    // rows.cum is exactly the cumulative of the spline through rows.E.
    for (int k = 0; k < kNR; ++k) rows.E[k] = rows.A[k] * grids.r[k];
    rows.rhoEffB = rows.cum[kNR - 1];
    return rows;
}

BssrdfTable::ParamsAndA BssrdfTable::ParamsAtRadius(const BlendedRows& rows,
                                                    Float r) const {
    Float Ahat = Interp1D(grids.r, std::span<const Float>(rows.A, kNR), r);
    Float bhat = Interp1D(grids.r, std::span<const Float>(rows.beta, kNR), r);
    Float chat = Interp1D(grids.r, std::span<const Float>(rows.c, kNR), r);
    return MakeParams(Ahat, bhat, chat);
}

Float BssrdfTable::Evaluate(Float rho, Float theta, Float r, Float phi) const {
    if (r < 0 || !std::isfinite(r))
        throw OutOfDomainError("Evaluate: r must be finite and >= 0");
    if (r > grids.r.back()) return 0;  // negligible energy beyond r_max
    Float Ahat = Interp3D(grids.rho, grids.theta, grids.r, A, rho, theta, r);
    Float bhat = Interp3D(grids.rho, grids.theta, grids.r, beta, rho, theta, r);
    Float chat = Interp3D(grids.rho, grids.theta, grids.r, c, rho, theta, r);
    ParamsAndA pa = MakeParams(Ahat, bhat, chat);
    return std::max<Float>(GwcEval(phi, pa.p), 0);
}

PolarSample BssrdfTable::SampleExit(Float rho, Float theta, Float u1, Float u2) const {
    BlendedRows rows = BlendRows(rho, theta);
    if (!(rows.rhoEffB > 0))
        throw ZeroMassError("SampleExit: zero effective albedo at this (rho, theta)");
    PolarSample s;
    Float fval = 0, rPdf = 0;
    s.r = SampleCatmullRom(grids.r, std::span<const Float>(rows.E, kNR),
                           std::span<const Float>(rows.cum, kNR), u1, &fval, &rPdf);
    // The spline can dip below zero inside a segment; match PdfExit, which
    // clamps the radial density at zero.
    rPdf = std::max<Float>(rPdf, 0);
    ParamsAndA pa = ParamsAtRadius(rows, s.r);
    Float norm = 2 * Pi * pa.p.alpha + pa.p.beta;
    if (norm > 0) {
        s.phi = GwcSample(u2, pa.p);
        s.pdf = rPdf * GwcEval(s.phi, pa.p) / norm;
    } else {
        // Dead-tail sliver: the interpolated angular profile can lose all
        // mass at radii the radial spline still reaches with (tiny) positive
        // probability. The realized angular density there is uniform, kept
        // in exact agreement with PdfExit.
        s.phi = 2 * Pi * u2 - Pi;
        s.pdf = rPdf / (2 * Pi);
    }
    return s;
}

Float BssrdfTable::PdfExit(Float rho, Float theta, Float r, Float phi) const {
    if (r < 0 || !std::isfinite(r))
        throw OutOfDomainError("PdfExit: r must be finite and >= 0");
    BlendedRows rows = BlendRows(rho, theta);
    if (r > grids.r.back()) return 0;  // outside the sampled support
    if (!(rows.rhoEffB > 0))
        throw ZeroMassError("PdfExit: zero effective albedo at this (rho, theta)");
    Float E = std::max<Float>(
        Interp1D(grids.r, std::span<const Float>(rows.E, kNR), r), 0);
    ParamsAndA pa = ParamsAtRadius(rows, r);
    Float norm = 2 * Pi * pa.p.alpha + pa.p.beta;
    if (!(norm > 0)) return E / rows.rhoEffB / (2 * Pi);  // uniform azimuth
    return E / rows.rhoEffB * GwcEval(phi, pa.p) / norm;
}

IncidentSample BssrdfTable::SampleIncident(Float rho, Float u0, Float u1, Float u2,
                                           Float u3) const {
    SplineWeights swRho = CatmullRomWeightsChecked(grids.rho, rho, "rho");
    // Incidence-angle density theta |-> rho_eff(rho, theta), blended over rho.
    Float thetaVals[kNTheta];
    for (int j = 0; j < kNTheta; ++j) {
        thetaVals[j] = 0;
        for (int a = 0; a < 4; ++a)
            if (swRho.w[a] != 0)
                thetaVals[j] += swRho.w[a] * rhoEff[(swRho.offset + a) * kNTheta + j];
    }
    Float thetaCdf[kNTheta];
    Float total = IntegrateCatmullRom(grids.theta,
                                      std::span<const Float>(thetaVals, kNTheta),
                                      std::span<Float>(thetaCdf, kNTheta));
    if (!(total > 0))
        throw ZeroMassError("SampleIncident: rho_eff vanishes across theta");
    IncidentSample s;
    Float thetaPdf = 0;
    s.thetaI = SampleCatmullRom(grids.theta, std::span<const Float>(thetaVals, kNTheta),
                                std::span<const Float>(thetaCdf, kNTheta), u0, nullptr,
                                &thetaPdf);
    PolarSample exit = SampleExit(rho, s.thetaI, u1, u2);
    s.r = exit.r;
    s.phi = exit.phi;
    s.phiPrime = -Pi + 2 * Pi * u3;
    s.pdf = thetaPdf * exit.pdf * (1 / (2 * Pi));
    return s;
}

Float BssrdfTable::RhoEff(Float rho, Float theta) const {
    SplineWeights swRho = CatmullRomWeightsChecked(grids.rho, rho, "rho");
    SplineWeights swTheta = CatmullRomWeightsChecked(grids.theta, theta, "theta");
    Float v = 0;
    for (int a = 0; a < 4; ++a) {
        if (swRho.w[a] == 0) continue;
        for (int b = 0; b < 4; ++b)
            if (swTheta.w[b] != 0)
                v += swRho.w[a] * swTheta.w[b] *
                     rhoEff[(swRho.offset + a) * kNTheta + (swTheta.offset + b)];
    }
    return v;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

constexpr char kMagic[4] = {'B', 'S', 'R', 'T'};
constexpr uint32_t kVersion = 1;

template <typename T>
void WritePod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T ReadPod(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw TableFormatError("corrupt header: truncated stream");
    return v;
}

void WriteF32Array(std::ostream& os, const std::vector<Float>& v) {
    std::vector<float> tmp(v.begin(), v.end());
    os.write(reinterpret_cast<const char*>(tmp.data()),
             std::streamsize(tmp.size() * sizeof(float)));
}

void ReadF32Array(std::istream& is, std::vector<Float>& v, size_t n) {
    std::vector<float> tmp(n);
    is.read(reinterpret_cast<char*>(tmp.data()), std::streamsize(n * sizeof(float)));
    if (!is) throw TableFormatError("corrupt payload: truncated stream");
    v.assign(tmp.begin(), tmp.end());
}

void WriteF64Array(std::ostream& os, const std::vector<Float>& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             std::streamsize(v.size() * sizeof(Float)));
}

void ReadF64Array(std::istream& is, std::vector<Float>& v, size_t n) {
    v.resize(n);
    is.read(reinterpret_cast<char*>(v.data()), std::streamsize(n * sizeof(Float)));
    if (!is) throw TableFormatError("corrupt header: truncated grid data");
}

}  // namespace

void BssrdfTable::Serialize(std::ostream& os) const {
    os.write(kMagic, 4);
    WritePod<uint32_t>(os, kVersion);
    uint32_t flags = (signs.zbFlip ? 1u : 0u) | (signs.rdeClassical ? 2u : 0u);
    WritePod<uint32_t>(os, flags);
    WritePod<double>(os, eta);
    WritePod<double>(os, g);
    WritePod<uint32_t>(os, kNRho);
    WritePod<uint32_t>(os, kNTheta);
    WritePod<uint32_t>(os, kNR);
    WriteF64Array(os, grids.rho);
    WriteF64Array(os, grids.theta);
    WriteF64Array(os, grids.r);
    WriteF32Array(os, A);
    WriteF32Array(os, beta);
    WriteF32Array(os, c);
    WriteF32Array(os, cumEnergy);
    WriteF32Array(os, rhoEff);
    WritePod<uint64_t>(os, uint64_t(stats.clampedCells));
    if (!os) throw IoError("Serialize: stream write failed");
}

BssrdfTable BssrdfTable::Deserialize(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw TableFormatError("corrupt header: bad magic");
    if (ReadPod<uint32_t>(is) != kVersion)
        throw TableFormatError("corrupt header: unsupported version");
    uint32_t flags = ReadPod<uint32_t>(is);
    BssrdfTable t;
    t.signs.zbFlip = flags & 1u;
    t.signs.rdeClassical = flags & 2u;
    t.eta = ReadPod<double>(is);
    t.g = ReadPod<double>(is);
    uint32_t d0 = ReadPod<uint32_t>(is), d1 = ReadPod<uint32_t>(is),
             d2 = ReadPod<uint32_t>(is);
    if (d0 != kNRho || d1 != kNTheta || d2 != kNR)
        throw TableFormatError("dimension mismatch in table header");
    ReadF64Array(is, t.grids.rho, kNRho);
    ReadF64Array(is, t.grids.theta, kNTheta);
    ReadF64Array(is, t.grids.r, kNR);
    ReadF32Array(is, t.A, kNCells);
    ReadF32Array(is, t.beta, kNCells);
    ReadF32Array(is, t.c, kNCells);
    ReadF32Array(is, t.cumEnergy, kNCells);
    ReadF32Array(is, t.rhoEff, size_t(kNRho) * kNTheta);
    t.stats.clampedCells = int64_t(ReadPod<uint64_t>(is));

    // Invariant validation.
    auto invariant = [](bool ok, const char* what) {
        if (!ok) throw TableFormatError(std::string("invariant violation: ") + what);
    };
    invariant(t.eta > 1 && t.g >= -1 && t.g <= 1, "material constants out of range");
    auto strictlyIncreasing = [](const Grid1D& g) {
        for (size_t i = 0; i + 1 < g.size(); ++i)
            if (!(g[i] < g[i + 1]) || !std::isfinite(g[i])) return false;
        return std::isfinite(g.back());
    };
    invariant(strictlyIncreasing(t.grids.rho) && strictlyIncreasing(t.grids.theta) &&
                  strictlyIncreasing(t.grids.r),
              "grid nodes not strictly increasing");
    for (int i = 0; i < kNRho; ++i) {
        for (int j = 0; j < kNTheta; ++j) {
            size_t row = t.CellIndex(i, j, 0);
            for (int k = 0; k < kNR; ++k) {
                invariant(t.A[row + k] >= 0 && t.beta[row + k] >= 0,
                          "negative channel value");
                // The pedestal (A - beta) / 2pi may be negative, but only up
                // to the point where the profile floor at phi = pi is zero:
                // A >= beta 2c / (1 + c), with float32 storage slack.
                invariant(t.beta[row + k] * (2 * t.c[row + k] / (1 + t.c[row + k])) <=
                              t.A[row + k] +
                                  1e-6 * (t.A[row + k] + t.beta[row + k]) + 1e-30,
                          "angular profile floor negative");
                invariant(t.c[row + k] >= 0 && t.c[row + k] < 1,
                          "concentration outside [0, 1)");
                if (k > 0)
                    invariant(t.cumEnergy[row + k] >= t.cumEnergy[row + k - 1],
                              "cum_energy decreasing");
            }
            Float re = t.rhoEff[i * kNTheta + j];
            invariant(re == t.cumEnergy[row + kNR - 1], "rho_eff != cum_energy(r_max)");
            invariant(re >= 0 && re <= 1.05, "rho_eff outside [0, 1.05]");
            t.stats.rhoEffAboveOne += re > 1;
        }
    }
    return t;
}

void BssrdfTable::WriteFile(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    Serialize(os);
    os.close();
    if (!os) throw IoError("write failed: " + path);

    nlohmann::json j;
    j["magic"] = "BSRT";
    j["version"] = kVersion;
    j["flags"] = {{"zb_sign_variant", signs.zbFlip},
                  {"rde_sign_variant", signs.rdeClassical}};
    j["eta"] = eta;
    j["g"] = g;
    j["dims"] = {kNRho, kNTheta, kNR};
    j["payload_bytes"] = size_t(4) * kNCells * sizeof(float);
    j["build_stats"] = {{"clamped_cells", stats.clampedCells},
                        {"degenerate_cells", stats.degenerateCells},
                        {"rho_eff_above_one", stats.rhoEffAboveOne}};
    Float reMin = rhoEff[0], reMax = rhoEff[0];
    for (Float v : rhoEff) {
        reMin = std::min(reMin, v);
        reMax = std::max(reMax, v);
    }
    j["rho_eff_range"] = {reMin, reMax};
    std::ofstream js(path + ".json");
    if (!js) throw IoError("cannot open for writing: " + path + ".json");
    js << j.dump(2) << "\n";
}

BssrdfTable BssrdfTable::ReadFile(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path);
    return Deserialize(is);
}

}  // namespace bsrt
