// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <bsrt/tracer.h>

#include <bsrt/errors.h>
#include <bsrt/parallel.h>
#include <bsrt/rng.h>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace bsrt {

static void CheckScene(const SlabScene &s) {
    if (!(s.thetaDeg >= 0 && s.thetaDeg < 90))
        throw InvalidInputError("scene: theta_deg must be in [0, 90)");
    if (!(s.coneDeg > 0 && s.thetaDeg + s.coneDeg < 90))
        throw InvalidInputError(
            "scene: cone_deg must be positive with theta_deg + cone_deg < 90");
    if (!(s.sigmaS > 0)) throw InvalidInputError("scene: sigma_s must be positive");
    for (Float a : s.sigmaA)
        if (!(a >= 0)) throw InvalidInputError("scene: sigma_a must be >= 0");
    if (!(s.eta > 1)) throw InvalidInputError("scene: eta must exceed 1");
    if (s.width <= 0 || s.height <= 0)
        throw InvalidInputError("scene: image dimensions must be positive");
    if (!(s.extent > 0)) throw InvalidInputError("scene: extent must be positive");
    if (s.particles <= 0)
        throw InvalidInputError("scene: particle count must be positive");
    if (!(s.apexDistance > 0))
        throw InvalidInputError("scene: apex_distance must be positive");
}

SlabScene ParseSceneConfig(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene file \"" + path + "\"");
    SlabScene scene;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        bool ok = bool(ls);
        if (key == "theta_deg")
            ok = bool(ls >> scene.thetaDeg);
        else if (key == "cone_deg")
            ok = bool(ls >> scene.coneDeg);
        else if (key == "sigma_s")
            ok = bool(ls >> scene.sigmaS);
        else if (key == "sigma_a_rgb")
            ok = bool(ls >> scene.sigmaA[0] >> scene.sigmaA[1] >> scene.sigmaA[2]);
        else if (key == "eta")
            ok = bool(ls >> scene.eta);
        else if (key == "g")
            ok = bool(ls >> scene.g);
        else if (key == "width")
            ok = bool(ls >> scene.width);
        else if (key == "height")
            ok = bool(ls >> scene.height);
        else if (key == "extent")
            ok = bool(ls >> scene.extent);
        else if (key == "particles")
            ok = bool(ls >> scene.particles);
        else if (key == "seed")
            ok = bool(ls >> scene.seed);
        else if (key == "apex_distance")
            ok = bool(ls >> scene.apexDistance);
        else
            throw InvalidInputError("scene: unknown key \"" + key + "\" at line " +
                                    std::to_string(lineNo));
        std::string extra;
        if (!ok || (ls >> extra))
            throw InvalidInputError("scene: malformed value for \"" + key +
                                    "\" at line " + std::to_string(lineNo));
    }
    CheckScene(scene);
    return scene;
}

namespace {
// One particle's per-channel deposit, produced in parallel and splatted
// serially in particle order so the image is independent of thread count.
struct Deposit {
    Float ex[3], ey[3], w[3];
    Float transmission;
};
}  // namespace

Image TraceBeam(const SlabScene &scene,
                const std::array<const BssrdfTable *, 3> &tables,
                TraceStats *stats, int nThreads) {
    CheckScene(scene);
    Float sigmaT[3], rhoCh[3];
    for (int ci = 0; ci < 3; ++ci) {
        const BssrdfTable *t = tables[size_t(ci)];
        if (t == nullptr) throw InvalidInputError("trace: missing channel table");
        if (std::abs(t->eta - scene.eta) > 1e-9 || std::abs(t->g - scene.g) > 1e-9)
            throw InvalidInputError("trace: table (eta, g) does not match scene");
        sigmaT[ci] = scene.sigmaS + scene.sigmaA[size_t(ci)];
        rhoCh[ci] = scene.sigmaS / sigmaT[ci];
    }

    Float theta = scene.thetaDeg * Pi / 180;
    Float cosCone = std::cos(scene.coneDeg * Pi / 180);
    // Beam axis and an orthonormal frame around it; the axis lies in the
    // xz-plane, tilted toward +x, pointing down into the slab.
    Float d0[3] = {std::sin(theta), 0, -std::cos(theta)};
    Float t1[3] = {std::cos(theta), 0, std::sin(theta)};
    Float t2[3] = {0, 1, 0};
    Float apex[3] = {-scene.apexDistance * d0[0], 0, -scene.apexDistance * d0[2]};

    Image image(scene.width, scene.height, 3);
    TraceStats local;
    CounterRng rng(scene.seed);
    Float invN = Float(1) / Float(scene.particles);
    Float centroidWX[3] = {0, 0, 0}, centroidWY[3] = {0, 0, 0};

    constexpr int64_t kBatch = 65536;
    std::vector<Deposit> batch(size_t(std::min<int64_t>(kBatch, scene.particles)));
    for (int64_t start = 0; start < scene.particles; start += kBatch) {
        int64_t count = std::min(kBatch, scene.particles - start);
        ParallelFor(0, count, [&](int64_t bi) {
            uint64_t i = uint64_t(start + bi);
            Deposit &d = batch[size_t(bi)];
            // Uniform direction within the cone.
            Float cosChi = 1 - rng.Uniform(i, 0) * (1 - cosCone);
            Float sinChi = std::sqrt(std::max<Float>(0, 1 - cosChi * cosChi));
            Float psi = 2 * Pi * rng.Uniform(i, 1);
            Float ca = std::cos(psi), sa = std::sin(psi);
            Float dir[3];
            for (int a = 0; a < 3; ++a)
                dir[a] = cosChi * d0[a] + sinChi * (ca * t1[a] + sa * t2[a]);
            Float cosThetaI = -dir[2];  // > 0 by the theta + cone < 90 invariant
            Float thetaI = std::acos(Clamp(cosThetaI, Float(0), Float(1)));
            Float s = -apex[2] / dir[2];
            Float qx = apex[0] + s * dir[0], qy = apex[1] + s * dir[1];
            d.transmission = 1 - FresnelReflectance(scene.eta, cosThetaI);
            // Incidence frame on the surface: +x_loc along the horizontal
            // component of the beam (the forward scattering direction).
            Float hx = dir[0], hy = dir[1];
            Float hLen = std::hypot(hx, hy);
            if (hLen < 1e-12) {
                hx = 1;
                hy = 0;
            } else {
                hx /= hLen;
                hy /= hLen;
            }
            for (int ci = 0; ci < 3; ++ci) {
                PolarSample ps = tables[size_t(ci)]->SampleExit(
                    rhoCh[ci], thetaI, rng.Uniform(i, uint64_t(2 + 2 * ci)),
                    rng.Uniform(i, uint64_t(3 + 2 * ci)));
                Float rPhys = ps.r / sigmaT[ci];
                Float cp = std::cos(ps.phi), sp = std::sin(ps.phi);
                d.ex[ci] = qx + rPhys * (cp * hx - sp * hy);
                d.ey[ci] = qy + rPhys * (cp * hy + sp * hx);
                d.w[ci] = d.transmission *
                          tables[size_t(ci)]->RhoEff(rhoCh[ci], thetaI) * invN;
            }
        }, nThreads);

        // Serial splat in particle order: deterministic accumulation.
        for (int64_t bi = 0; bi < count; ++bi) {
            const Deposit &d = batch[size_t(bi)];
            local.incidentEnergy += d.transmission * invN;
            for (int ci = 0; ci < 3; ++ci) {
                local.channelEnergy[size_t(ci)] += d.w[ci];
                centroidWX[ci] += d.w[ci] * d.ex[ci];
                centroidWY[ci] += d.w[ci] * d.ey[ci];
                // Bilinear splat; top image row corresponds to +y.
                Float px = (d.ex[ci] + scene.extent / 2) / scene.extent *
                               scene.width - Float(0.5);
                Float py = (scene.extent / 2 - d.ey[ci]) / scene.extent *
                               scene.height - Float(0.5);
                int x0 = int(std::floor(px)), y0 = int(std::floor(py));
                Float fx = px - x0, fy = py - y0;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        int x = x0 + dx, y = y0 + dy;
                        if (x < 0 || x >= scene.width || y < 0 ||
                            y >= scene.height)
                            continue;
                        Float wPix = (dx ? fx : 1 - fx) * (dy ? fy : 1 - fy);
                        image.At(x, y, ci) += float(d.w[ci] * wPix);
                    }
            }
        }
    }

    // Energy per area: divide by the pixel footprint.
    Float pixArea = (scene.extent / scene.width) * (scene.extent / scene.height);
    for (float &p : image.pixels) p = float(p / pixArea);
    for (int ci = 0; ci < 3; ++ci) {
        if (local.channelEnergy[size_t(ci)] > 0) {
            local.centroidX[size_t(ci)] =
                centroidWX[ci] / local.channelEnergy[size_t(ci)];
            local.centroidY[size_t(ci)] =
                centroidWY[ci] / local.channelEnergy[size_t(ci)];
        }
    }
    if (stats != nullptr) *stats = local;
    return image;
}

}  // namespace bsrt
