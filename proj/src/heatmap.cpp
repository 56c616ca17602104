// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <bsrt/heatmap.h>

#include <bsrt/errors.h>
#include <bsrt/parallel.h>
#include <bsrt/pbd.h>
#include <cmath>
#include <fstream>
#include <json.hpp>

namespace bsrt {

Image EmitHeatmap(const MediumParams &medium, Float theta, Float extent,
                  int resolution, int oracleSamples,
                  const std::string &outPrefix, Float exposure,
                  SignConvention signs, int nThreads) {
    if (!(extent > 0)) throw InvalidInputError("heatmap: extent must be positive");
    if (resolution <= 0)
        throw InvalidInputError("heatmap: resolution must be positive");
    if (oracleSamples <= 0)
        throw InvalidInputError("heatmap: sample count must be positive");
    DerivedConstants dc = DeriveConstants(medium, signs);

    Image field(resolution, resolution, 1);
    ParallelFor(0, resolution, [&](int64_t iy) {
        for (int ix = 0; ix < resolution; ++ix) {
            Float x = (Float(ix) + Float(0.5)) / resolution * extent - extent / 2;
            // Top image row maps to +y so the PNG reads like a plot.
            Float y = extent / 2 - (Float(iy) + Float(0.5)) / resolution * extent;
            BeamGeometry geom;
            geom.theta = theta;
            geom.r = std::hypot(x, y);
            geom.phi = std::atan2(y, x);
            field.At(ix, int(iy), 0) = float(EvalSpMS(dc, geom, oracleSamples));
        }
    }, nThreads);

    WritePfm(outPrefix + ".pfm", field);
    WritePng(outPrefix + ".png", field, float(exposure), 2.2f);

    nlohmann::json meta{{"field", outPrefix + ".pfm"},
                        {"png", outPrefix + ".png"},
                        {"tonemap", {{"exposure", exposure}, {"gamma", 2.2}}},
                        {"theta", theta},
                        {"extent", extent},
                        {"resolution", resolution},
                        {"oracle_samples", oracleSamples},
                        {"sigma_s", medium.sigma_s},
                        {"sigma_a", medium.sigma_a},
                        {"g", medium.g},
                        {"eta", medium.eta}};
    std::ofstream js(outPrefix + ".json");
    if (!js) throw IoError("cannot open \"" + outPrefix + ".json\"");
    js << meta.dump(2) << '\n';
    if (!js) throw IoError("short write to \"" + outPrefix + ".json\"");
    return field;
}

}  // namespace bsrt
