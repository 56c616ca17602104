// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface: build, query, sample, and validate tabulated
// subsurface-scattering models, and reproduce the reference figures
// (heatmaps, error histograms, slab beam renders).
//
// Exit codes: 0 success, 1 usage or runtime error, 2 a requested validation
// threshold was exceeded.

#include <CLI11.hpp>
#include <bsrt/errors.h>
#include <bsrt/heatmap.h>
#include <bsrt/image.h>
#include <bsrt/pbd.h>
#include <bsrt/rng.h>
#include <bsrt/table.h>
#include <bsrt/tracer.h>
#include <bsrt/validate.h>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <string>

using namespace bsrt;
using nlohmann::json;

namespace {

struct CommonMedium {
    double rho = 0.5;
    double theta = 0;  // radians
};

DerivedConstants OracleConstants(const BssrdfTable &table, double rho) {
    MediumParams medium;
    medium.sigma_s = rho;
    medium.sigma_a = 1 - rho;
    medium.g = table.g;
    medium.eta = table.eta;
    return DeriveConstants(medium, table.signs);
}

json StatsToJson(const ErrorStats &s) {
    return json{{"mean_rel_error_percent", s.meanRelError},
                {"p50_percent", s.p50},
                {"p95_percent", s.p95},
                {"p99_percent", s.p99},
                {"n_samples", s.nSamples},
                {"n_excluded", s.nExcluded},
                {"rho", s.rho},
                {"theta", s.theta},
                {"eta", s.eta},
                {"g", s.g}};
}

int RunBuild(double eta, double g, int samples, const std::string &out,
             bool zbFlip, bool rdeClassical, int threads) {
    SignConvention signs;
    signs.zbFlip = zbFlip;
    signs.rdeClassical = rdeClassical;
    BssrdfTable table = BssrdfTable::Build(eta, g, samples, signs, threads);
    table.WriteFile(out);
    std::printf("wrote %s (clamped %lld, degenerate %lld of %d cells)\n",
                out.c_str(), (long long)table.stats.clampedCells,
                (long long)table.stats.degenerateCells, BssrdfTable::kNCells);
    return 0;
}

int RunEval(const std::string &tablePath, double rho, double theta, double r,
            double phi, bool oracle, int oracleSamples, bool asJson) {
    BssrdfTable table = BssrdfTable::ReadFile(tablePath);
    double model = table.Evaluate(rho, theta, r, phi);
    json report{{"model", model}};
    if (oracle) {
        BeamGeometry geom;
        geom.theta = theta;
        geom.r = r;
        geom.phi = phi;
        double ref = EvalSpMS(OracleConstants(table, rho), geom, oracleSamples);
        report["oracle"] = ref;
        if (ref > 0) report["rel_error"] = (model - ref) / ref;
    }
    if (asJson) {
        std::printf("%s\n", report.dump(2).c_str());
    } else {
        std::printf("model  %.12e\n", model);
        if (oracle) {
            std::printf("oracle %.12e\n", report["oracle"].get<double>());
            if (report.contains("rel_error"))
                std::printf("rel error %.6e\n", report["rel_error"].get<double>());
        }
    }
    return 0;
}

int RunSample(const std::string &tablePath, double rho, double theta,
              int64_t n, uint64_t seed, const std::string &out, bool asJson) {
    BssrdfTable table = BssrdfTable::ReadFile(tablePath);
    CounterRng rng(seed);
    std::ofstream os(out);
    if (!os) throw IoError("cannot open \"" + out + "\" for writing");
    json draws = json::array();
    if (!asJson) os << "r,phi,pdf\n";
    for (int64_t i = 0; i < n; ++i) {
        PolarSample s = table.SampleExit(rho, theta, rng.Uniform(uint64_t(i), 0),
                                         rng.Uniform(uint64_t(i), 1));
        if (asJson)
            draws.push_back({{"r", s.r}, {"phi", s.phi}, {"pdf", s.pdf}});
        else
            os << s.r << ',' << s.phi << ',' << s.pdf << '\n';
    }
    if (asJson) os << draws.dump(2) << '\n';
    if (!os) throw IoError("short write to \"" + out + "\"");
    std::printf("wrote %lld draws to %s\n", (long long)n, out.c_str());
    return 0;
}

int RunValidate(const std::string &tablePath, double rho, double theta,
                int64_t n, uint64_t seed, int oracleSamples,
                double maxMeanRelError, bool asJson, int threads) {
    BssrdfTable table = BssrdfTable::ReadFile(tablePath);
    ErrorStats s = Validate(table, rho, theta, n, seed, oracleSamples, threads);
    if (asJson) {
        json report = StatsToJson(s);
        if (maxMeanRelError >= 0) {
            report["max_mean_rel_error_percent"] = maxMeanRelError;
            report["passed"] = s.meanRelError <= maxMeanRelError;
        }
        std::printf("%s\n", report.dump(2).c_str());
    } else {
        std::printf("rho %.4f theta %.4f  n %lld (excluded %lld)\n", s.rho,
                    s.theta, (long long)s.nSamples, (long long)s.nExcluded);
        std::printf("mean %.4f%%  p50 %.4f%%  p95 %.4f%%  p99 %.4f%%\n",
                    s.meanRelError, s.p50, s.p95, s.p99);
    }
    if (maxMeanRelError >= 0 && s.meanRelError > maxMeanRelError) {
        std::fprintf(stderr, "validation failed: mean %.4f%% > %.4f%%\n",
                     s.meanRelError, maxMeanRelError);
        return 2;
    }
    return 0;
}

int RunHeatmap(double eta, double g, double rho, double theta, double extent,
               int resolution, int samples, double exposure,
               const std::string &outPrefix, int threads) {
    MediumParams medium;
    medium.sigma_s = rho;
    medium.sigma_a = 1 - rho;
    medium.g = g;
    medium.eta = eta;
    EmitHeatmap(medium, theta, extent, resolution, samples, outPrefix, exposure,
                DefaultSignConvention(), threads);
    std::printf("wrote %s.pfm / %s.png / %s.json\n", outPrefix.c_str(),
                outPrefix.c_str(), outPrefix.c_str());
    return 0;
}

int RunHistogram(const std::string &tablePath, double rho, double theta,
                 int64_t n, int bins, uint64_t seed, int oracleSamples,
                 const std::string &outPrefix, bool asJson, int threads) {
    BssrdfTable table = BssrdfTable::ReadFile(tablePath);
    ErrorHistogram h = EmitErrorHistogram(table, rho, theta, n, bins, seed,
                                          outPrefix, oracleSamples, threads);
    if (asJson) {
        json report{{"lo_percent", h.lo},
                    {"hi_percent", h.hi},
                    {"counts", h.counts},
                    {"stats", StatsToJson(h.stats)}};
        std::printf("%s\n", report.dump(2).c_str());
    } else {
        std::printf("signed relative error in [%.4f%%, %.4f%%], %d bins\n",
                    h.lo, h.hi, bins);
        std::printf("wrote %s.csv / %s.png\n", outPrefix.c_str(),
                    outPrefix.c_str());
    }
    return 0;
}

int RunTraceBeam(const std::string &scenePath, const std::string &tablePath,
                 const std::string &outPrefix, double exposure, int threads) {
    SlabScene scene = ParseSceneConfig(scenePath);
    BssrdfTable table = BssrdfTable::ReadFile(tablePath);
    std::array<const BssrdfTable *, 3> tables{&table, &table, &table};
    TraceStats stats;
    Image image = TraceBeam(scene, tables, &stats, threads);
    WritePfm(outPrefix + ".pfm", image);
    WritePng(outPrefix + ".png", image, float(exposure), 2.2f);
    json meta{{"scene", scenePath},
              {"table", tablePath},
              {"tonemap", {{"exposure", exposure}, {"gamma", 2.2}}},
              {"incident_energy", stats.incidentEnergy},
              {"channel_energy", stats.channelEnergy},
              {"centroid_x", stats.centroidX},
              {"centroid_y", stats.centroidY}};
    std::ofstream js(outPrefix + ".json");
    if (!js) throw IoError("cannot open \"" + outPrefix + ".json\"");
    js << meta.dump(2) << '\n';
    std::printf("wrote %s.pfm / %s.png / %s.json\n", outPrefix.c_str(),
                outPrefix.c_str(), outPrefix.c_str());
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Tabulated subsurface-scattering model: build, evaluate, "
                 "sample, validate, and render diagnostic figures"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads,
                   "worker threads (0 = hardware concurrency)");

    // build
    auto *build = app.add_subcommand("build", "build a table from the oracle");
    double eta = 1.33, g = 0;
    int buildSamples = 100;
    std::string outPath = "table.bsrt";
    bool zbFlip = DefaultSignConvention().zbFlip;
    bool rdeClassical = DefaultSignConvention().rdeClassical;
    build->add_option("--eta", eta, "relative index of refraction (> 1)");
    build->add_option("--g", g, "Henyey-Greenstein anisotropy");
    build->add_option("--samples", buildSamples, "beam samples per fit point");
    build->add_option("--out", outPath, "output table path")->required();
    build->add_flag("--zb-flip", zbFlip, "negate the extrapolated-boundary offset");
    build->add_flag("--rde-classical", rdeClassical,
                    "use the classical sign for the virtual irradiance term");

    // eval
    auto *eval = app.add_subcommand("eval", "evaluate the model at a point");
    std::string tablePath;
    double rho = 0.5, theta = 0, r = 1, phi = 0;
    bool withOracle = false, asJson = false;
    int oracleSamples = 10000;
    eval->add_option("--table", tablePath, "table file")->required();
    eval->add_option("--rho", rho, "single-scattering albedo")->required();
    eval->add_option("--theta", theta, "incidence angle, radians")->required();
    eval->add_option("--r", r, "exit radius, mean free paths")->required();
    eval->add_option("--phi", phi, "exit azimuth, radians")->required();
    eval->add_flag("--oracle", withOracle, "also print the oracle value");
    eval->add_option("--oracle-samples", oracleSamples, "oracle beam samples");
    eval->add_flag("--json", asJson, "machine-readable output");

    // sample
    auto *sample = app.add_subcommand("sample", "draw exit-point samples");
    int64_t n = 1000;
    uint64_t seed = 0;
    std::string samplesOut = "samples.csv";
    sample->add_option("--table", tablePath, "table file")->required();
    sample->add_option("--rho", rho, "single-scattering albedo")->required();
    sample->add_option("--theta", theta, "incidence angle, radians")->required();
    sample->add_option("--n", n, "number of draws");
    sample->add_option("--seed", seed, "random seed");
    sample->add_option("--out", samplesOut, "output path")->required();
    sample->add_flag("--json", asJson, "write a JSON array instead of CSV");

    // validate
    auto *validate =
        app.add_subcommand("validate", "error statistics against the oracle");
    double maxMeanRelError = -1;
    validate->add_option("--table", tablePath, "table file")->required();
    validate->add_option("--rho", rho, "single-scattering albedo")->required();
    validate->add_option("--theta", theta, "incidence angle, radians")->required();
    validate->add_option("--n", n, "number of sampled points");
    validate->add_option("--seed", seed, "random seed");
    validate->add_option("--oracle-samples", oracleSamples, "oracle beam samples");
    validate->add_option("--max-mean-rel-error", maxMeanRelError,
                         "fail (exit 2) if the mean exceeds this percentage");
    validate->add_flag("--json", asJson, "machine-readable output");

    // heatmap
    auto *heatmap =
        app.add_subcommand("heatmap", "planar field of the oracle profile");
    double extent = 20;
    int resolution = 256;
    double exposure = 1;
    std::string outPrefix = "heatmap";
    heatmap->add_option("--eta", eta, "relative index of refraction (> 1)");
    heatmap->add_option("--g", g, "Henyey-Greenstein anisotropy");
    heatmap->add_option("--rho", rho, "single-scattering albedo")->required();
    heatmap->add_option("--theta", theta, "incidence angle, radians")->required();
    heatmap->add_option("--extent", extent, "window side, mean free paths");
    heatmap->add_option("--res", resolution, "image resolution");
    heatmap->add_option("--samples", oracleSamples, "beam samples per pixel");
    heatmap->add_option("--exposure", exposure, "tone-map exposure");
    heatmap->add_option("--out", outPrefix, "output path prefix");

    // histogram
    auto *histogram =
        app.add_subcommand("histogram", "signed relative-error histogram");
    int bins = 64;
    histogram->add_option("--table", tablePath, "table file")->required();
    histogram->add_option("--rho", rho, "single-scattering albedo")->required();
    histogram->add_option("--theta", theta, "incidence angle, radians")
        ->required();
    histogram->add_option("--n", n, "number of sampled points");
    histogram->add_option("--bins", bins, "number of bins");
    histogram->add_option("--seed", seed, "random seed");
    histogram->add_option("--oracle-samples", oracleSamples,
                          "oracle beam samples");
    histogram->add_option("--out", outPrefix, "output path prefix")->required();
    histogram->add_flag("--json", asJson, "machine-readable output");

    // trace-beam
    auto *trace = app.add_subcommand("trace-beam", "slab beam particle render");
    std::string scenePath, tracePrefix = "trace";
    trace->add_option("--scene", scenePath, "scene config file")->required();
    trace->add_option("--table", tablePath, "table file (shared by channels)")
        ->required();
    trace->add_option("--out", tracePrefix, "output path prefix");
    trace->add_option("--exposure", exposure, "tone-map exposure");

    // Let global options (--threads) appear after the subcommand as well.
    for (CLI::App *sc : app.get_subcommands(nullptr)) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed())
            return RunBuild(eta, g, buildSamples, outPath, zbFlip, rdeClassical,
                            threads);
        if (eval->parsed())
            return RunEval(tablePath, rho, theta, r, phi, withOracle,
                           oracleSamples, asJson);
        if (sample->parsed())
            return RunSample(tablePath, rho, theta, n, seed, samplesOut, asJson);
        if (validate->parsed())
            return RunValidate(tablePath, rho, theta, n, seed, oracleSamples,
                               maxMeanRelError, asJson, threads);
        if (heatmap->parsed())
            return RunHeatmap(eta, g, rho, theta, extent, resolution,
                              oracleSamples, exposure, outPrefix, threads);
        if (histogram->parsed())
            return RunHistogram(tablePath, rho, theta, n, bins, seed,
                                oracleSamples, outPrefix, asJson, threads);
        if (trace->parsed())
            return RunTraceBeam(scenePath, tablePath, tracePrefix, exposure,
                                threads);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
