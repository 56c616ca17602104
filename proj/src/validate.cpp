// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <bsrt/validate.h>

#include <algorithm>
#include <bsrt/errors.h>
#include <bsrt/image.h>
#include <bsrt/parallel.h>
#include <bsrt/pbd.h>
#include <bsrt/rng.h>
#include <cmath>
#include <fstream>

namespace bsrt {

static constexpr Float kOracleCutoff = 1e-12;

// Signed relative errors (percent) at n importance-sampled points; excluded
// points are flagged rather than skipped so the output is index-stable (and
// therefore independent of thread scheduling).
static void SignedRelErrors(const BssrdfTable &table, Float rho, Float theta,
                            int64_t n, uint64_t seed, int oracleSamples,
                            int nThreads, std::vector<Float> *rel,
                            std::vector<uint8_t> *excluded) {
    if (n <= 0) throw InvalidInputError("validate: n must be positive");
    if (oracleSamples <= 0)
        throw InvalidInputError("validate: oracle sample count must be positive");
    if (!(table.RhoEff(rho, theta) > 0))
        throw ZeroMassError("validate: no sampled mass at this (rho, theta)");

    MediumParams medium;
    medium.sigma_s = rho;
    medium.sigma_a = 1 - rho;
    medium.g = table.g;
    medium.eta = table.eta;
    DerivedConstants dc = DeriveConstants(medium, table.signs);

    rel->assign(size_t(n), 0);
    excluded->assign(size_t(n), 0);
    CounterRng rng(seed);
    ParallelFor(0, n, [&](int64_t i) {
        PolarSample s = table.SampleExit(rho, theta, rng.Uniform(uint64_t(i), 0),
                                         rng.Uniform(uint64_t(i), 1));
        Float model = table.Evaluate(rho, theta, s.r, s.phi);
        BeamGeometry geom;
        geom.theta = theta;
        geom.r = s.r;
        geom.phi = s.phi;
        Float oracle = EvalSpMS(dc, geom, oracleSamples);
        if (oracle <= kOracleCutoff)
            (*excluded)[size_t(i)] = 1;
        else
            (*rel)[size_t(i)] = (model - oracle) / oracle * 100;
    }, nThreads);
}

// Nearest-rank percentile of an ascending-sorted sample.
static Float Percentile(const std::vector<Float> &sorted, Float q) {
    if (sorted.empty()) return 0;
    size_t rank = size_t(std::ceil(q * Float(sorted.size())));
    rank = std::min(std::max<size_t>(rank, 1), sorted.size());
    return sorted[rank - 1];
}

static ErrorStats Aggregate(const BssrdfTable &table, Float rho, Float theta,
                            const std::vector<Float> &rel,
                            const std::vector<uint8_t> &excluded) {
    std::vector<Float> abs;
    abs.reserve(rel.size());
    for (size_t i = 0; i < rel.size(); ++i)
        if (!excluded[i]) abs.push_back(std::abs(rel[i]));
    std::sort(abs.begin(), abs.end());

    ErrorStats stats;
    stats.nSamples = int64_t(rel.size());
    stats.nExcluded = int64_t(rel.size()) - int64_t(abs.size());
    stats.rho = rho;
    stats.theta = theta;
    stats.eta = table.eta;
    stats.g = table.g;
    Float sum = 0;
    for (Float a : abs) sum += a;
    stats.meanRelError = abs.empty() ? 0 : sum / Float(abs.size());
    stats.p50 = Percentile(abs, 0.50);
    stats.p95 = Percentile(abs, 0.95);
    stats.p99 = Percentile(abs, 0.99);
    return stats;
}

ErrorStats Validate(const BssrdfTable &table, Float rho, Float theta,
                    int64_t n, uint64_t seed, int oracleSamples, int nThreads) {
    std::vector<Float> rel;
    std::vector<uint8_t> excluded;
    SignedRelErrors(table, rho, theta, n, seed, oracleSamples, nThreads, &rel,
                    &excluded);
    return Aggregate(table, rho, theta, rel, excluded);
}

// Renders the histogram as a white-bars-on-black grayscale plot with a
// baseline and a tick column at zero error.
static void WriteHistogramPlot(const std::string &path,
                               const ErrorHistogram &h) {
    int bins = int(h.counts.size());
    int barWidth = std::max(1, 512 / bins);
    int width = bins * barWidth + 2;
    int height = 256;
    Image plot(width, height, 1);
    int64_t peak = 1;
    for (int64_t c : h.counts) peak = std::max(peak, c);
    for (int b = 0; b < bins; ++b) {
        int barTop = height - 2 -
                     int(std::lround(Float(h.counts[b]) / Float(peak) *
                                     (height - 24)));
        for (int x = 1 + b * barWidth; x < 1 + (b + 1) * barWidth; ++x)
            for (int y = barTop; y < height - 1; ++y) plot.At(x, y, 0) = 1.f;
    }
    for (int x = 0; x < width; ++x) plot.At(x, height - 1, 0) = 0.5f;
    if (h.lo < 0 && h.hi > 0) {
        int xZero = 1 + int(std::lround(-h.lo / (h.hi - h.lo) * (width - 2)));
        xZero = std::min(std::max(xZero, 0), width - 1);
        for (int y = height - 12; y < height; ++y) plot.At(xZero, y, 0) = 0.25f;
    }
    WritePng(path, plot, 1.f, 1.f);
}

ErrorHistogram EmitErrorHistogram(const BssrdfTable &table, Float rho,
                                  Float theta, int64_t n, int bins,
                                  uint64_t seed, const std::string &outPrefix,
                                  int oracleSamples, int nThreads) {
    if (bins <= 0) throw InvalidInputError("histogram: bins must be positive");
    std::vector<Float> rel;
    std::vector<uint8_t> excluded;
    SignedRelErrors(table, rho, theta, n, seed, oracleSamples, nThreads, &rel,
                    &excluded);

    ErrorHistogram h;
    h.stats = Aggregate(table, rho, theta, rel, excluded);
    h.counts.assign(size_t(bins), 0);
    h.lo = INFINITY;
    h.hi = -INFINITY;
    for (size_t i = 0; i < rel.size(); ++i)
        if (!excluded[i]) {
            h.lo = std::min(h.lo, rel[i]);
            h.hi = std::max(h.hi, rel[i]);
        }
    if (!(h.lo <= h.hi))
        throw ZeroMassError("histogram: every oracle value fell below cutoff");
    Float span = h.hi - h.lo;
    if (span <= 0) span = 1;  // all errors identical: everything in bin 0
    for (size_t i = 0; i < rel.size(); ++i)
        if (!excluded[i]) {
            int b = int((rel[i] - h.lo) / span * Float(bins));
            h.counts[size_t(std::min(b, bins - 1))]++;
        }

    std::ofstream csv(outPrefix + ".csv");
    if (!csv) throw IoError("cannot open \"" + outPrefix + ".csv\"");
    csv << "bin_lo_percent,bin_hi_percent,count,fraction\n";
    int64_t total = int64_t(rel.size()) - h.stats.nExcluded;
    for (int b = 0; b < bins; ++b)
        csv << h.lo + span * b / bins << ',' << h.lo + span * (b + 1) / bins
            << ',' << h.counts[size_t(b)] << ','
            << Float(h.counts[size_t(b)]) / Float(total) << '\n';
    if (!csv) throw IoError("short write to \"" + outPrefix + ".csv\"");
    WriteHistogramPlot(outPrefix + ".png", h);
    return h;
}

}  // namespace bsrt
