// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <bsrt/errors.h>
#include <bsrt/interpolation.h>
#include <bsrt/rng.h>
#include <cmath>
#include <doctest.h>
#include <vector>

using namespace bsrt;

namespace {

const Grid1D kNodes{0.0, 0.4, 1.0, 2.2, 3.1, 5.0, 8.5};

std::vector<Float> Tabulate(Float (*f)(Float)) {
    std::vector<Float> v;
    for (Float x : kNodes) v.push_back(f(x));
    return v;
}

}  // namespace

TEST_SUITE("interpolation") {

TEST_CASE("weights reproduce nodes exactly and partition unity") {
    for (size_t i = 0; i < kNodes.size(); ++i) {
        SplineWeights sw;
        REQUIRE(CatmullRomWeights(kNodes, kNodes[i], &sw));
        Float sum = 0;
        for (int a = 0; a < 4; ++a) {
            int idx = sw.offset + a;
            if (idx == int(i))
                CHECK(sw.w[a] == doctest::Approx(1.0).epsilon(1e-14));
            sum += sw.w[a];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    }
    for (Float x : {0.13, 0.77, 1.9, 3.05, 4.9, 8.49}) {
        SplineWeights sw;
        REQUIRE(CatmullRomWeights(kNodes, x, &sw));
        Float sum = 0;
        for (Float w : sw.w) sum += w;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("out-of-domain queries") {
    SplineWeights sw;
    CHECK(!CatmullRomWeights(kNodes, -0.1, &sw));
    CHECK(!CatmullRomWeights(kNodes, 8.6, &sw));
    CHECK_THROWS_AS(CatmullRomWeightsChecked(kNodes, -0.1, "radius"),
                    OutOfDomainError);
    try {
        CatmullRomWeightsChecked(kNodes, 9.0, "radius");
        FAIL("expected OutOfDomainError");
    } catch (const OutOfDomainError &e) {
        CHECK(std::string(e.what()).find("radius") != std::string::npos);
    }
}

TEST_CASE("linear functions are reproduced") {
    auto lin = Tabulate(+[](Float x) { return 3 - 0.5 * x; });
    for (Float x = 0; x <= 8.5; x += 0.083) {
        CHECK(Interp1D(kNodes, lin, x) ==
              doctest::Approx(3 - 0.5 * x).epsilon(1e-10));
    }
}

TEST_CASE("3D tensor interpolation separates over axes") {
    Grid1D n0{0, 1, 2}, n1{0, 0.5, 1.5, 4}, n2{-1, 0, 2};
    auto f0 = [](Float x) { return 1 + 2 * x; };
    auto f1 = [](Float y) { return 3 - 0.25 * y; };
    auto f2 = [](Float z) { return 0.5 + z; };
    std::vector<Float> table;
    for (Float x : n0)
        for (Float y : n1)
            for (Float z : n2) table.push_back(f0(x) * f1(y) * f2(z));
    // A product of per-axis linear functions is reproduced exactly: each
    // nested 1D pass is linear-exact.
    for (Float x : {0.0, 0.7, 1.9})
        for (Float y : {0.1, 1.2, 3.9})
            for (Float z : {-0.9, 0.0, 1.5})
                CHECK(Interp3D(n0, n1, n2, table, x, y, z) ==
                      doctest::Approx(f0(x) * f1(y) * f2(z)).epsilon(1e-10));
}

TEST_CASE("integration matches dense quadrature of the interpolant") {
    auto vals = Tabulate(+[](Float x) { return std::exp(-0.4 * x) * (1 + x); });
    std::vector<Float> cdf(kNodes.size());
    Float total = IntegrateCatmullRom(kNodes, vals, cdf);
    CHECK(cdf[0] == 0.0);
    CHECK(cdf.back() == doctest::Approx(total).epsilon(1e-14));

    // Dense trapezoid over the spline itself.
    const int kSteps = 200000;
    Float lo = kNodes.front(), hi = kNodes.back();
    Float h = (hi - lo) / kSteps, sum = 0;
    for (int i = 0; i <= kSteps; ++i) {
        Float x = lo + i * h;
        Float w = (i == 0 || i == kSteps) ? 0.5 : 1.0;
        sum += w * Interp1D(kNodes, vals, x);
    }
    CHECK(total == doctest::Approx(sum * h).epsilon(1e-7));

    // Mid-node cumulative agrees too.
    Float partial = 0;
    for (int i = 0; i <= kSteps; ++i) {
        Float x = lo + i * h;
        if (x > kNodes[3]) break;
        Float w = (i == 0) ? 0.5 : 1.0;
        partial += w * Interp1D(kNodes, vals, x);
    }
    CHECK(cdf[3] == doctest::Approx(partial * h).epsilon(1e-4));
}

TEST_CASE("weighted integration applies the pointwise product") {
    auto vals = Tabulate(+[](Float x) { return 2 + 0.1 * x; });
    std::vector<Float> weight(kNodes.begin(), kNodes.end());  // weight = x
    std::vector<Float> cdf(kNodes.size());
    Float total = IntegrateCatmullRom(kNodes, vals, cdf, weight);

    std::vector<Float> product;
    for (size_t i = 0; i < kNodes.size(); ++i)
        product.push_back(vals[i] * weight[i]);
    std::vector<Float> cdf2(kNodes.size());
    Float total2 = IntegrateCatmullRom(kNodes, product, cdf2);
    CHECK(total == doctest::Approx(total2).epsilon(1e-14));
    for (size_t i = 0; i < kNodes.size(); ++i)
        CHECK(cdf[i] == doctest::Approx(cdf2[i]).epsilon(1e-14));
}

TEST_CASE("sampling inverts the tabulated cdf") {
    // Triangular density peaked mid-domain.
    Grid1D nodes{0, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
    std::vector<Float> f;
    for (Float x : nodes) f.push_back(x < 2 ? x : 4 - x);
    std::vector<Float> cdf(nodes.size());
    Float total = IntegrateCatmullRom(nodes, f, cdf);
    REQUIRE(total > 0);

    SUBCASE("round trip against numeric cdf") {
        for (Float u : {0.001, 0.1, 0.37, 0.5, 0.82, 0.999}) {
            Float fval, pdf;
            Float x = SampleCatmullRom(nodes, f, cdf, u, &fval, &pdf);
            CHECK(x >= nodes.front());
            CHECK(x <= nodes.back());
            CHECK(pdf == doctest::Approx(fval / total).epsilon(1e-12));
            // Numeric cdf at x by fine trapezoid of the spline.
            const int kSteps = 20000;
            Float h = (x - nodes.front()) / kSteps, sum = 0;
            for (int i = 0; i <= kSteps; ++i) {
                Float w = (i == 0 || i == kSteps) ? 0.5 : 1.0;
                sum += w * Interp1D(nodes, f, nodes.front() + i * h);
            }
            CHECK(sum * h / total == doctest::Approx(u).epsilon(5e-7));
        }
    }

    SUBCASE("Kolmogorov-Smirnov on a large draw") {
        // Reference: the spline's own cdf by dense independent quadrature
        // (the spline is the actual density sampled; it deviates slightly
        // from the ideal hat near the kink).
        const int kDense = 400000;
        Float lo = nodes.front(), h = (nodes.back() - lo) / kDense;
        std::vector<Float> dense(kDense + 1);
        Float acc = 0, prev = Interp1D(nodes, f, lo);
        dense[0] = 0;
        for (int i = 1; i <= kDense; ++i) {
            Float cur = Interp1D(nodes, f, lo + i * h);
            acc += 0.5 * (prev + cur) * h;
            dense[size_t(i)] = acc;
            prev = cur;
        }
        auto refCdf = [&](Float x) {
            Float fi = (x - lo) / h;
            int i = std::min(int(fi), kDense - 1);
            Float t = fi - i;
            return ((1 - t) * dense[size_t(i)] + t * dense[size_t(i) + 1]) / acc;
        };

        const int kDraws = 100000;
        CounterRng rng(7);
        std::vector<Float> xs(kDraws);
        for (int i = 0; i < kDraws; ++i)
            xs[size_t(i)] = SampleCatmullRom(nodes, f, cdf, rng.Uniform(i, 0));
        std::sort(xs.begin(), xs.end());
        Float ks = 0;
        for (int i = 0; i < kDraws; ++i) {
            Float cdfx = refCdf(xs[size_t(i)]);
            ks = std::max(ks, std::abs(cdfx - Float(i + 1) / kDraws));
            ks = std::max(ks, std::abs(cdfx - Float(i) / kDraws));
        }
        CHECK(ks <= 0.006);
    }
}

TEST_CASE("sampling zero mass is rejected") {
    Grid1D nodes{0, 1, 2};
    std::vector<Float> f{0, 0, 0};
    std::vector<Float> cdf(nodes.size());
    IntegrateCatmullRom(nodes, f, cdf);
    CHECK_THROWS_AS(SampleCatmullRom(nodes, f, cdf, 0.5), ZeroMassError);
}

}  // TEST_SUITE
