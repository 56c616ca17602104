// Copyright (c) 2026 The bsrt Authors.
// SPDX-License-Identifier: Apache-2.0

#include <bsrt/errors.h>
#include <bsrt/rng.h>
#include <bsrt/wrappedcauchy.h>
#include <cmath>
#include <doctest.h>

using namespace bsrt;

namespace {

// Independent density oracle: the Wrapped Cauchy as its Fourier cosine
// series, pdf(phi; c) = (1/2pi) (1 + 2 sum_k c^k cos(k phi)), truncated once
// the tail is below 1e-16. Deliberately shares nothing with the closed form.
double SeriesPdf(double phi, double c, int terms = 2000) {
    double sum = 1;
    double ck = 1;
    for (int k = 1; k <= terms; ++k) {
        ck *= c;
        sum += 2 * ck * std::cos(k * phi);
        if (ck < 1e-16) break;
    }
    return sum / (2 * Pi);
}

// Composite Simpson of a profile over [-pi, pi].
template <typename F>
double Simpson(F&& f, int n = 1 << 12) {
    double sum = f(-Pi) + f(Pi);
    for (int i = 1; i < n; ++i)
        sum += f(-Pi + 2 * Pi * i / n) * (i % 2 ? 4.0 : 2.0);
    return sum * (2 * Pi / n) / 3;
}

}  // namespace

TEST_SUITE("wrappedcauchy") {

TEST_CASE("wc pdf matches the cosine series and integrates to one") {
    for (double c : {0.0, 0.3, 0.9})
        for (double phi : {0.0, 0.7, 2.0, Pi})
            CHECK(WcPdf(phi, c) == doctest::Approx(SeriesPdf(phi, c)).epsilon(1e-12));
    for (double c : {0.0, 0.5, 0.9})
        CHECK(Simpson([c](double phi) { return WcPdf(phi, c); }, 1 << 14) ==
              doctest::Approx(1.0).epsilon(1e-9));
    // c = 0 degenerates to the uniform density.
    CHECK(WcPdf(1.234, 0) == 1 / (2 * Pi));
    // Even in phi; max at 0, min at pi.
    for (double phi : {0.4, 1.3, 2.9})
        CHECK(WcPdf(phi, 0.7) == doctest::Approx(WcPdf(-phi, 0.7)).epsilon(1e-15));
    CHECK(WcPdf(0, 0.7) > WcPdf(1.5, 0.7));
    CHECK(WcPdf(1.5, 0.7) > WcPdf(Pi, 0.7));
}

TEST_CASE("wc cdf endpoints, monotonicity, derivative, inverse round trip") {
    for (double c : {0.0, 0.5, 0.9, 0.99}) {
        CHECK(WcCdf(-Pi, c) == 0);
        CHECK(WcCdf(Pi, c) == 1);
        CHECK(WcCdf(0, c) == 0.5);
        double prev = 0;
        for (int i = 1; i <= 2000; ++i) {
            double cdf = WcCdf(-Pi + 2 * Pi * i / 2000.0, c);
            CHECK(cdf >= prev);
            prev = cdf;
        }
        for (int i = 0; i <= 1000; ++i) {
            double u = (i + 0.5) / 1001.0;
            CHECK(WcCdf(WcInvCdf(u, c), c) == doctest::Approx(u).epsilon(1e-12));
        }
        CHECK(WcInvCdf(0, c) == -Pi);
        CHECK(WcInvCdf(1, c) == Pi);
    }
    // d cdf / d phi = pdf (central difference).
    for (double c : {0.2, 0.8})
        for (double phi : {0.3, 1.5, 2.8}) {
            double h = 1e-6;
            double d = (WcCdf(phi + h, c) - WcCdf(phi - h, c)) / (2 * h);
            CHECK(d == doctest::Approx(WcPdf(phi, c)).epsilon(1e-6));
        }
}

TEST_CASE("gwc profile, cdf and the energy relation") {
    GwcParams p;
    p.alpha = 0.11;
    p.beta = 1.7;
    p.c = 0.62;
    CHECK(GwcEval(1.3, p) == 0.11 + 1.7 * WcPdf(1.3, 0.62));
    CHECK(GwcCdf(-Pi, p) == 0);
    CHECK(GwcCdf(Pi, p) == 1);
    CHECK(Simpson([&](double phi) { return GwcEval(phi, p); }) ==
          doctest::Approx(2 * Pi * p.alpha + p.beta).epsilon(1e-10));

    // Pure pedestal: the cdf is linear in phi.
    GwcParams flat;
    flat.alpha = 0.25;
    flat.beta = 0;
    for (double phi : {-2.0, 0.5, 3.0})
        CHECK(GwcCdf(phi, flat) == doctest::Approx((phi + Pi) / (2 * Pi)).epsilon(1e-14));

    CHECK(EnergyFromParams(p, 2.5) == doctest::Approx((2 * Pi * 0.11 + 1.7) * 2.5));
    CHECK(AlphaFromEnergy(EnergyFromParams(p, 2.5), p.beta, 2.5) ==
          doctest::Approx(p.alpha).epsilon(1e-13));
    CHECK_THROWS_AS(AlphaFromEnergy(1.0, 0.5, 0), InvalidInputError);

    GwcParams zero;
    CHECK_THROWS_AS(GwcCdf(0, zero), ZeroMassError);
    CHECK_THROWS_AS(GwcSample(0.5, zero), ZeroMassError);
}

TEST_CASE("gwc sampling inverts the cdf") {
    GwcParams pureWc;
    pureWc.beta = 1;
    pureWc.c = 0.9;
    GwcParams pureFlat;
    pureFlat.alpha = 0.4;
    GwcParams mixed;
    mixed.alpha = 0.1;
    mixed.beta = 2;
    mixed.c = 0.7;
    // Negative pedestal with the profile floor exactly at zero: the hardest
    // case, the density vanishes at phi = +-pi.
    GwcParams pinned;
    pinned.beta = 1.5;
    pinned.c = 0.6;
    pinned.alpha = -pinned.beta * WcPdf(Pi, pinned.c);

    for (const GwcParams& p : {pureWc, pureFlat, mixed, pinned}) {
        double prev = -Pi;
        for (int i = 0; i <= 4096; ++i) {
            double u = i / 4096.0;
            double phi = GwcSample(u, p);
            CHECK(std::abs(GwcCdf(phi, p) - u) <= 1e-9);
            CHECK(phi >= prev);  // monotone in u
            prev = phi;
            CHECK(GwcSample(u, p) == phi);  // deterministic
        }
        CHECK(GwcSample(0, p) == -Pi);
        CHECK(GwcSample(1, p) == Pi);
    }
}

TEST_CASE("three-anchor fit recovers valid parameters") {
    const AnchorSet anchors = FitAnchors();
    const double phi1 = std::acos(anchors.cosPhi1);
    const double phi2 = std::acos(anchors.cosPhi2);
    const double phi3 = std::acos(anchors.cosPhi3);
    CounterRng rng(7);
    for (int i = 0; i < 1000; ++i) {
        GwcParams in;
        in.alpha = Sqr(rng.Uniform(i, 0)) * 2;
        in.beta = 1e-3 + 5 * rng.Uniform(i, 1);
        in.c = 0.05 + 0.9 * rng.Uniform(i, 2);
        GwcParams out = GwcFit(GwcEval(phi1, in), GwcEval(phi2, in),
                               GwcEval(phi3, in), anchors);
        CHECK(!out.clamped);
        CHECK(!out.degenerate);
        CHECK(out.alpha == doctest::Approx(in.alpha).epsilon(1e-8));
        CHECK(out.beta == doctest::Approx(in.beta).epsilon(1e-8));
        CHECK(out.c == doctest::Approx(in.c).epsilon(1e-8));
    }

    // A negative pedestal with positive floor is representable and recovered.
    GwcParams neg;
    neg.beta = 2;
    neg.c = 0.55;
    neg.alpha = -0.5 * neg.beta * WcPdf(Pi, neg.c);
    GwcParams out = GwcFit(GwcEval(phi1, neg), GwcEval(phi2, neg),
                           GwcEval(phi3, neg), anchors);
    CHECK(!out.clamped);
    CHECK(out.alpha == doctest::Approx(neg.alpha).epsilon(1e-8));
    CHECK(out.beta == doctest::Approx(neg.beta).epsilon(1e-8));
    CHECK(out.c == doctest::Approx(neg.c).epsilon(1e-8));
}

TEST_CASE("fit degenerate and fallback branches") {
    // Equal anchors: exactly (0, 2 pi f, 0).
    GwcParams d = GwcFit(0.4, 0.4, 0.4);
    CHECK(d.degenerate);
    CHECK(d.alpha == 0);
    CHECK(d.beta == 2 * Pi * 0.4);
    CHECK(d.c == 0);
    // All-zero profile.
    GwcParams z = GwcFit(0, 0, 0);
    CHECK(z.degenerate);
    CHECK(z.beta == 0);

    const AnchorSet anchors = FitAnchors();
    const double phi1 = std::acos(anchors.cosPhi1);
    const double phi2 = std::acos(anchors.cosPhi2);
    const double phi3 = std::acos(anchors.cosPhi3);

    // Anchors from a floor-zero profile with the middle one pushed up: the
    // exact solve would need a floor below zero, so a refit handles it; the
    // outer anchors are still reproduced and the result stays a density.
    GwcParams pinned;
    pinned.beta = 1.5;
    pinned.c = 0.6;
    pinned.alpha = -pinned.beta * WcPdf(Pi, pinned.c);
    double f1 = GwcEval(phi1, pinned), f3 = GwcEval(phi3, pinned);
    GwcParams fb = GwcFit(f1, 1.05 * GwcEval(phi2, pinned), f3, anchors);
    CHECK(fb.beta >= 0);
    CHECK(fb.c >= 0);
    CHECK(fb.c < 1);
    CHECK(2 * Pi * fb.alpha + fb.beta > 0);
    CHECK(GwcEval(phi1, fb) == doctest::Approx(f1).epsilon(1e-9));
    CHECK(GwcEval(phi3, fb) == doctest::Approx(f3).epsilon(1e-9));

    // No concentration reproduces the middle anchor here (the implied lobe
    // would be backward-peaked): the pedestal-free two-anchor refit matches
    // the outer anchors.
    GwcParams ta = GwcFit(0.5, 0.1, 0.4, anchors);
    CHECK(ta.clamped);
    CHECK(ta.alpha == 0);
    CHECK(GwcEval(phi1, ta) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(GwcEval(phi3, ta) == doctest::Approx(0.4).epsilon(1e-9));

    // Equal outer anchors with a dip in the middle: nothing in the family
    // applies, the flat last resort keeps the anchor mean.
    GwcParams fl = GwcFit(0.3, 0.2, 0.3, anchors);
    CHECK(fl.clamped);
    CHECK(fl.alpha == 0);
    CHECK(fl.c == 0);
    CHECK(fl.beta == doctest::Approx(2 * Pi * (0.3 + 0.2 + 0.3) / 3).epsilon(1e-14));

    CHECK_THROWS_AS(GwcFit(-1, 0, 0), InvalidInputError);
    CHECK_THROWS_AS(GwcFit(std::nan(""), 0.1, 0.1), InvalidInputError);
}

}  // TEST_SUITE
