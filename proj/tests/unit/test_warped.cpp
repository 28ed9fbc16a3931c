#include "property.hpp"
#include "sphericity/errors.hpp"
#include "sphericity/io.hpp"
#include "sphericity/spindle.hpp"
#include "sphericity/warped.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sphericity;
using sphericity::testing::for_each_case;

namespace {

constexpr double kPi = std::numbers::pi;

WarpProfile profile(WarpFamily family, double T) {
    WarpProfile p;
    p.family = family;
    p.T = T;
    return p;
}

WarpProfile cubic(double eps, double T) {
    WarpProfile p = profile(WarpFamily::Cubic, T);
    p.epsilon = eps;
    return p;
}

WarpProfile blend(double w, double k, double T) {
    WarpProfile p = profile(WarpFamily::Blend, T);
    p.weight = w;
    p.k = k;
    return p;
}

WarpProfile perturbed_sine(double delta, double k, double T) {
    WarpProfile p = profile(WarpFamily::PerturbedSine, T);
    p.delta = delta;
    p.k = k;
    return p;
}

std::vector<WarpProfile> certified_profiles() {
    WarpProfile hyp = profile(WarpFamily::Hyperbolic, 2.0);
    WarpProfile sph = profile(WarpFamily::Sphere, 1.4);
    return {profile(WarpFamily::Flat, 2.0), hyp,  sph, cubic(0.05, 2.0), cubic(0.2, 1.5), blend(0.5, 1.0, 2.0),
            perturbed_sine(0.01, 1.0, 1.2), perturbed_sine(0.05, 1.0, 1.0)};
}

RadialFunction radial(double c0, std::vector<Harmonic> hs) { return RadialFunction{c0, std::move(hs)}; }

}  // namespace

TEST(WarpedMetric, ConstantCurvatureFamilies) {
    const WarpedMetric flat = make_warped(profile(WarpFamily::Flat, 2.0));
    EXPECT_EQ(flat.K_lo(), 0.0);
    EXPECT_EQ(flat.K_hi(), 0.0);
    const WarpedMetric hyp = make_warped(profile(WarpFamily::Hyperbolic, 2.0));
    EXPECT_NEAR(hyp.K_lo(), -1.0, 1e-10);
    EXPECT_NEAR(hyp.K_hi(), -1.0, 1e-10);
    for (double t = 0.05; t <= 2.0; t += 0.05) EXPECT_NEAR(hyp.K_finite_difference(t), -1.0, 1e-7);
}

TEST(WarpedMetric, CubicBand) {
    const WarpedMetric m = make_warped(cubic(0.05, 2.0));
    EXPECT_GE(m.K_lo(), -0.3 - 1e-12);
    EXPECT_LT(m.K_hi(), 0.0);
    for (double t = 0.1; t <= 2.0; t += 0.1) {
        const double analytic = -6 * 0.05 * t / (t + 0.05 * t * t * t);
        EXPECT_NEAR(m.K(t), analytic, 1e-14);
        EXPECT_NEAR(m.K_finite_difference(t), analytic, 1e-7);
    }
}

TEST(WarpedMetric, FiniteDifferenceCurvatureAgreesProperty) {
    for (const WarpProfile& p : certified_profiles()) {
        const WarpedMetric m = make_warped(p);
        SCOPED_TRACE(std::string(to_string(p.family)));
        for (int i = 1; i <= 200; ++i) {
            const double t = p.T * i / 200.0;
            ASSERT_NEAR(m.K_finite_difference(t), m.K(t), 1e-7) << "t = " << t;
            ASSERT_GE(m.K(t), m.K_lo() - 1e-9);
            ASSERT_LE(m.K(t), m.K_hi() + 1e-9);
            ASSERT_GT(m.f(t), 0.0);
        }
        EXPECT_NEAR(m.f(0.0), 0.0, 1e-15);
        EXPECT_NEAR(m.df(0.0), 1.0, 1e-12);
    }
}

TEST(WarpedMetric, RejectsWarpLeavingTheRadialRange) {
    try {
        make_warped(profile(WarpFamily::Sphere, 3.5));
        FAIL() << "expected rejection";
    } catch (const RejectionError& e) {
        EXPECT_GE(e.theta(), kPi - 1e-3);
        EXPECT_LE(e.theta(), 3.5);
    }
}

TEST(WarpedMetric, RejectsDeclaredBandViolation) {
    WarpProfile p = cubic(0.05, 2.0);
    p.declared_band = std::pair{-0.2, 0.0};
    try {
        make_warped(p);
        FAIL() << "expected rejection";
    } catch (const RejectionError& e) {
        // K = -0.3 / (1 + 0.05 t^2) drops below -0.2 for t < 2.
        EXPECT_LT(-0.3 / (1 + 0.05 * e.theta() * e.theta()), -0.2);
    }
    p.declared_band = std::pair{-0.3, 0.0};
    EXPECT_NO_THROW(make_warped(p));
}

TEST(CircleNormalCurvature, Families) {
    const WarpedMetric flat = make_warped(profile(WarpFamily::Flat, 2.0));
    const WarpedMetric hyp = make_warped(profile(WarpFamily::Hyperbolic, 2.0));
    const WarpedMetric cub = make_warped(cubic(0.05, 2.0));
    for (double t = 0.1; t <= 2.0; t += 0.1) {
        EXPECT_NEAR(circle_normal_curvature(flat, t), 1.0 / t, 1e-14);
        EXPECT_NEAR(circle_normal_curvature(hyp, t), 1.0 / std::tanh(t), 1e-13);
        const double mu = circle_normal_curvature(cub, t);
        EXPECT_NEAR(mu, (1 + 0.15 * t * t) / (t + 0.05 * t * t * t), 1e-13);
        EXPECT_LE(mu, 1.0 / std::tanh(t));
    }
    EXPECT_THROW(circle_normal_curvature(flat, 0.0), DomainError);
    EXPECT_THROW(circle_normal_curvature(flat, 2.5), DomainError);
}

TEST(MuComparison, ConstantCurvatureIsEquality) {
    for (WarpFamily fam : {WarpFamily::Flat, WarpFamily::Hyperbolic, WarpFamily::Sphere}) {
        WarpProfile p = profile(fam, fam == WarpFamily::Sphere ? 1.5 : 2.0);
        p.k = 1.3;
        const MuComparisonReport rep = verify_mu_comparison(make_warped(p));
        EXPECT_TRUE(rep.pass);
        EXPECT_LT(rep.max_abs_slack, 1e-10) << to_string(fam);
        EXPECT_EQ(rep.count, 1000u);
    }
}

TEST(MuComparison, CertifiedFamiliesPass) {
    for (const WarpProfile& p : certified_profiles()) {
        const WarpedMetric m = make_warped(p);
        const MuComparisonReport rep = verify_mu_comparison(m);
        EXPECT_TRUE(rep.pass) << to_string(p.family);
        EXPECT_GE(rep.min_slack, -1e-9);
    }
}

TEST(MuComparison, ComparisonSpaceFromBand) {
    const Comparison hyp = comparison_for(make_warped(cubic(0.05, 2.0)));
    EXPECT_EQ(hyp.space.kind(), Geometry::Hyperbolic);
    EXPECT_FALSE(hyp.positive);
    // The most negative curvature sits at the pole: K(0) = -6 eps.
    EXPECT_NEAR(hyp.k1 * hyp.k1, 0.3, 1e-15);

    const WarpedMetric ps = make_warped(perturbed_sine(0.05, 1.0, 1.0));
    const Comparison sph = comparison_for(ps);
    EXPECT_TRUE(sph.positive);
    EXPECT_EQ(sph.space.kind(), Geometry::Sphere);
    EXPECT_NEAR(sph.k1, std::sqrt(ps.K_lo()), 1e-15);
    EXPECT_NEAR(sph.k2, std::sqrt(ps.K_hi()), 1e-15);
    EXPECT_GE(ps.K_lo(), 1.0 - 1e-9);

    EXPECT_EQ(comparison_for(make_warped(profile(WarpFamily::Flat, 1.0))).space.kind(), Geometry::Flat);
}

TEST(WarpedCurve, CoordinateCircle) {
    for (const WarpProfile& p : certified_profiles()) {
        const WarpedMetric m = make_warped(p);
        const double c = 0.5 * p.T;
        const WarpedCurve curve = WarpedCurve::make(m, radial(c, {}));
        for (const WarpedSample& s : curve.samples()) {
            ASSERT_NEAR(s.phi, 0.0, 1e-12);
            ASSERT_NEAR(s.kappa, circle_normal_curvature(m, c), 1e-10);
        }
        EXPECT_NEAR(curve.length(), 2 * kPi * m.f(c), 1e-10);
        EXPECT_NEAR(curve.inradius(), c, 1e-15);
        EXPECT_NEAR(curve.circumradius(), c, 1e-15);
    }
}

TEST(WarpedCurve, CoordinateCirclePassesTrivially) {
    const WarpedMetric m = make_warped(profile(WarpFamily::Hyperbolic, 2.0));
    const WarpedReport rep = verify_theorem2_on_warped(m, WarpedCurve::make(m, radial(0.5, {})));
    EXPECT_TRUE(rep.pass);
    EXPECT_NEAR(rep.angle.min_slack, 0.0, 1e-9);
    EXPECT_NEAR(rep.width.d, 0.0, 1e-12);
}

TEST(WarpedCurve, InvalidRadialFunctions) {
    const WarpedMetric m = make_warped(profile(WarpFamily::Hyperbolic, 1.0));
    EXPECT_THROW(WarpedCurve::make(m, radial(0.5, {{3, 0.1, 0.0}})), DomainError);
    EXPECT_THROW(WarpedCurve::make(m, radial(0.95, {{2, 0.1, 0.0}})), RejectionError);
    EXPECT_THROW(WarpedCurve::make(m, radial(0.05, {{2, 0.1, 0.0}})), RejectionError);
}

TEST(WarpedCurve, CurvatureMatchesModelMeasurement) {
    // Embed t = rho(theta) in the hyperboloid and the round sphere through
    // polar coordinates and measure curvature there.
    struct Case {
        WarpProfile p;
        SpaceForm sp;
    };
    for (const Case& c : {Case{profile(WarpFamily::Hyperbolic, 2.0), SpaceForm::hyperbolic(1.0)},
                          Case{profile(WarpFamily::Sphere, 1.4), SpaceForm::sphere(1.0)},
                          Case{profile(WarpFamily::Flat, 2.0), SpaceForm::flat()}}) {
        const WarpedMetric m = make_warped(c.p);
        const WarpedCurve curve = WarpedCurve::make(m, radial(0.8, {{2, 0.05, 0.02}, {4, 0.01, 0.0}}));
        const Point o = origin(c.sp);
        const Frame f = frame_at(c.sp, o);
        std::vector<Point> pts;
        for (const WarpedSample& s : curve.samples()) pts.push_back(polar_point(c.sp, o, f, s.theta, s.t));
        const auto kappa = measure_curvatures(c.sp, pts, std::vector<bool>(pts.size(), false));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            ASSERT_NEAR(curve.samples()[i].kappa, kappa[i], 1e-6) << to_string(c.sp.kind()) << " i = " << i;
        }
    }
}

TEST(VerifyWarped, EllipseInHyperbolicWarp) {
    const WarpedMetric m = make_warped(profile(WarpFamily::Hyperbolic, 2.0));
    const WarpedCurve ok = WarpedCurve::make(m, radial(0.8, {{2, 0.03, 0.0}}));
    const WarpedReport rep = verify_theorem2_on_warped(m, ok);
    EXPECT_TRUE(rep.pass);
    EXPECT_GT(rep.kmin, 1.0);
    EXPECT_GE(rep.angle.min_slack, -1e-9);
    EXPECT_GE(rep.width.margin, -1e-7);

    // The 0.1 amplitude ellipse is not horocyclically convex: kmin ~ 0.9595.
    const WarpedCurve bad = WarpedCurve::make(m, radial(0.8, {{2, 0.1, 0.0}}));
    EXPECT_NEAR(bad.kmin(), 0.9595, 1e-3);
    EXPECT_THROW(verify_theorem2_on_warped(m, bad), HypothesisError);
}

TEST(VerifyWarped, EllipseInCubicWarp) {
    const WarpedMetric m = make_warped(cubic(0.05, 2.0));
    const WarpedReport rep = verify_theorem2_on_warped(m, WarpedCurve::make(m, radial(0.8, {{2, 0.1, 0.0}})));
    EXPECT_TRUE(rep.pass);
    EXPECT_GT(rep.kmin, rep.comparison.k1);
    EXPECT_EQ(rep.comparison.space.kind(), Geometry::Hyperbolic);
}

TEST(VerifyWarped, RandomCurvesProperty) {
    for (const WarpProfile& p : {cubic(0.05, 2.0), blend(0.5, 1.0, 2.0), perturbed_sine(0.05, 1.0, 1.0)}) {
        const WarpedMetric m = make_warped(p);
        for_each_case(61, 5, [&](Rng& rng, int) {
            const RadialFunction rho = random_radial_function(m, rng);
            const WarpedReport rep = verify_theorem2_on_warped(m, WarpedCurve::make(m, rho));
            EXPECT_TRUE(rep.pass) << to_string(p.family);
            EXPECT_GE(rep.angle.min_slack, -1e-9);
            EXPECT_GE(rep.width.margin, -1e-7);
            EXPECT_LE(rep.width.d, rep.width.d0 + 1e-7);
        });
    }
}

TEST(WarpedJson, RoundTrip) {
    for (const WarpProfile& p : certified_profiles()) {
        const WarpedMetric m = make_warped(p);
        const Json j = metric_to_json(m);
        EXPECT_EQ(j.at("schema"), "sphericity.warped_metric/1");
        const WarpedMetric back = metric_from_json(Json::parse(j.dump()));
        EXPECT_EQ(back.band(), m.band());
        EXPECT_EQ(metric_to_json(back).dump(), j.dump());

        const WarpedCurve c = WarpedCurve::make(m, radial(0.5 * p.T, {{2, 0.02 * p.T, 0.01 * p.T}}), 512);
        const Json cj = warped_curve_to_json(m, c);
        EXPECT_EQ(cj.at("schema"), "sphericity.warped_curve/1");
        const WarpedCurve cb = warped_curve_from_json(back, Json::parse(cj.dump()));
        ASSERT_EQ(cb.samples().size(), c.samples().size());
        EXPECT_EQ(cb.kmin(), c.kmin());
        EXPECT_EQ(warped_curve_to_json(back, cb).dump(), cj.dump());
    }
}
