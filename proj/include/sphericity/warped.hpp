#pragma once

#include "sphericity/bounds.hpp"
#include "sphericity/generators.hpp"
#include "sphericity/numerics.hpp"
#include "sphericity/space_form.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace sphericity {

// Rotationally symmetric metrics dt^2 + f(t)^2 dtheta^2 with a smooth pole at
// t = 0 (f(0) = 0, f'(0) = 1).
enum class WarpFamily {
    Flat,          // t
    Hyperbolic,    // sinh(kt) / k
    Sphere,        // sin(kt) / k
    Cubic,         // t + eps t^3
    Blend,         // (1 - w) t + w sinh(kt) / k
    PerturbedSine  // g(akt) / (ak), g = sin + delta sin^3, a = 1 / sqrt(1 - 6 delta)
};

std::string_view to_string(WarpFamily family);
WarpFamily warp_family_from_string(std::string_view name);

struct WarpProfile {
    WarpFamily family = WarpFamily::Flat;
    double k = 1.0;
    double epsilon = 0.0;
    double weight = 0.0;
    double delta = 0.0;
    double T = 1.0;
    // When present, the measured band must lie inside it.
    std::optional<std::pair<double, double>> declared_band;
};

class WarpedMetric {
public:
    // Samples K at 1e4 radii in (0, T]; RejectionError (carrying the radius)
    // when f <= 0 or K leaves the declared band.
    static WarpedMetric make(const WarpProfile& profile);

    const WarpProfile& profile() const { return profile_; }
    double T() const { return profile_.T; }
    double K_lo() const { return band_.first; }
    double K_hi() const { return band_.second; }
    std::pair<double, double> band() const { return band_; }

    double f(double t) const;
    double df(double t) const;
    double ddf(double t) const;
    // Closed-form Gaussian curvature -f''/f (finite at the pole).
    double K(double t) const;
    // Fourth-order central difference of f'' divided by -f.
    double K_finite_difference(double t) const;

private:
    explicit WarpedMetric(WarpProfile p) : profile_(std::move(p)) {}
    WarpProfile profile_;
    std::pair<double, double> band_{0.0, 0.0};
};

WarpedMetric make_warped(const WarpProfile& profile);

// f'(t) / f(t); DomainError outside (0, T].
double circle_normal_curvature(const WarpedMetric& metric, double t);

// Constant-curvature comparison for a curvature band: nonpositive bands
// K in [-k1^2, 0] compare with the hyperbolic plane of curvature -k1^2 (the
// plane when k1 = 0); positive bands K in [k1^2, k2^2] with the sphere of
// radius 1/k1. Mixed bands raise HypothesisError.
struct Comparison {
    SpaceForm space = SpaceForm::flat();
    bool positive = false;
    double k1 = 0.0;
    double k2 = 0.0;
};

Comparison comparison_for(const WarpedMetric& metric);

struct MuComparisonReport {
    Comparison comparison;
    double min_slack = 0.0;
    double max_abs_slack = 0.0;
    double argmin_t = 0.0;
    std::size_t count = 0;
    bool pass = false;
};

// mu_n(t) <= mu0(t) at `radii` evenly spaced radii in (0, T].
MuComparisonReport verify_mu_comparison(const WarpedMetric& metric, std::size_t radii = 1000,
                                        double tolerance = 1e-9);

// Closed curve t = rho(theta) around the pole. Only even harmonics are
// allowed, so the curve is symmetric under the half turn and the pole is the
// centre of its inscribed disc.
struct RadialFunction {
    double c0 = 0.5;
    std::vector<Harmonic> harmonics;

    double operator()(double theta) const;
    double derivative(double theta) const;
    double second_derivative(double theta) const;
};

struct WarpedSample {
    double theta;
    double t;
    double dt;
    double ddt;
    double s;
    double kappa;
    double phi;
};

class WarpedCurve {
public:
    // rho', rho'' by periodic fourth-order central differences.
    static WarpedCurve make(const WarpedMetric& metric, const RadialFunction& rho, std::size_t samples = 4096);

    const std::vector<WarpedSample>& samples() const { return samples_; }
    const RadialFunction& radial() const { return rho_; }
    double length() const { return length_; }
    double kmin() const { return kmin_; }
    double inradius() const { return r_; }
    double circumradius() const { return rho1_; }

private:
    WarpedCurve() = default;
    RadialFunction rho_;
    std::vector<WarpedSample> samples_;
    double length_ = 0.0;
    double kmin_ = 0.0;
    double r_ = 0.0;
    double rho1_ = 0.0;
};

// Seeded radial function (harmonics 2, 4, 6) drawn until the curve meets the
// hypotheses of the metric's comparison with a 1e-5 curvature margin;
// HypothesisError after `max_tries` draws.
RadialFunction random_radial_function(const WarpedMetric& metric, Rng& rng, std::size_t samples = 4096,
                                      int max_tries = 1000);

// Geodesic curvature of t = rho(theta) from rho, rho', rho''.
double warped_geodesic_curvature(const WarpedMetric& metric, double rho, double drho, double ddrho);

struct WarpedWidth {
    double r = 0.0;
    double rho1 = 0.0;
    double d = 0.0;
    double k0_used = 0.0;
    double d0 = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct WarpedReport {
    Comparison comparison;
    double kmin = 0.0;
    AngleReport angle;
    WarpedWidth width;
    bool pass = false;
};

struct WarpedOptions {
    double angle_tolerance = 1e-9;
    double k0_margin = 1e-6;
    double width_tolerance = 1e-7;
};

// Angle bound about the pole and layer width about the inscribed centre, both
// against the comparison space form. HypothesisError when the curve's kmin or
// extent violates the band's hypotheses.
WarpedReport verify_theorem2_on_warped(const WarpedMetric& metric, const WarpedCurve& curve,
                                       const WarpedOptions& options = {});

}  // namespace sphericity
