#pragma once

#include "sphericity/curve.hpp"
#include "sphericity/numerics.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sphericity {

struct SamplingOptions {
    std::size_t samples = 4096;
    // Double the sample count until the curvature measured at two
    // resolutions agrees to `agreement` (smooth generators only).
    bool adaptive = true;
    std::size_t max_samples = 65536;
    double agreement = 1e-7;
};

ClosedCurve make_circle(const SpaceForm& space, const Point& center, double k0,
                        std::size_t samples = 4096);

// Two symmetric arcs of curvature k0 with inradius r about the origin. The arc
// centres sit on the first frame axis, the corners on the second.
ClosedCurve make_lune(const SpaceForm& space, double k0, double r, std::size_t samples = 4096);

// Boundary of the intersection of radius-R discs, R = circle radius for k0.
ClosedCurve make_disc_intersection(const SpaceForm& space, std::span<const Point> centers, double k0,
                                   std::size_t samples = 4096);

struct Harmonic {
    int n;
    double a;
    double b;
};

// Planar support function h(theta) = a0 + sum (a_n cos n theta + b_n sin n theta), n >= 2.
struct SupportFunction {
    double a0 = 1.0;
    std::vector<Harmonic> harmonics;

    double h(double theta) const;
    double dh(double theta) const;
    // Radius of curvature h + h''.
    double rho(double theta) const;
    // Arclength from theta = 0.
    double arclength(double theta) const;
    double length() const;
};

// Rejects (RejectionError) unless 0 < rho <= 1/k0_target everywhere.
ClosedCurve make_support_curve(const SupportFunction& support, double k0_target,
                               const SamplingOptions& options = {});

// Geodesic curvature as a function of the phase u = s/L in [0, 1).
using CurvatureProfile = std::function<double(double)>;

struct FrameOdeOptions {
    SamplingOptions sampling;
    int max_iterations = 50;
    // Largest closure residual accepted; iterations continue towards roundoff.
    double tolerance = 1e-12;
};

struct FrameOdeSolution {
    double length;
    // Curvature correction c0 cos(2 pi u) + c1 sin(2 pi u) that closes the
    // curve; it vanishes up to integration error for symmetric profiles.
    double offset_cos;
    double offset_sin;
    int iterations;
    double residual;
};

FrameOdeSolution solve_frame_ode_closure(const SpaceForm& space, const CurvatureProfile& profile,
                                         double length_guess, std::size_t steps,
                                         const FrameOdeOptions& options = {});

// Integrates x'' = -c x + kappa J x' from the origin along the first frame
// axis; closure is solved for the length and a first-harmonic curvature
// correction (three unknowns against endpoint and end-tangent mismatch).
ClosedCurve make_frame_ode_curve(const SpaceForm& space, const CurvatureProfile& profile,
                                 double length_guess, const FrameOdeOptions& options = {});

// kappa(u) = base + sum (a_n cos 2 pi n u + b_n sin 2 pi n u).
struct FourierProfile {
    double base = 1.0;
    std::vector<Harmonic> harmonics;

    double operator()(double u) const;
};

// Length of the circle of curvature k0 (initial guess for closure).
double circle_length(const SpaceForm& space, double k0);

// Seeded families used by the property suites and the CLI.
// Support function with a0 = 1, harmonics 2..max_harmonic and radius of
// curvature bounded below by 0.15.
SupportFunction random_support_function(Rng& rng, int max_harmonic = 6);
// Largest radius of curvature (grid search refined by golden section).
double max_radius_of_curvature(const SupportFunction& support);
// Curvature profile with harmonics 2..4 staying above 0.3 k1 (sphere) or
// 1.2 k1 (hyperbolic plane, plane: 0.3).
FourierProfile random_curvature_profile(const SpaceForm& space, Rng& rng);
// 2..5 centres within 0.6 R of the origin, so every disc contains it.
std::vector<Point> random_disc_centers(const SpaceForm& space, double k0, Rng& rng);

}  // namespace sphericity
