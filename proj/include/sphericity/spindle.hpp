#pragma once

#include "sphericity/space_form.hpp"

namespace sphericity {

// Lune of curvature k0 with inradius r about the midpoint O of its chord; rho
// is the circumradius about O (the distance to the corners).
struct SpindleParams {
    SpaceForm space;
    double k0;
    double R;
    double r;
    double rho;
    double d;
};

SpindleParams spindle(const SpaceForm& space, double k0, double r);
double spindle_rho(const SpaceForm& space, double k0, double r);
double spindle_width(const SpaceForm& space, double k0, double r);

struct SpindleOptimum {
    double r0;
    double d0;
};

SpindleOptimum spindle_optimum(const SpaceForm& space, double k0);
// Golden-section maximisation of spindle_width over [0, R].
SpindleOptimum spindle_optimum_numeric(const SpaceForm& space, double k0, double tol = 1e-12);

// Alternative closed form of d0 in terms of k0 and k1 directly (curved spaces).
double d0_rewritten(const SpaceForm& space, double k0);

// Stationarity of d(r): cos k1R - cos^2 k1(R - r) on the sphere, the cosh
// analogue in the hyperbolic plane, R^2 - 2 (R - r)^2 in the plane.
double stationarity_residual(const SpaceForm& space, double k0, double r);

}  // namespace sphericity
