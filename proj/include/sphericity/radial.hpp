#pragma once

#include "sphericity/curve.hpp"

#include <cstddef>
#include <vector>

namespace sphericity {

// Distance and radial angle of every sample as seen from an interior point O.
struct RadialMeasurement {
    Point base;
    double h = 0.0;          // refined dist(O, curve)
    double h_s = 0.0;        // arclength of the nearest point
    std::size_t argmin = 0;  // nearest sample
    // Angle at the refined nearest point (zero up to interpolation error).
    double phi_h = 0.0;
    std::vector<double> t;
    // Angle between the radial direction (pointing away from O) and the
    // outward normal, in [0, pi).
    std::vector<double> phi;
    // Same angle signed towards the tangent: sin(phi_signed) = dt/ds.
    std::vector<double> phi_signed;
};

// Throws DomainError if O is not strictly inside the curve.
RadialMeasurement measure_radial(const ClosedCurve& curve, const Point& o);

// kappa - (mu0(t) cos phi - dphi/ds), with the derivative taken along the
// direction of increasing t, on samples whose 5-sample stencil lies on one
// monotone-t arc away from corners. Excluded samples hold NaN.
std::vector<double> curvature_identity_residuals(const ClosedCurve& curve, const RadialMeasurement& radial,
                                                 int corner_band = 2);

// The same identity in the t-parametrisation, kappa = mu0 cos phi -
// sin(phi) dphi/dt, evaluated with dphi/dt = (dphi/ds) / sin(phi).
std::vector<double> curvature_identity_residuals_t(const ClosedCurve& curve, const RadialMeasurement& radial,
                                                   int corner_band = 2);

}  // namespace sphericity
