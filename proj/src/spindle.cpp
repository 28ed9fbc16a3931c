#include "sphericity/spindle.hpp"

#include "sphericity/errors.hpp"
#include "sphericity/numerics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace sphericity {

namespace {

double radius_checked(const SpaceForm& space, double k0, double r) {
    const double R = circle_radius_of_curvature(space, k0);
    if (!(r >= 0.0 && r <= R)) throw DomainError(fmt::format("spindle parameter r = {} outside [0, {}]", r, R));
    return R;
}

}  // namespace

double spindle_rho(const SpaceForm& space, double k0, double r) {
    const double R = radius_checked(space, k0, r);
    const double k = space.k1();
    switch (space.kind()) {
        case Geometry::Flat:
            return std::sqrt(r * (2.0 * R - r));
        case Geometry::Sphere:
            return std::atan2(std::sqrt(std::max(0.0, std::sin(k * (2.0 * R - r)) * std::sin(k * r))),
                              std::cos(k * R)) / k;
        case Geometry::Hyperbolic:
            return std::asinh(std::sqrt(std::sinh(k * (2.0 * R - r)) * std::sinh(k * r)) /
                              std::cosh(k * (R - r))) / k;
    }
    return 0.0;
}

double spindle_width(const SpaceForm& space, double k0, double r) {
    return std::max(0.0, spindle_rho(space, k0, r) - r);
}

SpindleParams spindle(const SpaceForm& space, double k0, double r) {
    const double R = radius_checked(space, k0, r);
    const double rho = spindle_rho(space, k0, r);
    return {space, k0, R, r, rho, std::max(0.0, rho - r)};
}

SpindleOptimum spindle_optimum(const SpaceForm& space, double k0) {
    const double R = circle_radius_of_curvature(space, k0);
    const double k = space.k1();
    // a = rho(r0) = R - r0
    double a = 0.0;
    switch (space.kind()) {
        case Geometry::Flat:
            return {1.0 / (k0 * (2.0 + std::numbers::sqrt2)), (std::numbers::sqrt2 - 1.0) / k0};
        case Geometry::Sphere:
            a = std::atan2(std::numbers::sqrt2 * std::sin(0.5 * k * R), std::sqrt(std::cos(k * R))) / k;
            break;
        case Geometry::Hyperbolic:
            a = std::asinh(std::numbers::sqrt2 * std::sinh(0.5 * k * R)) / k;
            break;
    }
    return {std::max(0.0, R - a), 2.0 * a - R};
}

SpindleOptimum spindle_optimum_numeric(const SpaceForm& space, double k0, double tol) {
    const double R = circle_radius_of_curvature(space, k0);
    const Extremum e = golden_section_max([&](double r) { return spindle_rho(space, k0, r) - r; }, 0.0, R, tol);
    return {e.x, e.value};
}

double d0_rewritten(const SpaceForm& space, double k0) {
    const double k = space.k1();
    switch (space.kind()) {
        case Geometry::Flat:
            if (!(k0 > 0.0)) throw DomainError(fmt::format("plane needs k0 > 0, got {}", k0));
            return (std::numbers::sqrt2 - 1.0) / k0;
        case Geometry::Sphere:
            if (!(k0 > 0.0)) throw DomainError(fmt::format("sphere needs k0 > 0, got {}", k0));
        {
            // acos(y) with y = sqrt(k0) / (k0^2 + k1^2)^(1/4), taking 1 - y^2 without cancellation
            const double q = std::hypot(k0, k);
            const double y = std::sqrt(k0 / q);
            const double w = k / std::sqrt(q * (q + k0));
            return (2.0 * std::atan2(w, y) - std::atan2(k, k0)) / k;
        }
        case Geometry::Hyperbolic:
            if (!(k0 > k)) throw DomainError(fmt::format("hyperbolic plane needs k0 > k1 = {}, got {}", k, k0));
        {
            const double q = std::sqrt((k0 - k) * (k0 + k));
            const double w = k / std::sqrt(q * (q + k0));
            return (2.0 * std::asinh(w) - std::atanh(k / k0)) / k;
        }
    }
    return 0.0;
}

double stationarity_residual(const SpaceForm& space, double k0, double r) {
    const double R = radius_checked(space, k0, r);
    const double k = space.k1();
    switch (space.kind()) {
        case Geometry::Flat:
            return R * R - 2.0 * (R - r) * (R - r);
        case Geometry::Sphere: {
            const double c = std::cos(k * (R - r));
            return std::cos(k * R) - c * c;
        }
        case Geometry::Hyperbolic: {
            const double c = std::cosh(k * (R - r));
            return std::cosh(k * R) - c * c;
        }
    }
    return 0.0;
}

}  // namespace sphericity
