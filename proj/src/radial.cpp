#include "sphericity/radial.hpp"

#include "sphericity/errors.hpp"
#include "sphericity/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace sphericity {

RadialMeasurement measure_radial(const ClosedCurve& curve, const Point& o) {
    const SpaceForm& space = curve.space();
    validate(space, o);
    if (!curve.contains(o)) throw DomainError("base point is not inside the curve");

    RadialMeasurement m;
    m.base = o;
    const std::size_t n = curve.size();
    m.t.resize(n);
    m.phi.resize(n);
    m.phi_signed.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CurveSample& smp = curve[i];
        const Tangent back = log_map(space, smp.point, o);
        const double t = space.norm(back.vec);
        if (!(t > 0.0)) throw DomainError("base point lies on the curve");
        const Tangent radial{smp.point, -back.vec / t};
        m.t[i] = t;
        m.phi[i] = angle_between(space, radial, smp.normal_vector());
        m.phi_signed[i] = std::atan2(space.inner(radial.vec, smp.tangent), space.inner(radial.vec, smp.normal_out));
    }
    const CurveDistance near = nearest_point(curve, o);
    if (!(near.distance > 1e-12)) throw DomainError("base point lies on the curve");
    m.h = near.distance;
    m.h_s = near.s;
    m.argmin = near.index;

    const double ds = 1e-3 * curve.total_length() / static_cast<double>(n);
    const Point foot = curve.point_at(near.s);
    const Vec3 chord = log_map(space, foot, curve.point_at(near.s + ds)).vec -
                       log_map(space, foot, curve.point_at(near.s - ds)).vec;
    const Vec3 away = -log_map(space, foot, o).vec;
    m.phi_h = std::asin(std::min(1.0, std::abs(space.inner(away, chord)) / (space.norm(away) * space.norm(chord))));
    return m;
}

namespace {

// Stencil i-2..i+2 lies on one monotone arc of t and away from corners.
bool usable(const ClosedCurve& curve, const RadialMeasurement& radial, std::size_t i, int corner_band) {
    const std::size_t n = curve.size();
    if (curve.near_corner(i, corner_band + 2)) return false;
    const double sign = radial.phi_signed[i];
    for (std::size_t k = 0; k < 5; ++k) {
        const std::size_t j = (i + n + k - 2) % n;
        if (!(radial.phi_signed[j] * sign > 0.0)) return false;
    }
    return true;
}

std::array<double, 5> stencil_s(const ClosedCurve& curve, std::size_t i) {
    const std::size_t n = curve.size();
    std::array<double, 5> s{};
    for (int k = 0; k < 5; ++k) {
        const std::size_t j = (i + n + k - 2) % n;
        double v = curve[j].s - curve[i].s;
        if (v > 0.5 * curve.total_length()) v -= curve.total_length();
        if (v < -0.5 * curve.total_length()) v += curve.total_length();
        s[k] = v;
    }
    return s;
}

}  // namespace

std::vector<double> curvature_identity_residuals(const ClosedCurve& curve, const RadialMeasurement& radial,
                                                 int corner_band) {
    const SpaceForm& space = curve.space();
    const std::size_t n = curve.size();
    std::vector<double> res(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) {
        if (!usable(curve, radial, i, corner_band)) continue;
        const auto w = lagrange_weights(stencil_s(curve, i), 0.0, 1);
        double dphi = 0.0;
        for (int k = 0; k < 5; ++k) dphi += w[k] * radial.phi_signed[(i + n + k - 2) % n];
        res[i] = curve[i].kappa - (mu0(space, radial.t[i]) * std::cos(radial.phi_signed[i]) - dphi);
    }
    return res;
}

std::vector<double> curvature_identity_residuals_t(const ClosedCurve& curve, const RadialMeasurement& radial,
                                                   int corner_band) {
    const SpaceForm& space = curve.space();
    const std::size_t n = curve.size();
    std::vector<double> res(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < n; ++i) {
        if (!usable(curve, radial, i, corner_band)) continue;
        std::array<double, 5> t{};
        for (int k = 0; k < 5; ++k) t[k] = radial.t[(i + n + k - 2) % n];
        const auto w = lagrange_weights(t, radial.t[i], 1);
        double dphi_dt = 0.0;
        for (int k = 0; k < 5; ++k) dphi_dt += w[k] * radial.phi[(i + n + k - 2) % n];
        const double phi = radial.phi[i];
        res[i] = curve[i].kappa - (mu0(space, radial.t[i]) * std::cos(phi) - std::sin(phi) * dphi_dt);
    }
    return res;
}

}  // namespace sphericity
