#include "sphericity/bounds.hpp"

#include "sphericity/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace sphericity {

AngleBound make_angle_bound(const SpaceForm& space, double k0, double h) {
    const double R = circle_radius_of_curvature(space, k0);
    if (!(h >= 0.0)) throw DomainError(fmt::format("distance h = {} must be nonnegative", h));
    if (h > R + 1e-12) throw DomainError(fmt::format("distance h = {} exceeds the circle radius R = {}", h, R));
    return {space, k0, R, std::min(h, R)};
}

double cos_phi_lower_bound(const AngleBound& b) {
    const SpaceForm& sp = b.space;
    const double v = std::sqrt(std::max(0.0, sp.sn(2.0 * b.R - b.h) * sp.sn(b.h))) / sp.sn(b.R);
    return std::min(1.0, v);
}

double cos_phi_weak_bound(const AngleBound& b) {
    return std::min(1.0, b.space.sn(b.h) / b.space.sn(b.R));
}

double circle_exact_angle(const SpaceForm& space, double R, double h, double alpha) {
    if (!(R > 0.0) || !(R < space.diameter())) throw DomainError(fmt::format("invalid circle radius {}", R));
    if (space.kind() == Geometry::Sphere && R > 0.5 * space.diameter() + 1e-12) {
        throw DomainError("circle radius exceeds a quarter great circle");
    }
    if (!(h >= 0.0 && h <= R)) throw DomainError(fmt::format("h = {} must lie in [0, R]", h));
    if (!(alpha >= 0.0 && alpha <= std::numbers::pi)) throw DomainError("alpha must lie in [0, pi]");
    const double ratio = space.sn(R - h) / space.sn(R);
    return std::asin(std::clamp(ratio * std::sin(alpha), -1.0, 1.0));
}

double comparison_g(const SpaceForm& space, double f_t1, double t1, double t) {
    for (double x : {t1, t}) {
        if (!(x > 0.0) || !(x < space.diameter())) {
            throw DomainError(fmt::format("radius {} outside the radial range of the space form", x));
        }
    }
    return f_t1 * space.sn(t1) / space.sn(t);
}

SlackSummary summarize(std::vector<double> values) {
    SlackSummary out;
    out.count = values.size();
    if (values.empty()) return out;
    std::sort(values.begin(), values.end());
    out.min = values.front();
    out.max = values.back();
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    constexpr std::array<double, 5> q{0.01, 0.1, 0.5, 0.9, 0.99};
    for (std::size_t k = 0; k < q.size(); ++k) {
        const auto idx = static_cast<std::size_t>(std::floor(q[k] * static_cast<double>(values.size() - 1)));
        out.quantiles[k] = values[idx];
    }
    return out;
}

AngleReport judge_angles(const SpaceForm& space, double k0, double h, const std::vector<double>& s,
                         const std::vector<double>& t, const std::vector<double>& phi,
                         const std::vector<bool>& excluded, double tolerance) {
    AngleReport rep;
    rep.k0_used = k0;
    rep.R = circle_radius_of_curvature(space, k0);
    rep.h = h;
    if (h > rep.R) {
        rep.h_clamped = true;
        rep.h = rep.R;
    }
    rep.bound_cos = cos_phi_lower_bound(make_angle_bound(space, k0, rep.h));
    rep.tolerance = tolerance;
    rep.rows.reserve(s.size());
    rep.min_slack = std::numeric_limits<double>::infinity();
    std::vector<double> slacks;
    slacks.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        AngleRow row{s[i], t[i], phi[i], std::cos(phi[i]), rep.bound_cos, 0.0, excluded[i]};
        row.slack = row.cos_phi - row.bound_cos;
        if (row.excluded) {
            ++rep.excluded_corner_count;
        } else {
            slacks.push_back(row.slack);
            if (row.slack < rep.min_slack) {
                rep.min_slack = row.slack;
                rep.argmin_slack = i;
            }
        }
        rep.rows.push_back(row);
    }
    rep.slack = summarize(std::move(slacks));
    rep.pass = rep.min_slack >= -tolerance;
    return rep;
}

AngleReport verify_angle_bound(const ClosedCurve& curve, const Point& o, const AngleOptions& options) {
    const SpaceForm& space = curve.space();
    const RadialMeasurement radial = measure_radial(curve, o);

    double k0 = curve.kmin();
    if (options.mode == K0Mode::Declared) {
        k0 = curve.declared_k0();
        if (std::isnan(k0)) throw DomainError("curve has no declared k0");
    }
    switch (space.kind()) {
        case Geometry::Flat:
            if (!(k0 > 0.0)) throw HypothesisError(fmt::format("plane curve needs k0 > 0, got {}", k0));
            break;
        case Geometry::Hyperbolic:
            if (!(k0 > space.k1())) {
                throw HypothesisError(fmt::format("hyperbolic curve needs k0 > k1 = {}, got {}", space.k1(), k0));
            }
            break;
        case Geometry::Sphere:
            if (k0 < 0.0 && k0 >= -1e-9) k0 = 0.0;
            if (!(k0 >= 0.0)) throw HypothesisError(fmt::format("sphere curve needs k0 >= 0, got {}", k0));
            if (!in_closed_hemisphere(space, curve.points())) {
                throw HypothesisError("sphere curve does not lie in a closed hemisphere");
            }
            break;
    }

    const std::size_t n = curve.size();
    std::vector<double> s(n);
    std::vector<bool> excluded(n);
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = curve[i].s;
        excluded[i] = curve.near_corner(i, options.corner_band);
    }
    return judge_angles(space, k0, radial.h, s, radial.t, radial.phi, excluded, options.tolerance);
}

}  // namespace sphericity
