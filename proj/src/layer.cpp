#include "sphericity/layer.hpp"

#include "sphericity/errors.hpp"
#include "sphericity/numerics.hpp"
#include "sphericity/spindle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace sphericity {

double signed_min_distance(const ClosedCurve& curve, const Point& p) {
    const double d = nearest_point(curve, p).distance;
    return curve.contains(p) ? d : -d;
}

namespace {

struct Box {
    Eigen::Vector2d lo;
    Eigen::Vector2d hi;
};

Box bounding_box(const Polygon& poly) {
    Box b{poly.front(), poly.front()};
    for (const auto& q : poly) {
        b.lo = b.lo.cwiseMin(q);
        b.hi = b.hi.cwiseMax(q);
    }
    return b;
}

// Nelder-Mead repeated from its own result until the value stops improving.
SimplexResult climb(const std::function<double(const Eigen::Vector2d&)>& f, Eigen::Vector2d start, double step) {
    SimplexResult best{start, f(start), 0};
    for (int round = 0; round < 8; ++round) {
        const SimplexResult res = nelder_mead_min(f, best.x, step);
        const bool improved = res.value < best.value - 1e-15;
        if (res.value < best.value) best = {res.x, res.value, best.iterations + res.iterations};
        if (!improved) break;
        step *= 0.1;
    }
    return best;
}

constexpr std::array<std::array<double, 2>, 8> kCompass{{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

}  // namespace

Incenter incenter(const ClosedCurve& curve, const IncenterOptions& options) {
    const SpaceForm& space = curve.space();
    const Chart chart = curve.chart();
    const Polygon& poly = curve.polygon();
    if (std::abs(signed_area(poly)) < 1e-14) throw DomainError("curve encloses no area");

    const Box box = bounding_box(poly);
    const int n = std::max(options.grid, 4);
    const Eigen::Vector2d cell = (box.hi - box.lo) / n;

    struct Candidate {
        Eigen::Vector2d q;
        double value;
    };
    std::vector<Candidate> candidates;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const Eigen::Vector2d q = box.lo + Eigen::Vector2d(i * cell.x(), j * cell.y());
            if (winding_number(poly, q) == 0) continue;
            candidates.push_back({q, nearest_point(curve, chart.from_chart(q)).distance});
        }
    }
    if (candidates.empty()) throw DomainError("incenter grid found no interior point");
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

    auto objective = [&](const Eigen::Vector2d& q) { return -signed_min_distance(curve, chart.from_chart(q)); };
    const double step = 0.5 * std::max(cell.x(), cell.y());

    Incenter out;
    out.grid_max = candidates.front().value;
    out.r = -std::numeric_limits<double>::infinity();
    Eigen::Vector2d best_q = candidates.front().q;
    const std::size_t starts = std::min<std::size_t>(candidates.size(), std::max(options.starts, 1));
    for (std::size_t k = 0; k < starts; ++k) {
        const SimplexResult res = climb(objective, candidates[k].q, step);
        if (-res.value > out.r) {
            out.r = -res.value;
            best_q = res.x;
        }
    }
    out.center = chart.from_chart(best_q);

    // Certificate: compass perturbations measured along geodesics at the centre.
    const Frame frame = frame_at(space, out.center);
    out.perturbed_max = -std::numeric_limits<double>::infinity();
    for (const auto& dir : kCompass) {
        const double a = std::atan2(dir[1], dir[0]);
        const Point p = polar_point(space, out.center, frame, a, options.perturbation);
        out.perturbed_max = std::max(out.perturbed_max, signed_min_distance(curve, p));
    }
    out.certified = out.grid_max <= out.r + options.grid_slack && out.perturbed_max < out.r;
    return out;
}

LayerReport layer_width(const ClosedCurve& curve, const LayerOptions& options) {
    const SpaceForm& space = curve.space();
    LayerReport rep;
    rep.kmin = curve.kmin();
    double k0 = rep.kmin - options.k0_margin;
    switch (space.kind()) {
        case Geometry::Flat:
            if (!(k0 > 0.0)) throw HypothesisError(fmt::format("plane curve needs kmin > 0, got {}", rep.kmin));
            break;
        case Geometry::Hyperbolic:
            if (!(k0 > space.k1())) {
                throw HypothesisError(
                    fmt::format("hyperbolic curve needs kmin > k1 = {}, got {}", space.k1(), rep.kmin));
            }
            break;
        case Geometry::Sphere:
            if (!(rep.kmin >= -1e-9)) throw HypothesisError(fmt::format("sphere curve needs kmin >= 0, got {}", rep.kmin));
            k0 = std::max(k0, 0.0);
            if (!in_open_hemisphere(space, curve.points())) {
                throw HypothesisError("sphere curve does not lie in an open hemisphere");
            }
            break;
    }
    rep.k0_used = k0;
    rep.inscribed = incenter(curve, options.incenter);
    rep.r = rep.inscribed.r;
    rep.rho1 = farthest_point(curve, rep.inscribed.center).distance;
    rep.d = rep.rho1 - rep.r;
    rep.d0 = spindle_optimum(space, k0).d0;
    rep.margin = rep.d0 - rep.d;
    rep.pass = rep.margin >= -options.pass_tolerance;
    return rep;
}

MinWidthLayer min_width_layer(const ClosedCurve& curve, const Point& start) {
    const SpaceForm& space = curve.space();
    const Chart chart(space, start);
    auto width = [&](const Eigen::Vector2d& q) {
        const Point p = chart.from_chart(q);
        return farthest_point(curve, p).distance - nearest_point(curve, p).distance;
    };
    const double start_width = width(Eigen::Vector2d::Zero());
    const double step = 0.05 * nearest_point(curve, start).distance;
    const SimplexResult res = climb(width, Eigen::Vector2d::Zero(), step);
    if (!(res.value < start_width)) return {start, start_width};
    return {chart.from_chart(res.x), res.value};
}

MinWidthLayer min_width_layer(const ClosedCurve& curve) {
    return min_width_layer(curve, incenter(curve).center);
}

std::vector<Point> circle_arc(const SpaceForm& space, const Point& p, const Point& q, double k0, bool right,
                              std::size_t samples) {
    const double R = circle_radius_of_curvature(space, k0);
    const Tangent pq = log_map(space, p, q);
    const double c = 0.5 * space.norm(pq.vec);
    if (!(c > 0.0) || !(c < R)) throw DomainError(fmt::format("chord half-length {} must lie in (0, {})", c, R));

    const Tangent half{p, 0.5 * pq.vec};
    const Point m = exp_map(space, half);
    Vec3 u = geodesic_velocity(space, half);
    u /= space.norm(u);
    const Vec3 n = rotate_quarter(space, m, u);

    const double k = space.k1();
    double e = 0.0;
    switch (space.kind()) {
        case Geometry::Flat: e = std::sqrt((R - c) * (R + c)); break;
        case Geometry::Sphere: e = std::acos(std::clamp(std::cos(k * R) / std::cos(k * c), -1.0, 1.0)) / k; break;
        case Geometry::Hyperbolic: e = std::acosh(std::cosh(k * R) / std::cosh(k * c)) / k; break;
    }
    const Point o = exp_map(space, {m, (right ? e : -e) * n});
    const Frame fr = frame_at(space, o);
    auto angle_of = [&](const Point& x) {
        const Vec3 v = log_map(space, o, x).vec;
        return std::atan2(space.inner(v, fr.e2), space.inner(v, fr.e1));
    };
    const double a0 = angle_of(p);
    double da = std::remainder(angle_of(q) - a0, 2.0 * std::numbers::pi);

    std::vector<Point> out;
    out.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double f = samples > 1 ? static_cast<double>(i) / static_cast<double>(samples - 1) : 0.0;
        out.push_back(polar_point(space, o, fr, a0 + f * da, R));
    }
    return out;
}

}  // namespace sphericity
