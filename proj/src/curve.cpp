#include "sphericity/curve.hpp"

#include "sphericity/errors.hpp"
#include "sphericity/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <unordered_map>

namespace sphericity {

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::Circle: return "circle";
        case Provenance::Lune: return "lune";
        case Provenance::SupportFunction: return "support";
        case Provenance::FrameOde: return "frame_ode";
        case Provenance::DiscIntersection: return "disc_intersection";
        case Provenance::Loaded: return "loaded";
    }
    return "loaded";
}

Provenance provenance_from_string(std::string_view name) {
    for (Provenance p : {Provenance::Circle, Provenance::Lune, Provenance::SupportFunction,
                         Provenance::FrameOde, Provenance::DiscIntersection, Provenance::Loaded}) {
        if (to_string(p) == name) return p;
    }
    throw DomainError(fmt::format("unknown curve provenance '{}'", name));
}

// --- chart ---------------------------------------------------------------------

Chart::Chart(const SpaceForm& space, const Point& center)
    : space_(space), center_(center), frame_(frame_at(space, center)) {}

Chart Chart::around(const SpaceForm& space, std::span<const Point> points) {
    Vec3 mean = Vec3::Zero();
    for (const Point& p : points) mean += p.x;
    mean /= static_cast<double>(std::max<std::size_t>(points.size(), 1));
    if (space.kind() == Geometry::Flat) return Chart(space, Point::flat(mean[0], mean[1]));
    if (space.kind() == Geometry::Hyperbolic) return Chart(space, project(space, mean));

    if (mean.norm() * space.k1() > 1e-6) return Chart(space, project(space, mean));
    // Nearly balanced on a great circle: use the pole of the best-fit plane.
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Point& p : points) cov += p.x * p.x.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    Vec3 pole = eig.eigenvectors().col(0);
    // Either pole bounds a hemisphere; take the one the curve turns around.
    Vec3 turn = Vec3::Zero();
    for (std::size_t i = 0; i < points.size(); ++i) turn += points[i].x.cross(points[(i + 1) % points.size()].x);
    if (turn.dot(pole) < 0.0) pole = -pole;
    return Chart(space, project(space, pole));
}

Eigen::Vector2d Chart::to_chart(const Point& p) const {
    const Tangent v = log_map(space_, center_, p);
    return {space_.inner(v.vec, frame_.e1), space_.inner(v.vec, frame_.e2)};
}

Point Chart::from_chart(const Eigen::Vector2d& q) const {
    return exp_map(space_, Tangent{center_, q[0] * frame_.e1 + q[1] * frame_.e2});
}

// --- polygons ------------------------------------------------------------------

double signed_area(const Polygon& poly) {
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % n];
        a += p[0] * q[1] - p[1] * q[0];
    }
    return 0.5 * a;
}

int winding_number(const Polygon& poly, const Eigen::Vector2d& q) {
    int wn = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        const double side = (b[0] - a[0]) * (q[1] - a[1]) - (q[0] - a[0]) * (b[1] - a[1]);
        if (a[1] <= q[1]) {
            if (b[1] > q[1] && side > 0) ++wn;
        } else if (b[1] <= q[1] && side < 0) {
            --wn;
        }
    }
    return wn;
}

namespace {

double orient(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool segments_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                        const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
    const double d1 = orient(q1, q2, p1);
    const double d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1);
    const double d4 = orient(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    auto on_segment = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
        return std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) &&
               std::min(a[1], b[1]) <= c[1] && c[1] <= std::max(a[1], b[1]);
    };
    return (d1 == 0 && on_segment(q1, q2, p1)) || (d2 == 0 && on_segment(q1, q2, p2)) ||
           (d3 == 0 && on_segment(p1, p2, q1)) || (d4 == 0 && on_segment(p1, p2, q2));
}

}  // namespace

bool is_simple(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;

    // Convex polygons with total turning 2*pi are simple; the common case.
    bool convex = true;
    double turning = 0.0;
    for (std::size_t i = 0; i < n && convex; ++i) {
        const Eigen::Vector2d e0 = poly[i] - poly[(i + n - 1) % n];
        const Eigen::Vector2d e1 = poly[(i + 1) % n] - poly[i];
        const double cross = e0[0] * e1[1] - e0[1] * e1[0];
        if (cross < 0) convex = false;
        turning += std::atan2(cross, e0.dot(e1));
    }
    if (convex && std::abs(turning - 2.0 * std::numbers::pi) < 1e-6) return true;

    // Uniform grid hash of the segments.
    double lo_x = poly[0][0], hi_x = lo_x, lo_y = poly[0][1], hi_y = lo_y, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lo_x = std::min(lo_x, poly[i][0]);
        hi_x = std::max(hi_x, poly[i][0]);
        lo_y = std::min(lo_y, poly[i][1]);
        hi_y = std::max(hi_y, poly[i][1]);
        total += (poly[(i + 1) % n] - poly[i]).norm();
    }
    const double cell = std::max({2.0 * total / static_cast<double>(n), (hi_x - lo_x) / 4096.0,
                                  (hi_y - lo_y) / 4096.0, 1e-300});
    std::unordered_map<std::int64_t, std::vector<std::size_t>> grid;
    auto key = [](std::int64_t cx, std::int64_t cy) { return (cx << 32) ^ (cy & 0xffffffff); };
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = poly[i];
        const auto& b = poly[(i + 1) % n];
        const auto x0 = static_cast<std::int64_t>(std::floor((std::min(a[0], b[0]) - lo_x) / cell));
        const auto x1 = static_cast<std::int64_t>(std::floor((std::max(a[0], b[0]) - lo_x) / cell));
        const auto y0 = static_cast<std::int64_t>(std::floor((std::min(a[1], b[1]) - lo_y) / cell));
        const auto y1 = static_cast<std::int64_t>(std::floor((std::max(a[1], b[1]) - lo_y) / cell));
        for (auto cx = x0; cx <= x1; ++cx)
            for (auto cy = y0; cy <= y1; ++cy) grid[key(cx, cy)].push_back(i);
    }
    for (const auto& [k, segs] : grid) {
        for (std::size_t u = 0; u < segs.size(); ++u) {
            for (std::size_t v = u + 1; v < segs.size(); ++v) {
                const std::size_t i = segs[u], j = segs[v];
                if ((i + 1) % n == j || (j + 1) % n == i) continue;
                if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return false;
            }
        }
    }
    return true;
}

// --- curvature -----------------------------------------------------------------

namespace {

double richardson(const SpaceForm& space, const Point& a2, const Point& a1, const Point& c,
                  const Point& b1, const Point& b2) {
    const double kh = cycle_curvature(space, a1, c, b1);
    const double k2h = cycle_curvature(space, a2, c, b2);
    return (4.0 * kh - k2h) / 3.0;
}

}  // namespace

double measure_curvature(const SpaceForm& space, std::span<const Point> window,
                         std::span<const bool> corners) {
    if (window.size() != 5) throw DomainError("curvature window needs exactly 5 samples");
    if (!corners.empty()) {
        if (corners.size() != 5) throw DomainError("corner flags must match the window");
        if (corners[1] || corners[2] || corners[3]) {
            throw CornerError("curvature window spans a corner");
        }
    }
    return richardson(space, window[0], window[1], window[2], window[3], window[4]);
}

std::vector<double> measure_curvatures(const SpaceForm& space, std::span<const Point> points,
                                       const std::vector<bool>& corners) {
    const std::size_t n = points.size();
    if (n < 5) throw DomainError("a closed curve needs at least 5 samples");
    const long ln = static_cast<long>(n);
    auto wrap = [&](std::size_t i, long off) { return static_cast<std::size_t>((static_cast<long>(i) + off + 2 * ln) % ln); };
    auto at = [&](std::size_t i, long off) -> const Point& { return points[wrap(i, off)]; };
    auto corner = [&](std::size_t i, long off) { return !corners.empty() && corners[wrap(i, off)]; };
    std::vector<double> kappa(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (corner(i, 0)) {
            const double left = cycle_curvature(space, at(i, -2), at(i, -1), at(i, 0));
            const double right = cycle_curvature(space, at(i, 0), at(i, 1), at(i, 2));
            kappa[i] = std::min(left, right);
        } else if (corner(i, -1) || corner(i, 1)) {
            kappa[i] = cycle_curvature(space, at(i, -1), at(i, 0), at(i, 1));
        } else {
            kappa[i] = richardson(space, at(i, -2), at(i, -1), at(i, 0), at(i, 1), at(i, 2));
        }
    }
    return kappa;
}

double closeness(const SpaceForm& space, const Point& a, const Point& b) {
    switch (space.kind()) {
        case Geometry::Sphere: return a.x.dot(b.x);
        case Geometry::Hyperbolic: return space.inner(a.x, b.x);
        default: return -(a.x - b.x).squaredNorm();
    }
}

// --- closed curve --------------------------------------------------------------

namespace {

struct Unwrapped {
    const std::vector<double>& s;
    double length;
    long n;

    std::size_t index(long j) const { return static_cast<std::size_t>(((j % n) + n) % n); }
    double at(long j) const {
        const long wraps = (j >= 0) ? j / n : -((-j + n - 1) / n);
        return s[index(j)] - s[0] + static_cast<double>(wraps) * length;
    }
};

// First stencil start j (with width w) among the candidates whose interior
// holds no corner.
template <typename Corner>
long pick_stencil(long i, int width, std::initializer_list<long> offsets, Corner corner) {
    for (long off : offsets) {
        const long j = i + off;
        bool ok = true;
        for (long k = j + 1; k < j + width - 1; ++k)
            if (corner(k)) ok = false;
        if (ok) return j;
    }
    return i + *offsets.begin();
}

}  // namespace

ClosedCurve ClosedCurve::assemble(const SpaceForm& space, RawCurve raw, Provenance provenance,
                                  double declared_k0) {
    const std::size_t n = raw.points.size();
    if (n < 16) throw DomainError(fmt::format("a closed curve needs at least 16 samples, got {}", n));
    if (raw.s.size() != n) throw DomainError("arclength array does not match the samples");
    if (!raw.tangents.empty() && raw.tangents.size() != n) throw DomainError("tangent array does not match the samples");
    if (raw.corners.empty()) raw.corners.assign(n, false);
    if (raw.corners.size() != n) throw DomainError("corner array does not match the samples");
    if (!(raw.length > 0.0)) throw DomainError("curve length must be positive");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(raw.s[i] > raw.s[i - 1])) throw DomainError(fmt::format("arclength not increasing at sample {}", i));
    }
    if (!(raw.s[n - 1] - raw.s[0] < raw.length)) throw DomainError("arclength span exceeds the curve length");

    for (const Point& p : raw.points) validate(space, p);

    ClosedCurve c;
    c.space_ = space;
    c.length_ = raw.length;
    c.provenance_ = provenance;
    c.declared_k0_ = declared_k0;
    c.closure_gap_ = raw.closure_gap;

    const long ln = static_cast<long>(n);
    const Unwrapped uw{raw.s, raw.length, ln};
    auto corner = [&](long j) { return static_cast<bool>(raw.corners[uw.index(j)]); };

    if (raw.tangents.empty()) {
        raw.tangents.resize(n);
        auto derivative = [&](long i, long j) {
            std::array<double, 5> nodes{};
            for (int k = 0; k < 5; ++k) nodes[k] = uw.at(j + k);
            const auto w = lagrange_weights(nodes, uw.at(i), 1);
            Vec3 d = Vec3::Zero();
            for (int k = 0; k < 5; ++k) d += w[k] * raw.points[uw.index(j + k)].x;
            return d;
        };
        for (long i = 0; i < ln; ++i) {
            Vec3 d;
            if (corner(i)) {
                const Vec3 left = derivative(i, i - 4).normalized();
                const Vec3 right = derivative(i, i).normalized();
                d = left + right;
            } else {
                d = derivative(i, pick_stencil(i, 5, {-2, -1, -3, 0, -4}, corner));
            }
            raw.tangents[i] = d;
        }
    }

    c.samples_.resize(n);
    c.s_ = raw.s;
    for (std::size_t i = 0; i < n; ++i) {
        CurveSample& smp = c.samples_[i];
        smp.point = raw.points[i];
        smp.s = raw.s[i];
        Vec3 t = project_tangent(space, smp.point, raw.tangents[i]);
        const double tn = space.norm(t);
        if (!(tn > 0.0)) throw DomainError(fmt::format("degenerate tangent at sample {}", i));
        smp.tangent = t / tn;
        smp.normal_out = -rotate_quarter(space, smp.point, smp.tangent);
        smp.corner = raw.corners[i];
        if (smp.corner) c.corner_indices_.push_back(i);
    }

    if (!raw.kappas.empty() && raw.kappas.size() != n) throw DomainError("curvature array does not match the samples");
    const std::vector<double> kappa =
        raw.kappas.empty() ? measure_curvatures(space, raw.points, raw.corners) : raw.kappas;
    c.kmin_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        c.samples_[i].kappa = kappa[i];
        c.kmin_ = std::min(c.kmin_, kappa[i]);
    }

    if (space.kind() == Geometry::Sphere && c.kmin_ >= -1e-9 && !in_closed_hemisphere(space, raw.points)) {
        throw DomainError("convex curve on the sphere does not fit in a closed hemisphere");
    }

    const Chart chart = Chart::around(space, raw.points);
    c.chart_center_ = chart.center();
    c.chart_poly_ = c.chart_polygon(chart);
    if (!(signed_area(c.chart_poly_) > 0.0)) throw DomainError("curve is not positively oriented");
    if (!is_simple(c.chart_poly_)) throw DomainError("curve is not simple");
    return c;
}

std::vector<Point> ClosedCurve::points() const {
    std::vector<Point> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.point);
    return out;
}

Polygon ClosedCurve::chart_polygon(const Chart& chart) const {
    Polygon poly;
    poly.reserve(samples_.size());
    for (const auto& s : samples_) poly.push_back(chart.to_chart(s.point));
    return poly;
}

bool ClosedCurve::near_corner(std::size_t i, int band) const {
    const long n = static_cast<long>(samples_.size());
    for (std::size_t c : corner_indices_) {
        long d = std::labs(static_cast<long>(c) - static_cast<long>(i));
        d = std::min(d, n - d);
        if (d <= band) return true;
    }
    return false;
}

double ClosedCurve::max_sample_gap() const {
    double gap = length_ - (samples_.back().s - samples_.front().s);
    for (std::size_t i = 1; i < samples_.size(); ++i) gap = std::max(gap, samples_[i].s - samples_[i - 1].s);
    return gap;
}

Point ClosedCurve::point_at(double s) const {
    const long n = static_cast<long>(samples_.size());
    const std::vector<double>& sv = s_;
    const Unwrapped uw{sv, length_, n};

    double u = std::fmod(s - sv[0], length_);
    if (u < 0) u += length_;
    const auto it = std::upper_bound(sv.begin(), sv.end(), sv[0] + u);
    const long i = static_cast<long>(it - sv.begin()) - 1;

    auto corner = [&](long j) { return samples_[uw.index(j)].corner; };
    const long j = pick_stencil(i, 4, {-1, 0, -2}, corner);
    std::array<double, 4> nodes{};
    for (int k = 0; k < 4; ++k) nodes[k] = uw.at(j + k);
    const auto w = lagrange_weights(nodes, u, 0);
    Vec3 x = Vec3::Zero();
    for (int k = 0; k < 4; ++k) x += w[k] * samples_[uw.index(j + k)].point.x;
    return project(space_, x);
}

bool ClosedCurve::contains(const Point& p) const {
    try {
        return winding_number(chart_poly_, chart().to_chart(p)) != 0;
    } catch (const DomainError&) {
        return false;
    }
}

// --- distances to the curve ----------------------------------------------------

namespace {

CurveDistance refine_extreme(const ClosedCurve& curve, const Point& p, bool nearest) {
    const SpaceForm& space = curve.space();
    std::size_t best = 0;
    double key = nearest ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double c = closeness(space, curve[i].point, p);
        if (nearest ? c > key : c < key) {
            key = c;
            best = i;
        }
    }
    const double d_best = distance(space, p, curve[best].point);
    double lo = curve[curve.prev(best)].s;
    double hi = curve[curve.next(best)].s;
    const double mid = curve[best].s;
    if (lo > mid) lo -= curve.total_length();
    if (hi < mid) hi += curve.total_length();

    auto dist_at = [&](double s) { return distance(space, p, curve.point_at(s)); };
    const double tol = 1e-13 * std::max(1.0, curve.total_length());
    const Extremum e = nearest ? golden_section_min(dist_at, lo, hi, tol) : golden_section_max(dist_at, lo, hi, tol);
    const bool improved = nearest ? e.value < d_best : e.value > d_best;
    if (!improved) return {d_best, curve[best].s, best};
    double s = std::fmod(e.x - curve[0].s, curve.total_length());
    if (s < 0) s += curve.total_length();
    return {e.value, curve[0].s + s, best};
}

}  // namespace

CurveDistance nearest_point(const ClosedCurve& curve, const Point& p) { return refine_extreme(curve, p, true); }
CurveDistance farthest_point(const ClosedCurve& curve, const Point& p) { return refine_extreme(curve, p, false); }

// --- hemispheres ---------------------------------------------------------------

namespace {

std::vector<Vec3> hemisphere_candidates(std::span<const Point> points) {
    Vec3 mean = Vec3::Zero();
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Point& p : points) {
        mean += p.x;
        cov += p.x * p.x.transpose();
    }
    std::vector<Vec3> out;
    if (mean.norm() > 0) out.push_back(mean.normalized());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    out.push_back(eig.eigenvectors().col(0));
    out.push_back(-eig.eigenvectors().col(0));
    return out;
}

}  // namespace

bool in_closed_hemisphere(const SpaceForm& space, std::span<const Point> points, double tol) {
    if (space.kind() != Geometry::Sphere) return true;
    for (const Vec3& w : hemisphere_candidates(points)) {
        bool ok = true;
        for (const Point& p : points) {
            if (space.k1() * p.x.dot(w) < -tol) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

bool in_open_hemisphere(const SpaceForm& space, std::span<const Point> points) {
    if (space.kind() != Geometry::Sphere) return true;
    Vec3 mean = Vec3::Zero();
    for (const Point& p : points) mean += p.x;
    if (mean.norm() == 0.0) return false;
    const Vec3 w = mean.normalized();
    return std::all_of(points.begin(), points.end(), [&](const Point& p) { return p.x.dot(w) > 0.0; });
}

}  // namespace sphericity
