#include "sphericity/generators.hpp"

#include "sphericity/errors.hpp"
#include "sphericity/numerics.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint/stepper/runge_kutta4.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace sphericity {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Doubles the resolution until curvature at coincident samples agrees.
template <typename Build>
ClosedCurve sample_adaptively(Build build, const SamplingOptions& opt) {
    std::size_t n = opt.samples;
    ClosedCurve coarse = build(n);
    if (!opt.adaptive) return coarse;
    while (2 * n <= opt.max_samples) {
        ClosedCurve fine = build(2 * n);
        double worst = 0.0;
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            worst = std::max(worst, std::abs(coarse[i].kappa - fine[2 * i].kappa));
        }
        if (worst <= opt.agreement) return coarse;
        coarse = std::move(fine);
        n *= 2;
    }
    return coarse;
}

struct CircleArc {
    Point center;
    Frame frame;
    double start;
    double sweep;
};

Point arc_point(const SpaceForm& space, const CircleArc& arc, double radius, double psi) {
    return polar_point(space, arc.center, arc.frame, psi, radius);
}

Vec3 arc_tangent(const SpaceForm& space, const CircleArc& arc, double radius, double psi) {
    const Tangent v{arc.center, radius * (std::cos(psi) * arc.frame.e1 + std::sin(psi) * arc.frame.e2)};
    const Point p = exp_map(space, v);
    return rotate_quarter(space, p, geodesic_velocity(space, v));
}

// Samples a chain of arcs of one radius; each arc starts at a corner unless
// it is a single full circle.
RawCurve sample_arcs(const SpaceForm& space, const std::vector<CircleArc>& arcs, double radius,
                     std::size_t samples) {
    const double scale = space.sn(radius);
    double total_sweep = 0.0;
    for (const auto& a : arcs) total_sweep += a.sweep;
    const bool smooth = arcs.size() == 1;

    RawCurve raw;
    raw.length = total_sweep * scale;
    double s = 0.0;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
        const CircleArc& arc = arcs[k];
        const auto m = std::max<std::size_t>(
            8, static_cast<std::size_t>(std::lround(static_cast<double>(samples) * arc.sweep / total_sweep)));
        for (std::size_t j = 0; j < m; ++j) {
            const double psi = arc.start + arc.sweep * static_cast<double>(j) / static_cast<double>(m);
            raw.points.push_back(arc_point(space, arc, radius, psi));
            raw.s.push_back(s + scale * arc.sweep * static_cast<double>(j) / static_cast<double>(m));
            Vec3 t = arc_tangent(space, arc, radius, psi);
            if (j == 0 && !smooth) {
                const CircleArc& before = arcs[(k + arcs.size() - 1) % arcs.size()];
                const Vec3 t_in = arc_tangent(space, before, radius, before.start + before.sweep);
                t = t / space.norm(t) + t_in / space.norm(t_in);
            }
            raw.tangents.push_back(t);
            raw.corners.push_back(j == 0 && !smooth);
        }
        s += scale * arc.sweep;
    }
    return raw;
}

}  // namespace

ClosedCurve make_circle(const SpaceForm& space, const Point& center, double k0, std::size_t samples) {
    const double radius = circle_radius_of_curvature(space, k0);
    validate(space, center);
    const CircleArc arc{center, frame_at(space, center), 0.0, kTwoPi};
    return ClosedCurve::assemble(space, sample_arcs(space, {arc}, radius, samples), Provenance::Circle, k0);
}

namespace {

// Intersection of circle intervals [a, a + la] and [b, b + lb], each shorter
// than pi; returns false when empty.
bool intersect_arc(double& a, double& la, double b, double lb) {
    const double ca = a + 0.5 * la;
    double cb = b + 0.5 * lb;
    cb -= kTwoPi * std::round((cb - ca) / kTwoPi);
    const double lo = std::max(a, cb - 0.5 * lb);
    const double hi = std::min(a + la, cb + 0.5 * lb);
    if (!(hi > lo)) return false;
    a = lo;
    la = hi - lo;
    return true;
}

// Cosine threshold g: a point at angle psi on circle j lies in disc i iff
// cos(psi - psi_ij) >= g, where delta is the centre distance.
double disc_threshold(const SpaceForm& space, double radius, double delta) {
    const double k = space.k1();
    switch (space.kind()) {
        case Geometry::Sphere:
            return std::cos(k * radius) * (1.0 - std::cos(k * delta)) / (std::sin(k * radius) * std::sin(k * delta));
        case Geometry::Hyperbolic:
            return std::cosh(k * radius) * (std::cosh(k * delta) - 1.0) /
                   (std::sinh(k * radius) * std::sinh(k * delta));
        default: return delta / (2.0 * radius);
    }
}

ClosedCurve disc_intersection(const SpaceForm& space, std::span<const Point> centers, double k0,
                              std::size_t samples, Provenance provenance) {
    const double radius = circle_radius_of_curvature(space, k0);
    if (centers.size() < 2) throw DomainError("disc intersection needs at least two centres");

    std::vector<Point> unique;
    for (const Point& c : centers) {
        validate(space, c);
        const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Point& u) {
            return distance(space, u, c) <= 1e-12 * std::max(1.0, radius);
        });
        if (!dup) unique.push_back(c);
    }
    for (std::size_t i = 0; i < unique.size(); ++i)
        for (std::size_t j = i + 1; j < unique.size(); ++j)
            if (!(distance(space, unique[i], unique[j]) < 2.0 * radius))
                throw DomainError("disc intersection is empty: two centres are at least 2R apart");

    if (unique.size() == 1) {
        const CircleArc arc{unique[0], frame_at(space, unique[0]), 0.0, kTwoPi};
        return ClosedCurve::assemble(space, sample_arcs(space, {arc}, radius, samples), provenance, k0);
    }

    std::vector<CircleArc> arcs;
    for (std::size_t j = 0; j < unique.size(); ++j) {
        const Frame frame = frame_at(space, unique[j]);
        bool first = true, alive = true;
        double a = 0.0, la = 0.0;
        for (std::size_t i = 0; i < unique.size() && alive; ++i) {
            if (i == j) continue;
            const Tangent v = log_map(space, unique[j], unique[i]);
            const double dir = std::atan2(space.inner(v.vec, frame.e2), space.inner(v.vec, frame.e1));
            const double g = disc_threshold(space, radius, space.norm(v.vec));
            if (g >= 1.0) {
                alive = false;
                break;
            }
            const double w = std::acos(std::max(-1.0, g));
            if (first) {
                a = dir - w;
                la = 2.0 * w;
                first = false;
            } else {
                alive = intersect_arc(a, la, dir - w, 2.0 * w);
            }
        }
        if (alive && la > 1e-12) arcs.push_back({unique[j], frame, a, la});
    }
    if (arcs.empty()) throw DomainError("disc intersection is empty");

    // Chain arcs end-to-start.
    auto start_of = [&](const CircleArc& c) { return arc_point(space, c, radius, c.start); };
    auto end_of = [&](const CircleArc& c) { return arc_point(space, c, radius, c.start + c.sweep); };
    std::vector<CircleArc> chain{arcs[0]};
    std::vector<bool> used(arcs.size(), false);
    used[0] = true;
    const double tol = 1e-7 * std::max(1.0, radius);
    for (std::size_t step = 1; step < arcs.size(); ++step) {
        const Point tail = end_of(chain.back());
        std::size_t best = arcs.size();
        double best_d = tol;
        for (std::size_t k = 0; k < arcs.size(); ++k) {
            if (used[k]) continue;
            const double d = distance(space, tail, start_of(arcs[k]));
            if (d <= best_d) {
                best_d = d;
                best = k;
            }
        }
        if (best == arcs.size()) throw DomainError("disc intersection boundary does not close up");
        used[best] = true;
        chain.push_back(arcs[best]);
    }
    if (distance(space, end_of(chain.back()), start_of(chain.front())) > tol) {
        throw DomainError("disc intersection boundary does not close up");
    }
    RawCurve raw = sample_arcs(space, chain, radius, samples);
    raw.closure_gap = distance(space, end_of(chain.back()), start_of(chain.front()));
    return ClosedCurve::assemble(space, std::move(raw), provenance, k0);
}

}  // namespace

ClosedCurve make_disc_intersection(const SpaceForm& space, std::span<const Point> centers, double k0,
                                   std::size_t samples) {
    return disc_intersection(space, centers, k0, samples, Provenance::DiscIntersection);
}

ClosedCurve make_lune(const SpaceForm& space, double k0, double r, std::size_t samples) {
    const double radius = circle_radius_of_curvature(space, k0);
    if (!(r > 0.0 && r < radius)) {
        throw DomainError(fmt::format("lune parameter r = {} must lie in (0, {})", r, radius));
    }
    const Point o = origin(space);
    const Frame f = frame_at(space, o);
    const std::array<Point, 2> centers{polar_point(space, o, f, 0.0, radius - r),
                                       polar_point(space, o, f, std::numbers::pi, radius - r)};
    return disc_intersection(space, centers, k0, samples, Provenance::Lune);
}

// --- support functions ---------------------------------------------------------

double SupportFunction::h(double t) const {
    double v = a0;
    for (const auto& hm : harmonics) v += hm.a * std::cos(hm.n * t) + hm.b * std::sin(hm.n * t);
    return v;
}

double SupportFunction::dh(double t) const {
    double v = 0.0;
    for (const auto& hm : harmonics) v += hm.n * (-hm.a * std::sin(hm.n * t) + hm.b * std::cos(hm.n * t));
    return v;
}

double SupportFunction::rho(double t) const {
    double v = a0;
    for (const auto& hm : harmonics) {
        v += (1.0 - hm.n * hm.n) * (hm.a * std::cos(hm.n * t) + hm.b * std::sin(hm.n * t));
    }
    return v;
}

double SupportFunction::arclength(double t) const {
    double v = a0 * t;
    for (const auto& hm : harmonics) {
        const double n = hm.n;
        v += (1.0 - n * n) * (hm.a * std::sin(n * t) + hm.b * (1.0 - std::cos(n * t))) / n;
    }
    return v;
}

double SupportFunction::length() const { return kTwoPi * a0; }

ClosedCurve make_support_curve(const SupportFunction& support, double k0_target, const SamplingOptions& options) {
    if (!(k0_target > 0.0)) throw DomainError("support curves need k0_target > 0");
    for (const auto& hm : support.harmonics) {
        if (hm.n < 2) throw DomainError("support harmonics start at n = 2");
    }

    // Radius of curvature on a dense grid, extremes refined by golden section.
    constexpr int kGrid = 16384;
    const double step = kTwoPi / kGrid;
    int imin = 0, imax = 0;
    for (int i = 1; i < kGrid; ++i) {
        const double r = support.rho(i * step);
        if (r < support.rho(imin * step)) imin = i;
        if (r > support.rho(imax * step)) imax = i;
    }
    auto rho = [&](double t) { return support.rho(t); };
    const Extremum lo = golden_section_min(rho, (imin - 1) * step, (imin + 1) * step, 1e-14);
    const Extremum hi = golden_section_max(rho, (imax - 1) * step, (imax + 1) * step, 1e-14);
    auto wrap = [](double t) { return t - kTwoPi * std::floor(t / kTwoPi); };
    if (!(lo.value > 0.0)) {
        const double at = wrap(lo.x);
        throw RejectionError(fmt::format("radius of curvature {} <= 0 at theta = {}", lo.value, at), at);
    }
    if (hi.value > (1.0 / k0_target) * (1.0 + 1e-12)) {
        const double at = wrap(hi.x);
        throw RejectionError(
            fmt::format("radius of curvature {} exceeds 1/k0 = {} at theta = {}", hi.value, 1.0 / k0_target, at), at);
    }

    const SpaceForm plane = SpaceForm::flat();
    const double length = support.length();
    auto build = [&](std::size_t n) {
        RawCurve raw;
        raw.length = length;
        double theta = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            const double s = length * static_cast<double>(m) / static_cast<double>(n);
            // Newton on s(theta) = s; ds/dtheta = rho > 0.
            if (m > 0) theta = s / support.a0;
            for (int it = 0; it < 60; ++it) {
                const double delta = (support.arclength(theta) - s) / support.rho(theta);
                theta -= delta;
                if (std::abs(delta) < 1e-16) break;
            }
            const double h = support.h(theta), dh = support.dh(theta);
            const double c = std::cos(theta), sn = std::sin(theta);
            raw.points.push_back(Point::flat(h * c - dh * sn, h * sn + dh * c));
            raw.s.push_back(s);
            raw.tangents.push_back(Vec3(-sn, c, 0.0));
        }
        const double h0 = support.h(0.0), h1 = support.h(kTwoPi);
        const double d0 = support.dh(0.0), d1 = support.dh(kTwoPi);
        raw.closure_gap = std::hypot(h1 - h0, d1 - d0);
        return ClosedCurve::assemble(plane, std::move(raw), Provenance::SupportFunction, k0_target);
    };
    return sample_adaptively(build, options);
}

// --- frame ODE -----------------------------------------------------------------

namespace {

using State = std::array<double, 6>;

struct FrameOde {
    SpaceForm space;
    const CurvatureProfile* profile;
    double length;
    double offset_cos;
    double offset_sin;

    double kappa(double s) const {
        const double u = s / length;
        return (*profile)(u) + offset_cos * std::cos(kTwoPi * u) + offset_sin * std::sin(kTwoPi * u);
    }

    void operator()(const State& y, State& dy, double s) const {
        const Vec3 x(y[0], y[1], y[2]);
        const Vec3 v(y[3], y[4], y[5]);
        const Point p{x};
        Vec3 a = kappa(s) * rotate_quarter(space, p, v);
        if (space.kind() == Geometry::Sphere) a -= space.k1() * space.k1() * x;
        if (space.kind() == Geometry::Hyperbolic) a += space.k1() * space.k1() * x;
        dy = {v[0], v[1], v[2], a[0], a[1], a[2]};
    }
};

std::vector<State> integrate(const FrameOde& ode, std::size_t steps) {
    const SpaceForm& space = ode.space;
    const Point o = origin(space);
    const Frame f = frame_at(space, o);
    State y{o.x[0], o.x[1], o.x[2], f.e1[0], f.e1[1], f.e1[2]};
    std::vector<State> out;
    out.reserve(steps + 1);
    out.push_back(y);
    boost::numeric::odeint::runge_kutta4<State> stepper;
    const double ds = ode.length / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        stepper.do_step(ode, y, static_cast<double>(i) * ds, ds);
        const Point p = project(space, Vec3(y[0], y[1], y[2]));
        Vec3 v = project_tangent(space, p, Vec3(y[3], y[4], y[5]));
        v /= space.norm(v);
        y = {p.x[0], p.x[1], p.x[2], v[0], v[1], v[2]};
        out.push_back(y);
    }
    return out;
}

Eigen::Vector3d closure_residual(const FrameOde& ode, std::size_t steps) {
    const SpaceForm& space = ode.space;
    const State end = integrate(ode, steps).back();
    const Point o = origin(space);
    const Frame f = frame_at(space, o);
    const Point x{Vec3(end[0], end[1], end[2])};
    const Vec3 v(end[3], end[4], end[5]);
    const Tangent gap = log_map(space, o, x);
    const Vec3 w = parallel_transport(space, log_map(space, x, o), v);
    return {space.inner(gap.vec, f.e1), space.inner(gap.vec, f.e2),
            std::atan2(space.inner(w, f.e2), space.inner(w, f.e1))};
}

}  // namespace

FrameOdeSolution solve_frame_ode_closure(const SpaceForm& space, const CurvatureProfile& profile,
                                         double length_guess, std::size_t steps, const FrameOdeOptions& options) {
    if (!(length_guess > 0.0)) throw DomainError("frame-ODE length guess must be positive");
    FrameOde ode{space, &profile, length_guess, 0.0, 0.0};
    constexpr int dim = 3;
    auto set = [&](const Eigen::Vector3d& p) {
        ode.length = p[0];
        ode.offset_cos = p[1];
        ode.offset_sin = p[2];
    };

    Eigen::Vector3d p(length_guess, 0.0, 0.0);
    Eigen::Vector3d r = closure_residual(ode, steps);
    double damping = 1e-6;
    int it = 0;
    for (; it < options.max_iterations && r.norm() > 1e-15; ++it) {
        Eigen::Matrix3d jac;
        for (int k = 0; k < dim; ++k) {
            const double h = 1e-7 * std::max(1.0, std::abs(p[k]));
            Eigen::Vector3d q = p;
            q[k] += h;
            set(q);
            const Eigen::Vector3d rp = closure_residual(ode, steps);
            q[k] -= 2.0 * h;
            set(q);
            const Eigen::Vector3d rm = closure_residual(ode, steps);
            jac.col(k) = (rp - rm) / (2.0 * h);
        }
        const Eigen::Matrix3d jtj = jac.transpose() * jac;
        const Eigen::Vector3d jtr = jac.transpose() * r;
        bool accepted = false;
        for (int tries = 0; tries < 30 && !accepted; ++tries) {
            Eigen::Matrix3d a = jtj;
            a.diagonal() *= 1.0 + damping;
            const Eigen::Vector3d step = a.ldlt().solve(-jtr);
            Eigen::Vector3d q = p + step;
            if (!(q[0] > 0.0)) q[0] = 0.5 * p[0];
            set(q);
            const Eigen::Vector3d rq = closure_residual(ode, steps);
            if (rq.norm() < r.norm()) {
                p = q;
                r = rq;
                damping = std::max(1e-12, damping * 0.1);
                accepted = true;
            } else {
                damping *= 10.0;
            }
        }
        set(p);
        if (!accepted) break;
    }
    set(p);
    if (!(r.norm() <= options.tolerance)) {
        throw NonClosureError(fmt::format("frame-ODE closure did not converge after {} iterations (residual {:.3g})",
                                          it, r.norm()),
                              r.norm());
    }
    return {ode.length, ode.offset_cos, ode.offset_sin, it, r.norm()};
}

ClosedCurve make_frame_ode_curve(const SpaceForm& space, const CurvatureProfile& profile, double length_guess,
                                 const FrameOdeOptions& options) {
    auto build = [&](std::size_t n) {
        const FrameOdeSolution sol = solve_frame_ode_closure(space, profile, length_guess, n, options);
        const FrameOde ode{space, &profile, sol.length, sol.offset_cos, sol.offset_sin};
        const std::vector<State> states = integrate(ode, n);
        RawCurve raw;
        raw.length = sol.length;
        for (std::size_t i = 0; i < n; ++i) {
            const State& y = states[i];
            raw.points.push_back(Point{Vec3(y[0], y[1], y[2])});
            raw.tangents.push_back(Vec3(y[3], y[4], y[5]));
            raw.s.push_back(sol.length * static_cast<double>(i) / static_cast<double>(n));
        }
        const State& end = states.back();
        raw.closure_gap = distance(space, Point{Vec3(end[0], end[1], end[2])}, raw.points.front());
        if (!(raw.closure_gap < 1e-8)) {
            throw NonClosureError(fmt::format("frame-ODE curve closure gap {:.3g}", raw.closure_gap),
                                  raw.closure_gap);
        }
        double kmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) kmin = std::min(kmin, ode.kappa(raw.s[i]));
        return ClosedCurve::assemble(space, std::move(raw), Provenance::FrameOde, kmin);
    };
    return sample_adaptively(build, options.sampling);
}

}  // namespace sphericity

namespace sphericity {

double FourierProfile::operator()(double u) const {
    double v = base;
    for (const Harmonic& h : harmonics) v += h.a * std::cos(kTwoPi * h.n * u) + h.b * std::sin(kTwoPi * h.n * u);
    return v;
}

double circle_length(const SpaceForm& space, double k0) {
    return kTwoPi * space.sn(circle_radius_of_curvature(space, k0));
}

SupportFunction random_support_function(Rng& rng, int max_harmonic) {
    SupportFunction sf;
    sf.a0 = 1.0;
    double weight = 0.0;
    for (int n = 2; n <= max_harmonic; ++n) {
        const Harmonic h{n, rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        weight += (n * n - 1) * (std::abs(h.a) + std::abs(h.b));
        sf.harmonics.push_back(h);
    }
    const double budget = rng.uniform(0.1, 0.85);
    for (Harmonic& h : sf.harmonics) {
        h.a *= budget / weight;
        h.b *= budget / weight;
    }
    return sf;
}

double max_radius_of_curvature(const SupportFunction& support) {
    constexpr double step = kTwoPi / 4096.0;
    int best = 0;
    for (int i = 1; i < 4096; ++i) {
        if (support.rho(step * i) > support.rho(step * best)) best = i;
    }
    const auto rho = [&](double th) { return support.rho(th); };
    return std::max(support.rho(step * best), golden_section_max(rho, step * (best - 1), step * (best + 1)).value);
}

FourierProfile random_curvature_profile(const SpaceForm& space, Rng& rng) {
    const double k1 = space.kind() == Geometry::Flat ? 1.0 : space.k1();
    double floor = 0.3 * k1;
    double base = rng.uniform(0.8, 2.0) * k1;
    if (space.kind() == Geometry::Hyperbolic) {
        floor = 1.2 * k1;
        base = rng.uniform(1.6, 3.0) * k1;
    }
    FourierProfile prof;
    prof.base = base;
    double weight = 0.0;
    for (int n = 2; n <= 4; ++n) {
        const Harmonic h{n, rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        weight += std::abs(h.a) + std::abs(h.b);
        prof.harmonics.push_back(h);
    }
    const double budget = rng.uniform(0.1, 0.6) * (base - floor);
    for (Harmonic& h : prof.harmonics) {
        h.a *= budget / weight;
        h.b *= budget / weight;
    }
    return prof;
}

std::vector<Point> random_disc_centers(const SpaceForm& space, double k0, Rng& rng) {
    const double R = circle_radius_of_curvature(space, k0);
    const Point o = origin(space);
    const Frame fr = frame_at(space, o);
    const int count = rng.integer(2, 5);
    std::vector<Point> out;
    for (int i = 0; i < count; ++i) out.push_back(polar_point(space, o, fr, rng.uniform(0.0, kTwoPi), rng.uniform(0.0, 0.6 * R)));
    return out;
}

}  // namespace sphericity
