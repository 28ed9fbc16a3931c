#include "sphericity/space_form.hpp"

#include "sphericity/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <numbers>

namespace sphericity {

namespace {

constexpr double kPi = std::numbers::pi;

// Minkowski metric signature diag(-1, 1, 1).
Vec3 lorentz_flip(const Vec3& v) { return Vec3(-v[0], v[1], v[2]); }

double minkowski(const Vec3& a, const Vec3& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

std::string_view to_string(Geometry g) {
    switch (g) {
        case Geometry::Flat: return "flat";
        case Geometry::Sphere: return "sphere";
        case Geometry::Hyperbolic: return "hyperbolic";
    }
    return "flat";
}

Geometry geometry_from_string(std::string_view name) {
    if (name == "flat") return Geometry::Flat;
    if (name == "sphere") return Geometry::Sphere;
    if (name == "hyperbolic") return Geometry::Hyperbolic;
    throw DomainError(fmt::format("unknown geometry '{}'", name));
}

SpaceForm SpaceForm::sphere(double k1) { return make(Geometry::Sphere, k1); }
SpaceForm SpaceForm::hyperbolic(double k1) { return make(Geometry::Hyperbolic, k1); }

SpaceForm SpaceForm::make(Geometry kind, double k1) {
    if (kind == Geometry::Flat) {
        if (k1 != 0.0) throw DomainError("flat space form requires k1 = 0");
        return SpaceForm(kind, 0.0);
    }
    if (!(k1 > 0.0) || !std::isfinite(k1)) {
        throw DomainError(fmt::format("{} space form requires k1 > 0, got {}", to_string(kind), k1));
    }
    return SpaceForm(kind, k1);
}

double SpaceForm::curvature() const {
    switch (kind_) {
        case Geometry::Sphere: return k1_ * k1_;
        case Geometry::Hyperbolic: return -k1_ * k1_;
        default: return 0.0;
    }
}

double SpaceForm::sn(double t) const {
    switch (kind_) {
        case Geometry::Sphere: return std::sin(k1_ * t) / k1_;
        case Geometry::Hyperbolic: return std::sinh(k1_ * t) / k1_;
        default: return t;
    }
}

double SpaceForm::cs(double t) const {
    switch (kind_) {
        case Geometry::Sphere: return std::cos(k1_ * t);
        case Geometry::Hyperbolic: return std::cosh(k1_ * t);
        default: return 1.0;
    }
}

double SpaceForm::inner(const Vec3& a, const Vec3& b) const {
    return kind_ == Geometry::Hyperbolic ? minkowski(a, b) : a.dot(b);
}

double SpaceForm::norm(const Vec3& v) const {
    return std::sqrt(std::max(0.0, inner(v, v)));
}

double SpaceForm::diameter() const {
    return kind_ == Geometry::Sphere ? kPi / k1_ : std::numeric_limits<double>::infinity();
}

Point origin(const SpaceForm& space) {
    switch (space.kind()) {
        case Geometry::Sphere: return Point{Vec3(0.0, 0.0, 1.0 / space.k1())};
        case Geometry::Hyperbolic: return Point{Vec3(1.0 / space.k1(), 0.0, 0.0)};
        default: return Point{Vec3::Zero()};
    }
}

Point project(const SpaceForm& space, const Vec3& x) {
    switch (space.kind()) {
        case Geometry::Sphere: {
            const double n = x.norm();
            if (n == 0.0) throw ConstraintViolation("cannot project the zero vector onto the sphere");
            return Point{x / (space.k1() * n)};
        }
        case Geometry::Hyperbolic: {
            const double k1 = space.k1();
            const double x0 = std::sqrt(1.0 / (k1 * k1) + x[1] * x[1] + x[2] * x[2]);
            return Point{Vec3(x0, x[1], x[2])};
        }
        default: return Point{Vec3(x[0], x[1], 0.0)};
    }
}

Vec3 project_tangent(const SpaceForm& space, const Point& p, const Vec3& v) {
    const double c = space.k1() * space.k1();
    switch (space.kind()) {
        case Geometry::Sphere: return v - c * v.dot(p.x) * p.x;
        case Geometry::Hyperbolic: return v + c * minkowski(v, p.x) * p.x;
        default: return Vec3(v[0], v[1], 0.0);
    }
}

double constraint_residual(const SpaceForm& space, const Point& p) {
    const double c = space.k1() * space.k1();
    switch (space.kind()) {
        case Geometry::Sphere: return std::abs(c * p.x.squaredNorm() - 1.0);
        case Geometry::Hyperbolic: {
            if (!(p.x[0] > 0.0)) return std::numeric_limits<double>::infinity();
            // Relative to the scale of the coordinates, so that far-out points
            // are not rejected for ordinary rounding.
            const double scale = c * (p.x[0] * p.x[0] + p.x[1] * p.x[1] + p.x[2] * p.x[2]);
            return std::abs(-c * minkowski(p.x, p.x) - 1.0) / std::max(1.0, scale);
        }
        default: return std::abs(p.x[2]);
    }
}

void validate(const SpaceForm& space, const Point& p, double tol) {
    if (!p.x.allFinite()) throw ConstraintViolation("model point has non-finite coordinates");
    const double res = constraint_residual(space, p);
    if (!(res <= tol)) {
        throw ConstraintViolation(fmt::format("point ({}, {}, {}) is off the {} model (residual {:.3g})",
                                              p.x[0], p.x[1], p.x[2], to_string(space.kind()), res));
    }
}

void validate(const SpaceForm& space, const Tangent& v, double tol) {
    validate(space, v.base, tol);
    const double scale = std::max(1.0, space.norm(v.vec) * v.base.x.norm() * std::max(space.k1(), 1.0));
    double off = 0.0;
    switch (space.kind()) {
        case Geometry::Sphere: off = std::abs(v.vec.dot(v.base.x)); break;
        case Geometry::Hyperbolic: off = std::abs(minkowski(v.vec, v.base.x)); break;
        default: off = std::abs(v.vec[2]); break;
    }
    if (!(off <= tol * scale)) {
        throw ConstraintViolation(fmt::format("tangent vector is not tangent to the model (off-plane {:.3g})", off));
    }
}

double distance(const SpaceForm& space, const Point& a, const Point& b) {
    validate(space, a);
    validate(space, b);
    const double k1 = space.k1();
    switch (space.kind()) {
        case Geometry::Sphere:
            return std::atan2(a.x.cross(b.x).norm(), a.x.dot(b.x)) / k1;
        case Geometry::Hyperbolic: {
            // Spacelike chord: <a-b, a-b> = (4/k1^2) sinh^2(k1 d / 2).
            const Vec3 diff = a.x - b.x;
            const double chord = std::sqrt(std::max(0.0, minkowski(diff, diff)));
            return 2.0 * std::asinh(0.5 * k1 * chord) / k1;
        }
        default: return (a.x - b.x).head<2>().norm();
    }
}

Point exp_map(const SpaceForm& space, const Tangent& v) {
    const double len = space.norm(v.vec);
    if (!std::isfinite(len)) throw DomainError("exp_map of a non-finite tangent");
    if (len == 0.0) return v.base;
    const Vec3 u = v.vec / len;
    const double k1 = space.k1();
    switch (space.kind()) {
        case Geometry::Sphere:
            return project(space, std::cos(k1 * len) * v.base.x + std::sin(k1 * len) / k1 * u);
        case Geometry::Hyperbolic:
            return project(space, std::cosh(k1 * len) * v.base.x + std::sinh(k1 * len) / k1 * u);
        default: return Point{v.base.x + Vec3(v.vec[0], v.vec[1], 0.0)};
    }
}

Vec3 geodesic_velocity(const SpaceForm& space, const Tangent& v) {
    const double len = space.norm(v.vec);
    if (len == 0.0) return Vec3::Zero();
    const Vec3 u = v.vec / len;
    const double k1 = space.k1();
    switch (space.kind()) {
        case Geometry::Sphere: return -k1 * std::sin(k1 * len) * v.base.x + std::cos(k1 * len) * u;
        case Geometry::Hyperbolic: return k1 * std::sinh(k1 * len) * v.base.x + std::cosh(k1 * len) * u;
        default: return u;
    }
}

Vec3 parallel_transport(const SpaceForm& space, const Tangent& v, const Vec3& w) {
    const double len = space.norm(v.vec);
    if (len == 0.0 || space.kind() == Geometry::Flat) return w;
    const Vec3 u = v.vec / len;
    const double along = space.inner(w, u);
    return w - along * u + along * geodesic_velocity(space, v);
}

Tangent log_map(const SpaceForm& space, const Point& base, const Point& target) {
    const double d = distance(space, base, target);
    if (d == 0.0) return Tangent{base, Vec3::Zero()};
    const double c = space.k1() * space.k1();
    Vec3 w;
    switch (space.kind()) {
        case Geometry::Sphere: {
            w = target.x - c * base.x.dot(target.x) * base.x;
            // Distance is measured with atan2, so this test is accurate even
            // when the transverse component is tiny.
            if (d > space.diameter() * (1.0 - 1e-12)) {
                throw DomainError("log_map of an antipodal pair on the sphere is undefined");
            }
            break;
        }
        case Geometry::Hyperbolic:
            w = target.x + c * minkowski(base.x, target.x) * base.x;
            break;
        default:
            w = Vec3(target.x[0] - base.x[0], target.x[1] - base.x[1], 0.0);
            break;
    }
    const double wn = space.norm(w);
    if (wn == 0.0) return Tangent{base, Vec3::Zero()};
    return Tangent{base, d / wn * w};
}

double angle_between(const SpaceForm& space, const Tangent& u, const Tangent& v) {
    const double nu = space.norm(u.vec);
    const double nv = space.norm(v.vec);
    if (nu == 0.0 || nv == 0.0) throw DomainError("angle_between requires nonzero tangents");
    const Vec3 a = u.vec / nu;
    const Vec3 b = v.vec / nv;
    return 2.0 * std::atan2(space.norm(a - b), space.norm(a + b));
}

Vec3 rotate_quarter(const SpaceForm& space, const Point& p, const Vec3& v) {
    switch (space.kind()) {
        case Geometry::Sphere: return space.k1() * p.x.cross(v);
        case Geometry::Hyperbolic: return space.k1() * lorentz_flip(p.x.cross(v));
        default: return Vec3(-v[1], v[0], 0.0);
    }
}

Frame frame_at(const SpaceForm& space, const Point& p) {
    Vec3 seed;
    switch (space.kind()) {
        case Geometry::Sphere:
            seed = std::abs(p.x[0]) * space.k1() < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
            break;
        case Geometry::Hyperbolic: seed = Vec3::UnitY(); break;
        default: seed = Vec3::UnitX(); break;
    }
    Vec3 e1 = project_tangent(space, p, seed);
    e1 /= space.norm(e1);
    return Frame{e1, rotate_quarter(space, p, e1)};
}

Point polar_point(const SpaceForm& space, const Point& p, const Frame& frame, double angle,
                  double dist) {
    return exp_map(space, Tangent{p, dist * (std::cos(angle) * frame.e1 + std::sin(angle) * frame.e2)});
}

double mu0(const SpaceForm& space, double t) {
    if (!(t > 0.0)) throw DomainError(fmt::format("mu0 requires t > 0, got {}", t));
    const double k1 = space.k1();
    switch (space.kind()) {
        case Geometry::Sphere: {
            if (!(t < space.diameter())) {
                throw DomainError(fmt::format("mu0 on the sphere requires t < pi/k1, got {}", t));
            }
            const double arg = k1 * t;
            if (std::abs(arg - kPi / 2) <= 4.0 * std::numeric_limits<double>::epsilon()) return 0.0;
            return k1 * std::cos(arg) / std::sin(arg);
        }
        case Geometry::Hyperbolic: return k1 / std::tanh(k1 * t);
        default: return 1.0 / t;
    }
}

bool valid_circle_curvature(const SpaceForm& space, double k0) {
    if (!std::isfinite(k0)) return false;
    switch (space.kind()) {
        case Geometry::Sphere: return k0 >= 0.0;
        case Geometry::Hyperbolic: return k0 > space.k1();
        default: return k0 > 0.0;
    }
}

double circle_radius_of_curvature(const SpaceForm& space, double k0) {
    if (!valid_circle_curvature(space, k0)) {
        throw DomainError(fmt::format("no closed circle of curvature {} exists in the {} space form (k1 = {})",
                                      k0, to_string(space.kind()), space.k1()));
    }
    const double k1 = space.k1();
    switch (space.kind()) {
        case Geometry::Sphere: return std::atan2(k1, k0) / k1;          // arccot(k0/k1)
        case Geometry::Hyperbolic: return std::atanh(k1 / k0) / k1;     // arccoth(k0/k1)
        default: return 1.0 / k0;
    }
}

double cycle_curvature(const SpaceForm& space, const Point& a, const Point& b, const Point& c) {
    if (space.kind() == Geometry::Flat) {
        const Eigen::Vector2d ab = (b.x - a.x).head<2>();
        const Eigen::Vector2d bc = (c.x - b.x).head<2>();
        const Eigen::Vector2d ac = (c.x - a.x).head<2>();
        const double denom = ab.norm() * bc.norm() * ac.norm();
        if (denom == 0.0) throw DomainError("cycle_curvature needs three distinct points");
        return 2.0 * (ab[0] * bc[1] - ab[1] * bc[0]) / denom;
    }
    // The three points span an affine plane whose section of the model surface
    // is the cycle; its geodesic curvature depends only on the plane.
    const Vec3 n = (b.x - a.x).cross(c.x - a.x);
    const double offset = n.dot(b.x);
    const double k1sq = space.k1() * space.k1();
    double q = 0.0;
    double denom_sq = 0.0;
    if (space.kind() == Geometry::Sphere) {
        q = n.squaredNorm();
        denom_sq = q - k1sq * offset * offset;
    } else {
        q = minkowski(lorentz_flip(n), lorentz_flip(n));
        denom_sq = q + k1sq * offset * offset;
    }
    if (q == 0.0 && offset == 0.0) throw DomainError("cycle_curvature needs three distinct points");
    if (denom_sq <= 0.0) {
        return std::copysign(std::numeric_limits<double>::infinity(), offset);
    }
    return k1sq * offset / std::sqrt(denom_sq);
}

}  // namespace sphericity
