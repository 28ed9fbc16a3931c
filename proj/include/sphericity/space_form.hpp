#pragma once

// Geometry kernel for the three two-dimensional space forms.
//
// Coordinate models:
//   Flat        the plane, stored as (x, y, 0)
//   Sphere      the round sphere |x|^2 = 1/k1^2 in Euclidean 3-space
//   Hyperbolic  the upper sheet <x,x> = -1/k1^2, x0 > 0, of Minkowski 3-space
//               with <a,b> = -a0 b0 + a1 b1 + a2 b2
//
// All functions are pure; SpaceForm, Point and Tangent are plain values.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <string>
#include <string_view>

namespace sphericity {

using Vec3 = Eigen::Vector3d;

enum class Geometry { Flat, Sphere, Hyperbolic };

std::string_view to_string(Geometry g);
Geometry geometry_from_string(std::string_view name);

/// Which model geometry and its curvature scale k1 (1/length). The sectional
/// curvature is derived: +k1^2, -k1^2 or 0.
class SpaceForm {
public:
    static SpaceForm flat() { return SpaceForm(Geometry::Flat, 0.0); }
    static SpaceForm sphere(double k1);
    static SpaceForm hyperbolic(double k1);
    static SpaceForm make(Geometry kind, double k1);

    Geometry kind() const { return kind_; }
    double k1() const { return k1_; }
    double curvature() const;

    /// Generalized sine: t, sin(k1 t)/k1, sinh(k1 t)/k1.
    double sn(double t) const;
    /// Generalized cosine: 1, cos(k1 t), cosh(k1 t).
    double cs(double t) const;

    /// Metric on tangent vectors (Euclidean, or Minkowski restricted to a
    /// tangent plane of the hyperboloid where it is positive definite).
    double inner(const Vec3& a, const Vec3& b) const;
    double norm(const Vec3& v) const;

    /// Upper limit of geodesic distance (pi/k1 on the sphere, +inf otherwise).
    double diameter() const;

    bool operator==(const SpaceForm&) const = default;

private:
    SpaceForm(Geometry kind, double k1) : kind_(kind), k1_(k1) {}

    Geometry kind_;
    double k1_;
};

struct Point {
    Vec3 x = Vec3::Zero();

    static Point flat(double x, double y) { return Point{Vec3(x, y, 0.0)}; }
};

struct Tangent {
    Point base;
    Vec3 vec = Vec3::Zero();
};

/// Oriented orthonormal frame of a tangent plane (e2 = J e1).
struct Frame {
    Vec3 e1;
    Vec3 e2;
};

// --- model constraint -----------------------------------------------------

/// Canonical base point: (0,0) / north pole / hyperboloid vertex.
Point origin(const SpaceForm& space);

/// Rescale ambient coordinates back onto the model surface.
Point project(const SpaceForm& space, const Vec3& x);

/// Remove the normal component of `v` at `p`.
Vec3 project_tangent(const SpaceForm& space, const Point& p, const Vec3& v);

/// Relative violation of the model constraint (0 for the plane).
double constraint_residual(const SpaceForm& space, const Point& p);

/// Throws ConstraintViolation if the residual exceeds `tol`.
void validate(const SpaceForm& space, const Point& p, double tol = 1e-9);
void validate(const SpaceForm& space, const Tangent& v, double tol = 1e-9);

// --- geodesics ----------------------------------------------------------------

double distance(const SpaceForm& space, const Point& a, const Point& b);

Point exp_map(const SpaceForm& space, const Tangent& v);

/// Inverse of exp_map inside the injectivity radius. Antipodal pairs on the
/// sphere raise DomainError.
Tangent log_map(const SpaceForm& space, const Point& base, const Point& target);

/// Riemannian angle in [0, pi] between two nonzero tangents at one base point.
double angle_between(const SpaceForm& space, const Tangent& u, const Tangent& v);

/// Quarter turn J in the oriented tangent plane at p.
Vec3 rotate_quarter(const SpaceForm& space, const Point& p, const Vec3& v);

/// Parallel transport of `w` along the geodesic t -> exp(t v), t in [0, 1].
Vec3 parallel_transport(const SpaceForm& space, const Tangent& v, const Vec3& w);

/// Velocity at time 1 of the geodesic t -> exp(t v).
Vec3 geodesic_velocity(const SpaceForm& space, const Tangent& v);

Frame frame_at(const SpaceForm& space, const Point& p);

/// exp_p(dist * (cos(angle) e1 + sin(angle) e2)).
Point polar_point(const SpaceForm& space, const Point& p, const Frame& frame,
                  double angle, double dist);

// --- circles ------------------------------------------------------------------

/// Geodesic curvature of a radius-t circle: 1/t, k1 cot(k1 t), k1 coth(k1 t).
double mu0(const SpaceForm& space, double t);

/// Radius of the circle of geodesic curvature k0 (inverse of mu0).
double circle_radius_of_curvature(const SpaceForm& space, double k0);

/// True when k0 is a valid curvature for a closed circle in `space`.
bool valid_circle_curvature(const SpaceForm& space, double k0);

/// Signed geodesic curvature of the unique constant-curvature cycle through
/// three points (positive when a -> b -> c turns left).
double cycle_curvature(const SpaceForm& space, const Point& a, const Point& b,
                       const Point& c);

}  // namespace sphericity
