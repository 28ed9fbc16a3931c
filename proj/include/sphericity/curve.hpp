#pragma once

#include "sphericity/space_form.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace sphericity {

enum class Provenance { Circle, Lune, SupportFunction, FrameOde, DiscIntersection, Loaded };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view name);

struct CurveSample {
    Point point;
    double s = 0.0;
    Vec3 tangent = Vec3::Zero();
    Vec3 normal_out = Vec3::Zero();
    double kappa = 0.0;
    bool corner = false;

    Tangent tangent_vector() const { return {point, tangent}; }
    Tangent normal_vector() const { return {point, normal_out}; }
};

// Generator output before measurement. `tangents` may be left empty (they are
// then differentiated from the points); `corners` may be empty (smooth curve).
// Stored `kappas` (deserialised curves) replace the curvature measurement.
struct RawCurve {
    std::vector<Point> points;
    std::vector<double> s;
    std::vector<Vec3> tangents;
    std::vector<bool> corners;
    std::vector<double> kappas;
    double length = 0.0;
    double closure_gap = 0.0;
};

// Normal (log) coordinates around a centre point. Used for winding tests,
// orientation, simplicity and the incenter search grid.
class Chart {
public:
    Chart(const SpaceForm& space, const Point& center);
    static Chart around(const SpaceForm& space, std::span<const Point> points);

    Eigen::Vector2d to_chart(const Point& p) const;
    Point from_chart(const Eigen::Vector2d& q) const;

    const Point& center() const { return center_; }
    const SpaceForm& space() const { return space_; }

private:
    SpaceForm space_;
    Point center_;
    Frame frame_;
};

using Polygon = std::vector<Eigen::Vector2d>;

double signed_area(const Polygon& poly);
int winding_number(const Polygon& poly, const Eigen::Vector2d& q);
bool is_simple(const Polygon& poly);

class ClosedCurve {
public:
    static constexpr double kUndeclared = std::numeric_limits<double>::quiet_NaN();

    // Measures tangents, normals and curvature, and checks orientation,
    // simplicity and (on the sphere) the closed-hemisphere condition.
    static ClosedCurve assemble(const SpaceForm& space, RawCurve raw, Provenance provenance,
                                double declared_k0 = kUndeclared);

    const SpaceForm& space() const { return space_; }
    const std::vector<CurveSample>& samples() const { return samples_; }
    const CurveSample& operator[](std::size_t i) const { return samples_[i]; }
    std::size_t size() const { return samples_.size(); }
    double total_length() const { return length_; }
    double kmin() const { return kmin_; }
    Provenance provenance() const { return provenance_; }
    double declared_k0() const { return declared_k0_; }
    double closure_gap() const { return closure_gap_; }
    bool has_corners() const { return !corner_indices_.empty(); }
    const std::vector<std::size_t>& corner_indices() const { return corner_indices_; }

    std::vector<Point> points() const;
    Polygon chart_polygon(const Chart& chart) const;
    Chart chart() const { return Chart(space_, chart_center_); }
    const Polygon& polygon() const { return chart_poly_; }

    std::size_t next(std::size_t i) const { return (i + 1) % samples_.size(); }
    std::size_t prev(std::size_t i) const { return (i + samples_.size() - 1) % samples_.size(); }

    // Samples within `band` indices of a corner (the corner itself included).
    bool near_corner(std::size_t i, int band) const;

    double max_sample_gap() const;

    // Point at arclength s (taken modulo the length) by 4-point Lagrange
    // interpolation inside one smooth piece.
    Point point_at(double s) const;

    // Winding-number test in the curve chart.
    bool contains(const Point& p) const;

private:
    ClosedCurve() : space_(SpaceForm::flat()) {}

    SpaceForm space_;
    std::vector<CurveSample> samples_;
    std::vector<double> s_;
    std::vector<std::size_t> corner_indices_;
    Point chart_center_;
    Polygon chart_poly_;
    double length_ = 0.0;
    double kmin_ = 0.0;
    double declared_k0_ = kUndeclared;
    double closure_gap_ = 0.0;
    Provenance provenance_ = Provenance::Loaded;
};

// Curvature at the centre of a window of 5 consecutive samples: circles
// through the 3-point cycles at spacing h and 2h, Richardson-combined.
// Throws CornerError when a corner lies inside the window.
double measure_curvature(const SpaceForm& space, std::span<const Point> window,
                         std::span<const bool> corners = {});

// Per-sample curvature of a closed sample sequence, with one-sided cycles
// next to corners; a corner itself gets the smaller one-sided value.
std::vector<double> measure_curvatures(const SpaceForm& space, std::span<const Point> points,
                                       const std::vector<bool>& corners);

// Monotone decreasing function of distance that is cheap to evaluate.
double closeness(const SpaceForm& space, const Point& a, const Point& b);

struct CurveDistance {
    double distance;
    double s;
    std::size_t index;
};

// Nearest / farthest curve point from p, refined by golden section on the
// interpolated curve around the best sample.
CurveDistance nearest_point(const ClosedCurve& curve, const Point& p);
CurveDistance farthest_point(const ClosedCurve& curve, const Point& p);

// Whether all points fit in a closed (open) hemisphere; flat and hyperbolic
// curves always do.
bool in_closed_hemisphere(const SpaceForm& space, std::span<const Point> points, double tol = 1e-9);
bool in_open_hemisphere(const SpaceForm& space, std::span<const Point> points);

}  // namespace sphericity
