#pragma once

#include "sphericity/curve.hpp"
#include "sphericity/radial.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace sphericity {

struct AngleBound {
    SpaceForm space;
    double k0;
    double R;
    double h;
};

// Validates k0 for the space and 0 <= h <= R (h up to 1e-12 above R is
// clamped).
AngleBound make_angle_bound(const SpaceForm& space, double k0, double h);

// sqrt(1 - sn^2(R - h) / sn^2(R)); evaluated as sqrt(sn(2R - h) sn(h)) / sn(R).
double cos_phi_lower_bound(const AngleBound& bound);
// sn(h) / sn(R).
double cos_phi_weak_bound(const AngleBound& bound);

// Angle at a point of a radius-R circle seen from a base point at distance
// R - h from the centre, where alpha is the angle at the base point between
// the centre and the circle point: sin(phi) = sn(R - h) / sn(R) * sin(alpha).
double circle_exact_angle(const SpaceForm& space, double R, double h, double alpha);

// Solution of g' + mu0 g = 0 with g(t1) = f_t1: f_t1 sn(t1) / sn(t).
double comparison_g(const SpaceForm& space, double f_t1, double t1, double t);

enum class K0Mode { Declared, Measured };

struct AngleOptions {
    K0Mode mode = K0Mode::Measured;
    double tolerance = 1e-9;
    int corner_band = 2;
};

struct AngleRow {
    double s;
    double t;
    double phi;
    double cos_phi;
    double bound_cos;
    double slack;
    bool excluded;
};

struct SlackSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    // Quantiles at 0.01, 0.1, 0.5, 0.9, 0.99.
    std::array<double, 5> quantiles{};
    std::size_t count = 0;
};

SlackSummary summarize(std::vector<double> values);

struct AngleReport {
    std::vector<AngleRow> rows;
    double h = 0.0;
    bool h_clamped = false;
    double k0_used = 0.0;
    double R = 0.0;
    double bound_cos = 0.0;
    double min_slack = 0.0;
    std::size_t argmin_slack = 0;
    SlackSummary slack;
    std::size_t excluded_corner_count = 0;
    double tolerance = 0.0;
    bool pass = false;
};

// Judges cos(phi) >= bound(h) at every sample. Hypothesis violations (k0 out
// of range for the space, sphere curve outside a closed hemisphere) raise
// HypothesisError.
AngleReport verify_angle_bound(const ClosedCurve& curve, const Point& o, const AngleOptions& options = {});

// Shared by the warped verifier: judge measured angles against a bound.
AngleReport judge_angles(const SpaceForm& space, double k0, double h, const std::vector<double>& s,
                         const std::vector<double>& t, const std::vector<double>& phi,
                         const std::vector<bool>& excluded, double tolerance);

}  // namespace sphericity
