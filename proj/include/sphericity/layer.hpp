#pragma once

#include "sphericity/curve.hpp"

#include <vector>

namespace sphericity {

struct Incenter {
    Point center;
    double r = 0.0;
    // Largest min-distance seen on the search grid, and the largest found at
    // the eight compass perturbations of the centre.
    double grid_max = 0.0;
    double perturbed_max = 0.0;
    bool certified = false;
};

struct IncenterOptions {
    int grid = 40;
    int starts = 3;
    double perturbation = 1e-5;
    double grid_slack = 1e-7;
};

// Distance from p to the curve, negated outside the enclosed region.
double signed_min_distance(const ClosedCurve& curve, const Point& p);

Incenter incenter(const ClosedCurve& curve, const IncenterOptions& options = {});

struct LayerReport {
    Incenter inscribed;
    double r = 0.0;
    double rho1 = 0.0;
    double d = 0.0;
    double kmin = 0.0;
    double k0_used = 0.0;
    double d0 = 0.0;
    double margin = 0.0;
    bool pass = false;
};

struct LayerOptions {
    // Subtracted from the measured kmin before evaluating d0.
    double k0_margin = 1e-6;
    double pass_tolerance = 1e-7;
    IncenterOptions incenter;
};

// Throws HypothesisError when kmin is out of range for the space or a
// sphere curve does not fit in an open hemisphere.
LayerReport layer_width(const ClosedCurve& curve, const LayerOptions& options = {});

struct MinWidthLayer {
    Point center;
    double width;
};

// Local direct search for the centre minimising farthest - nearest distance,
// started at `start`. Never wider than the layer about `start`.
MinWidthLayer min_width_layer(const ClosedCurve& curve, const Point& start);
MinWidthLayer min_width_layer(const ClosedCurve& curve);

// The shorter arc of the radius-R circle (R from k0) from p to q, bulging to
// the right of the direction p -> q when `right` is set.
std::vector<Point> circle_arc(const SpaceForm& space, const Point& p, const Point& q, double k0, bool right,
                              std::size_t samples);

}  // namespace sphericity
