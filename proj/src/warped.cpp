#include "sphericity/warped.hpp"

#include "sphericity/errors.hpp"
#include "sphericity/numerics.hpp"
#include "sphericity/spindle.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sphericity {

std::string_view to_string(WarpFamily family) {
    switch (family) {
        case WarpFamily::Flat: return "flat";
        case WarpFamily::Hyperbolic: return "hyperbolic";
        case WarpFamily::Sphere: return "sphere";
        case WarpFamily::Cubic: return "cubic";
        case WarpFamily::Blend: return "blend";
        case WarpFamily::PerturbedSine: return "perturbed_sine";
    }
    return "flat";
}

WarpFamily warp_family_from_string(std::string_view name) {
    for (WarpFamily f : {WarpFamily::Flat, WarpFamily::Hyperbolic, WarpFamily::Sphere, WarpFamily::Cubic,
                         WarpFamily::Blend, WarpFamily::PerturbedSine}) {
        if (to_string(f) == name) return f;
    }
    throw DomainError(fmt::format("unknown warp family '{}'", name));
}

namespace {

constexpr std::size_t kBandRadii = 10000;
constexpr double kBandGuard = 1e-9;

double sinhc(double x) { return std::abs(x) < 1e-8 ? 1.0 + x * x / 6.0 : std::sinh(x) / x; }

double stretch(const WarpProfile& p) { return 1.0 / std::sqrt(1.0 - 6.0 * p.delta); }

}  // namespace

double WarpedMetric::f(double t) const {
    const WarpProfile& p = profile_;
    switch (p.family) {
        case WarpFamily::Flat: return t;
        case WarpFamily::Hyperbolic: return std::sinh(p.k * t) / p.k;
        case WarpFamily::Sphere: return std::sin(p.k * t) / p.k;
        case WarpFamily::Cubic: return t + p.epsilon * t * t * t;
        case WarpFamily::Blend: return (1.0 - p.weight) * t + p.weight * std::sinh(p.k * t) / p.k;
        case WarpFamily::PerturbedSine: {
            const double ak = stretch(p) * p.k;
            const double s = std::sin(ak * t);
            return (s + p.delta * s * s * s) / ak;
        }
    }
    return t;
}

double WarpedMetric::df(double t) const {
    const WarpProfile& p = profile_;
    switch (p.family) {
        case WarpFamily::Flat: return 1.0;
        case WarpFamily::Hyperbolic: return std::cosh(p.k * t);
        case WarpFamily::Sphere: return std::cos(p.k * t);
        case WarpFamily::Cubic: return 1.0 + 3.0 * p.epsilon * t * t;
        case WarpFamily::Blend: return (1.0 - p.weight) + p.weight * std::cosh(p.k * t);
        case WarpFamily::PerturbedSine: {
            const double x = stretch(p) * p.k * t;
            const double s = std::sin(x);
            return std::cos(x) * (1.0 + 3.0 * p.delta * s * s);
        }
    }
    return 1.0;
}

double WarpedMetric::ddf(double t) const {
    const WarpProfile& p = profile_;
    switch (p.family) {
        case WarpFamily::Flat: return 0.0;
        case WarpFamily::Hyperbolic: return p.k * std::sinh(p.k * t);
        case WarpFamily::Sphere: return -p.k * std::sin(p.k * t);
        case WarpFamily::Cubic: return 6.0 * p.epsilon * t;
        case WarpFamily::Blend: return p.weight * p.k * std::sinh(p.k * t);
        case WarpFamily::PerturbedSine: {
            const double ak = stretch(p) * p.k;
            const double s = std::sin(ak * t);
            return ak * (-s + p.delta * (6.0 * s - 9.0 * s * s * s));
        }
    }
    return 0.0;
}

double WarpedMetric::K(double t) const {
    const WarpProfile& p = profile_;
    switch (p.family) {
        case WarpFamily::Flat: return 0.0;
        case WarpFamily::Hyperbolic: return -p.k * p.k;
        case WarpFamily::Sphere: return p.k * p.k;
        case WarpFamily::Cubic: return -6.0 * p.epsilon / (1.0 + p.epsilon * t * t);
        case WarpFamily::Blend: {
            const double c = sinhc(p.k * t);
            return -p.weight * p.k * p.k * c / ((1.0 - p.weight) + p.weight * c);
        }
        case WarpFamily::PerturbedSine: {
            const double a = stretch(p);
            const double s = std::sin(a * p.k * t);
            return a * a * p.k * p.k * (1.0 - 6.0 * p.delta + 9.0 * p.delta * s * s) / (1.0 + p.delta * s * s);
        }
    }
    return 0.0;
}

double WarpedMetric::K_finite_difference(double t) const {
    const double h = 1e-2 * (profile_.k > 0.0 ? std::min(1.0, 1.0 / profile_.k) : 1.0);
    const double d2 = (-f(t + 2 * h) + 16 * f(t + h) - 30 * f(t) + 16 * f(t - h) - f(t - 2 * h)) / (12 * h * h);
    return -d2 / f(t);
}

WarpedMetric WarpedMetric::make(const WarpProfile& profile) {
    const WarpProfile& p = profile;
    if (!(p.T > 0.0)) throw DomainError(fmt::format("warp radius T = {} must be positive", p.T));
    const bool uses_k = p.family == WarpFamily::Hyperbolic || p.family == WarpFamily::Sphere ||
                        p.family == WarpFamily::Blend || p.family == WarpFamily::PerturbedSine;
    if (uses_k && !(p.k > 0.0)) throw DomainError(fmt::format("warp scale k = {} must be positive", p.k));
    if (p.family == WarpFamily::Blend && !(p.weight >= 0.0 && p.weight <= 1.0)) {
        throw DomainError(fmt::format("blend weight {} outside [0, 1]", p.weight));
    }
    if (p.family == WarpFamily::PerturbedSine && !(p.delta > -1.0 && p.delta < 1.0 / 6.0)) {
        throw DomainError(fmt::format("perturbation delta = {} outside (-1, 1/6)", p.delta));
    }

    WarpedMetric m(profile);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    // K has a finite limit at the pole, which belongs to the band.
    for (std::size_t i = 0; i <= kBandRadii; ++i) {
        const double t = p.T * static_cast<double>(i) / kBandRadii;
        if (i > 0 && !(m.f(t) > 0.0)) throw RejectionError(fmt::format("warping function vanishes at t = {}", t), t);
        const double K = m.K(t);
        if (p.declared_band) {
            const auto [dlo, dhi] = *p.declared_band;
            if (K < dlo - kBandGuard || K > dhi + kBandGuard) {
                throw RejectionError(
                    fmt::format("curvature {} at t = {} outside the declared band [{}, {}]", K, t, dlo, dhi), t);
            }
        }
        lo = std::min(lo, K);
        hi = std::max(hi, K);
    }
    m.band_ = {lo, hi};
    return m;
}

WarpedMetric make_warped(const WarpProfile& profile) { return WarpedMetric::make(profile); }

double circle_normal_curvature(const WarpedMetric& metric, double t) {
    if (!(t > 0.0 && t <= metric.T())) {
        throw DomainError(fmt::format("radius {} outside (0, {}]", t, metric.T()));
    }
    return metric.df(t) / metric.f(t);
}

Comparison comparison_for(const WarpedMetric& metric) {
    const auto [lo, hi] = metric.band();
    Comparison c;
    if (hi <= kBandGuard) {
        c.k1 = std::sqrt(std::max(0.0, -lo));
        if (c.k1 > 0.0) c.space = SpaceForm::hyperbolic(c.k1);
    } else if (lo >= -kBandGuard) {
        c.positive = true;
        c.k1 = std::sqrt(std::max(0.0, lo));
        c.k2 = std::sqrt(hi);
        if (c.k1 > 0.0) c.space = SpaceForm::sphere(c.k1);
    } else {
        throw HypothesisError(fmt::format("curvature band [{}, {}] changes sign", lo, hi));
    }
    return c;
}

MuComparisonReport verify_mu_comparison(const WarpedMetric& metric, std::size_t radii, double tolerance) {
    MuComparisonReport rep;
    rep.comparison = comparison_for(metric);
    const SpaceForm& space = rep.comparison.space;
    if (metric.T() >= space.diameter()) {
        throw HypothesisError(fmt::format("radius T = {} reaches the comparison diameter {}", metric.T(), space.diameter()));
    }
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= radii; ++i) {
        const double t = metric.T() * static_cast<double>(i) / static_cast<double>(radii);
        const double slack = mu0(space, t) - circle_normal_curvature(metric, t);
        if (slack < rep.min_slack) {
            rep.min_slack = slack;
            rep.argmin_t = t;
        }
        rep.max_abs_slack = std::max(rep.max_abs_slack, std::abs(slack));
    }
    rep.count = radii;
    rep.pass = rep.min_slack >= -tolerance;
    return rep;
}

double RadialFunction::operator()(double theta) const {
    double v = c0;
    for (const Harmonic& h : harmonics) v += h.a * std::cos(h.n * theta) + h.b * std::sin(h.n * theta);
    return v;
}

double RadialFunction::derivative(double theta) const {
    double v = 0.0;
    for (const Harmonic& h : harmonics) v += h.n * (-h.a * std::sin(h.n * theta) + h.b * std::cos(h.n * theta));
    return v;
}

double RadialFunction::second_derivative(double theta) const {
    double v = 0.0;
    for (const Harmonic& h : harmonics) {
        v -= h.n * h.n * (h.a * std::cos(h.n * theta) + h.b * std::sin(h.n * theta));
    }
    return v;
}

double warped_geodesic_curvature(const WarpedMetric& metric, double rho, double drho, double ddrho) {
    const double f = metric.f(rho);
    const double df = metric.df(rho);
    const double q = drho * drho + f * f;
    return (f * f * df + 2.0 * df * drho * drho - f * ddrho) / (q * std::sqrt(q));
}

WarpedCurve WarpedCurve::make(const WarpedMetric& metric, const RadialFunction& rho, std::size_t samples) {
    for (const Harmonic& h : rho.harmonics) {
        if (h.n <= 0 || h.n % 2 != 0) {
            throw DomainError(fmt::format("radial harmonic n = {} must be even and positive", h.n));
        }
    }
    if (samples < 16) throw DomainError("warped curve needs at least 16 samples");

    const std::size_t n = samples;
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = rho(step * static_cast<double>(i));
        if (!(t[i] > 0.0 && t[i] <= metric.T())) {
            throw RejectionError(fmt::format("curve radius {} outside (0, {}]", t[i], metric.T()),
                                 step * static_cast<double>(i));
        }
    }

    WarpedCurve c;
    c.rho_ = rho;
    c.samples_.resize(n);
    auto at = [&](std::size_t i, int k) { return t[(i + n + static_cast<std::size_t>(k + 2) - 2) % n]; };
    std::vector<double> speed(n);
    c.kmin_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d1 = (-at(i, 2) + 8 * at(i, 1) - 8 * at(i, -1) + at(i, -2)) / (12 * step);
        const double d2 = (-at(i, 2) + 16 * at(i, 1) - 30 * t[i] + 16 * at(i, -1) - at(i, -2)) / (12 * step * step);
        const double f = metric.f(t[i]);
        WarpedSample& smp = c.samples_[i];
        smp.theta = step * static_cast<double>(i);
        smp.t = t[i];
        smp.dt = d1;
        smp.ddt = d2;
        smp.kappa = warped_geodesic_curvature(metric, t[i], d1, d2);
        smp.phi = std::atan2(std::abs(d1), f);
        speed[i] = std::hypot(d1, f);
        c.kmin_ = std::min(c.kmin_, smp.kappa);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        c.samples_[i].s = s;
        s += 0.5 * step * (speed[i] + speed[(i + 1) % n]);
    }
    c.length_ = s;

    std::size_t imin = 0;
    std::size_t imax = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (t[i] < t[imin]) imin = i;
        if (t[i] > t[imax]) imax = i;
    }
    auto theta_of = [&](std::size_t i) { return step * static_cast<double>(i); };
    c.r_ = std::min(t[imin], golden_section_min(rho, theta_of(imin) - step, theta_of(imin) + step).value);
    c.rho1_ = std::max(t[imax], golden_section_max(rho, theta_of(imax) - step, theta_of(imax) + step).value);
    return c;
}

WarpedReport verify_theorem2_on_warped(const WarpedMetric& metric, const WarpedCurve& curve,
                                       const WarpedOptions& options) {
    WarpedReport rep;
    rep.comparison = comparison_for(metric);
    const Comparison& cmp = rep.comparison;
    rep.kmin = curve.kmin();

    double k0 = rep.kmin;
    if (cmp.positive) {
        if (k0 < 0.0 && k0 >= -1e-9) k0 = 0.0;
        if (!(k0 >= 0.0)) throw HypothesisError(fmt::format("curve needs kmin >= 0, got {}", rep.kmin));
        const double ball = 0.5 * std::numbers::pi / cmp.k2;
        if (!(curve.circumradius() < ball)) {
            throw HypothesisError(
                fmt::format("curve leaves the ball of radius pi/(2 k2) = {} about the pole", ball));
        }
    } else if (!(k0 > cmp.k1)) {
        throw HypothesisError(fmt::format("curve needs kmin > k1 = {}, got {}", cmp.k1, rep.kmin));
    }
    if (!valid_circle_curvature(cmp.space, k0)) {
        throw HypothesisError(fmt::format("kmin = {} is not a circle curvature of the comparison space", k0));
    }

    const auto& smp = curve.samples();
    std::vector<double> s(smp.size()), t(smp.size()), phi(smp.size());
    for (std::size_t i = 0; i < smp.size(); ++i) {
        s[i] = smp[i].s;
        t[i] = smp[i].t;
        phi[i] = smp[i].phi;
    }
    rep.angle = judge_angles(cmp.space, k0, curve.inradius(), s, t, phi, std::vector<bool>(smp.size(), false),
                             options.angle_tolerance);

    WarpedWidth& w = rep.width;
    w.k0_used = k0 - options.k0_margin;
    if (cmp.space.kind() == Geometry::Sphere) w.k0_used = std::max(w.k0_used, 0.0);
    if (!valid_circle_curvature(cmp.space, w.k0_used)) {
        throw HypothesisError(fmt::format("kmin = {} leaves no margin above k1 = {}", rep.kmin, cmp.k1));
    }
    w.r = curve.inradius();
    w.rho1 = curve.circumradius();
    w.d = w.rho1 - w.r;
    w.d0 = spindle_optimum(cmp.space, w.k0_used).d0;
    w.margin = w.d0 - w.d;
    w.pass = w.margin >= -options.width_tolerance;

    rep.pass = rep.angle.pass && w.pass;
    return rep;
}

}  // namespace sphericity

namespace sphericity {

RadialFunction random_radial_function(const WarpedMetric& metric, Rng& rng, std::size_t samples, int max_tries) {
    const Comparison cmp = comparison_for(metric);
    double reach = metric.T();
    if (cmp.positive) reach = std::min(reach, 0.5 * std::numbers::pi / cmp.k2);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        RadialFunction rho;
        rho.c0 = rng.uniform(0.3, 0.8) * reach;
        double weight = 0.0;
        for (int n : {2, 4, 6}) {
            const Harmonic h{n, rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            weight += std::abs(h.a) + std::abs(h.b);
            rho.harmonics.push_back(h);
        }
        const double budget = rng.uniform(0.02, 0.25) * rho.c0;
        for (Harmonic& h : rho.harmonics) {
            h.a *= budget / weight;
            h.b *= budget / weight;
        }
        if (rho.c0 + budget >= 0.95 * reach) continue;
        const WarpedCurve curve = WarpedCurve::make(metric, rho, samples);
        const double need = cmp.positive ? 0.0 : cmp.k1;
        if (curve.kmin() > need + 1e-5) return rho;
    }
    throw HypothesisError(fmt::format("no hypothesis-satisfying curve found in {} draws", max_tries));
}

}  // namespace sphericity
