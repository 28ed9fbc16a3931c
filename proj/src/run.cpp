#include "sphericity/report.hpp"

#include "sphericity/errors.hpp"
#include "sphericity/layer.hpp"
#include "sphericity/spindle.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#ifndef SPHERICITY_VERSION
#define SPHERICITY_VERSION "0.0.0"
#endif

namespace sphericity {

std::string_view tool_version() { return SPHERICITY_VERSION; }

std::string_view to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::HypothesisViolation: return "hypothesis_violation";
    }
    return "fail";
}

const Series* SuiteResult::find_series(const std::string& name) const {
    for (const Series& s : series) {
        if (s.name == name) return &s;
    }
    return nullptr;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string indexed(const std::string& base, std::size_t i, std::size_t count) {
    return count == 1 ? base : fmt::format("{}-{:03d}", base, i);
}

Json summary_json(const SlackSummary& s) {
    return {{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"count", s.count},
            {"quantiles", {{"0.01", s.quantiles[0]}, {"0.1", s.quantiles[1]}, {"0.5", s.quantiles[2]},
                           {"0.9", s.quantiles[3]}, {"0.99", s.quantiles[4]}}}};
}

Json point_json(const Point& p) { return Json::array({p.x[0], p.x[1], p.x[2]}); }

Check hypothesis_check(const std::string& suite, const std::string& name, const std::string& message) {
    Check c;
    c.suite = suite;
    c.name = name;
    c.measured = c.bound = c.slack = kNaN;
    c.status = Status::HypothesisViolation;
    c.message = message;
    return c;
}

Check bound_check(const std::string& suite, const std::string& name, double measured, double bound, double slack,
                  bool pass) {
    Check c;
    c.suite = suite;
    c.name = name;
    c.measured = measured;
    c.bound = bound;
    c.slack = slack;
    c.status = pass ? Status::Pass : Status::Fail;
    return c;
}

Point tangent_point(const SpaceForm& space, const std::array<double, 2>& xy) {
    const Point o = origin(space);
    const Frame fr = frame_at(space, o);
    return exp_map(space, {o, xy[0] * fr.e1 + xy[1] * fr.e2});
}

std::vector<ClosedCurve> build_curves(const RunConfig& cfg, Rng& rng) {
    const CurveSpec& spec = cfg.curve;
    const SpaceForm& space = cfg.space;
    std::vector<ClosedCurve> out;
    try {
        if (spec.generator == "file") {
            std::ifstream in(spec.path);
            if (!in) throw ConfigError(fmt::format("/curve/path: cannot read '{}'", spec.path));
            std::stringstream buf;
            buf << in.rdbuf();
            Json j;
            try {
                j = Json::parse(buf.str());
            } catch (const Json::parse_error& e) {
                throw ConfigError(fmt::format("{}: {}", spec.path, e.what()));
            }
            out.push_back(curve_from_json(j));
            return out;
        }
        SamplingOptions sampling;
        sampling.samples = spec.samples;
        for (int i = 0; i < spec.count; ++i) {
            const std::string& g = spec.generator;
            if (g == "circle") {
                out.push_back(make_circle(space, tangent_point(space, spec.center), spec.k0, spec.samples));
            } else if (g == "lune") {
                const double r = spec.r ? *spec.r : spindle_optimum(space, spec.k0).r0;
                out.push_back(make_lune(space, spec.k0, r, spec.samples));
            } else if (g == "support" || g == "random_support") {
                if (space.kind() != Geometry::Flat) throw ConfigError("/curve/generator: support curves are planar");
                const SupportFunction sf = g == "support" ? spec.support : random_support_function(rng);
                const double k0 = g == "support" ? spec.k0 : 1.0 / (max_radius_of_curvature(sf) * (1.0 + 1e-9));
                out.push_back(make_support_curve(sf, k0, sampling));
            } else if (g == "frame_ode" || g == "random_frame_ode") {
                const FourierProfile prof = g == "frame_ode" ? spec.profile : random_curvature_profile(space, rng);
                FrameOdeOptions fo;
                fo.sampling = sampling;
                const double guess = spec.length_guess ? *spec.length_guess : circle_length(space, prof.base);
                out.push_back(make_frame_ode_curve(space, prof, guess, fo));
            } else if (g == "disc_intersection" || g == "random_disc") {
                std::vector<Point> centers;
                if (g == "disc_intersection") {
                    for (const auto& c : spec.centers) centers.push_back(tangent_point(space, c));
                } else {
                    centers = random_disc_centers(space, spec.k0, rng);
                }
                out.push_back(make_disc_intersection(space, centers, spec.k0, spec.samples));
            }
            if (g == "circle" || g == "lune" || g == "support" || g == "frame_ode" || g == "disc_intersection") break;
        }
    } catch (const RejectionError& e) {
        throw ConfigError(fmt::format("/curve: {} (theta = {})", e.what(), e.theta()));
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("/curve: {}", e.what()));
    } catch (const NonClosureError& e) {
        throw ConfigError(fmt::format("/curve: {} (residual {})", e.what(), e.residual()));
    }
    return out;
}

Point base_point(const RunConfig& cfg, const ClosedCurve& curve, Rng& rng) {
    const SpaceForm& space = curve.space();
    const std::string& kind = cfg.base.kind;
    if (kind == "origin") return origin(space);
    if (kind == "tangent") return tangent_point(space, cfg.base.coords);
    const Incenter inc = incenter(curve);
    if (kind == "incenter") return inc.center;
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double dist = rng.uniform(0.0, 0.9 * inc.r);
    return polar_point(space, inc.center, frame_at(space, inc.center), angle, dist);
}

void angle_suite(const RunConfig& cfg, const std::vector<ClosedCurve>& curves, Rng& rng, SuiteResult& res) {
    AngleOptions opts;
    opts.mode = cfg.k0_mode;
    opts.tolerance = cfg.tolerances.angle;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const std::string name = indexed("curve", i, curves.size());
        Point o;
        try {
            o = base_point(cfg, curves[i], rng);
        } catch (const DomainError& e) {
            throw ConfigError(fmt::format("/base_point: {}", e.what()));
        }
        AngleReport rep;
        try {
            rep = verify_angle_bound(curves[i], o, opts);
        } catch (const HypothesisError& e) {
            res.checks.push_back(hypothesis_check("angle", name, e.what()));
            continue;
        } catch (const DomainError& e) {
            throw ConfigError(fmt::format("/base_point: {}", e.what()));
        }
        Check c = bound_check("angle", name, rep.min_slack + rep.bound_cos, rep.bound_cos, rep.min_slack, rep.pass);
        c.details = {{"provenance", std::string(to_string(curves[i].provenance()))},
                     {"base_point", point_json(o)},
                     {"h", rep.h},
                     {"h_clamped", rep.h_clamped},
                     {"k0_used", rep.k0_used},
                     {"R", rep.R},
                     {"tolerance", rep.tolerance},
                     {"argmin_s", rep.rows.empty() ? kNaN : rep.rows[rep.argmin_slack].s},
                     {"excluded_corner_count", rep.excluded_corner_count},
                     {"slack", summary_json(rep.slack)}};
        res.checks.push_back(std::move(c));

        Series s{indexed("angle", i, curves.size()), {"s", "t", "phi", "bound", "slack"}, {}};
        for (const AngleRow& row : rep.rows) {
            s.rows.push_back({row.s, row.t, row.phi, row.bound_cos, row.excluded ? kNaN : row.slack});
        }
        res.series.push_back(std::move(s));
    }
}

void width_suite(const RunConfig& cfg, const std::vector<ClosedCurve>& curves, SuiteResult& res) {
    LayerOptions opts;
    opts.k0_margin = cfg.tolerances.k0_margin;
    opts.pass_tolerance = cfg.tolerances.width;
    Series s{"width", {"curve", "r", "rho1", "d", "d0", "margin"}, {}};
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const std::string name = indexed("curve", i, curves.size());
        LayerReport rep;
        try {
            rep = layer_width(curves[i], opts);
        } catch (const HypothesisError& e) {
            res.checks.push_back(hypothesis_check("width", name, e.what()));
            continue;
        }
        Check c = bound_check("width", name, rep.d, rep.d0, rep.margin, rep.pass);
        c.details = {{"provenance", std::string(to_string(curves[i].provenance()))},
                     {"incenter", point_json(rep.inscribed.center)},
                     {"r", rep.r},
                     {"rho1", rep.rho1},
                     {"kmin", rep.kmin},
                     {"k0_used", rep.k0_used},
                     {"incenter_certified", rep.inscribed.certified},
                     {"grid_max", rep.inscribed.grid_max},
                     {"perturbed_max", rep.inscribed.perturbed_max}};
        res.checks.push_back(std::move(c));
        s.rows.push_back({static_cast<double>(i), rep.r, rep.rho1, rep.d, rep.d0, rep.margin});
    }
    res.series.push_back(std::move(s));
}

std::string space_label(const SpaceForm& space) {
    if (space.kind() == Geometry::Flat) return "flat";
    return fmt::format("{}-k1={}", to_string(space.kind()), space.k1());
}

void spindle_suite(const RunConfig& cfg, SuiteResult& res) {
    const SpindleTableSpec& spec = cfg.spindle_table;
    Series table{"spindle-table", {"space", "k1", "k0", "r", "rho", "d", "r0", "d0"}, {}};
    std::vector<Series> curves;
    for (const SpaceForm& space : spec.spaces) {
        for (double k0 : spec.k0) {
            if (!valid_circle_curvature(space, k0)) {
                throw ConfigError(fmt::format("/spindle_table/k0: {} is not a valid circle curvature in {}", k0,
                                              space_label(space)));
            }
            const double R = circle_radius_of_curvature(space, k0);
            const SpindleOptimum opt = spindle_optimum(space, k0);
            const SpindleOptimum num = spindle_optimum_numeric(space, k0);
            const double diff = std::abs(num.d0 - opt.d0);
            Check c = bound_check("spindle-table", fmt::format("{}/k0={}", space_label(space), k0), num.d0, opt.d0,
                                  cfg.tolerances.identity - diff, diff <= cfg.tolerances.identity);
            c.details = {{"R", R},
                         {"r0", opt.r0},
                         {"d0", opt.d0},
                         {"numeric_r0", num.r0},
                         {"numeric_d0", num.d0},
                         {"stationarity_residual", stationarity_residual(space, k0, opt.r0)}};
            if (space.kind() != Geometry::Flat && k0 > 0.0) c.details["d0_rewritten"] = d0_rewritten(space, k0);
            res.checks.push_back(std::move(c));

            Series curve{"spindle", {"r", "rho", "d"}, {}};
            const std::string kind(to_string(space.kind()));
            for (int i = 0; i < spec.r_samples; ++i) {
                const double r = R * i / (spec.r_samples - 1);
                const SpindleParams p = spindle(space, k0, r);
                table.rows.push_back({kind, space.k1(), k0, r, p.rho, p.d, opt.r0, opt.d0});
                curve.rows.push_back({r, p.rho, p.d});
            }
            curves.push_back(std::move(curve));
        }
    }
    for (std::size_t i = 0; i < curves.size(); ++i) curves[i].name = indexed("spindle", i, curves.size());
    res.series.push_back(std::move(table));
    for (Series& s : curves) res.series.push_back(std::move(s));
}

void sweep_suite(const RunConfig& cfg, SuiteResult& res) {
    const SweepSpec& spec = cfg.sweep;
    if (spec.k1.empty()) throw ConfigError("/sweep/k1: empty");
    if (!(spec.k0 > 0.0)) throw ConfigError("/sweep/k0: must be positive");
    const double flat_d0 = spindle_optimum(SpaceForm::flat(), spec.k0).d0;
    const double flat_R = 1.0 / spec.k0;
    const double flat_bound = cos_phi_lower_bound(make_angle_bound(SpaceForm::flat(), spec.k0, 0.5 * flat_R));
    for (Geometry g : {Geometry::Sphere, Geometry::Hyperbolic}) {
        const std::string kind(to_string(g));
        Series s{"sweep-" + kind, {"k1", "d0"}, {}};
        double k1_min = std::numeric_limits<double>::infinity();
        for (double k1 : spec.k1) {
            if (!(k1 > 0.0)) throw ConfigError(fmt::format("/sweep/k1: {} must be positive", k1));
            const SpaceForm space = SpaceForm::make(g, k1);
            if (!valid_circle_curvature(space, spec.k0)) {
                throw ConfigError(fmt::format("/sweep/k1: k0 = {} is not valid for {} with k1 = {}", spec.k0, kind, k1));
            }
            s.rows.push_back({k1, spindle_optimum(space, spec.k0).d0});
            k1_min = std::min(k1_min, k1);
        }
        const SpaceForm space = SpaceForm::make(g, k1_min);
        const double d0 = spindle_optimum(space, spec.k0).d0;
        const double diff = std::abs(d0 - flat_d0);
        Check c = bound_check("sweep", fmt::format("{}/d0-limit", kind), d0, flat_d0, cfg.tolerances.limit - diff,
                              diff <= cfg.tolerances.limit);
        c.details = {{"k1", k1_min}, {"k0", spec.k0}};
        res.checks.push_back(std::move(c));

        const double R = circle_radius_of_curvature(space, spec.k0);
        const double bound = cos_phi_lower_bound(make_angle_bound(space, spec.k0, 0.5 * R));
        const double adiff = std::abs(bound - flat_bound);
        Check a = bound_check("sweep", fmt::format("{}/angle-limit", kind), bound, flat_bound,
                              cfg.tolerances.angle_limit - adiff, adiff <= cfg.tolerances.angle_limit);
        a.details = {{"k1", k1_min}, {"k0", spec.k0}, {"h_over_R", 0.5}};
        res.checks.push_back(std::move(a));
        res.series.push_back(std::move(s));
    }
}

void warped_suite(const RunConfig& cfg, Rng& rng, SuiteResult& res) {
    if (!cfg.warped) throw ConfigError("/warped: missing section");
    const WarpedSpec& spec = *cfg.warped;
    WarpedMetric metric = [&] {
        try {
            return make_warped(spec.metric);
        } catch (const RejectionError& e) {
            throw ConfigError(fmt::format("/warped/metric: {} (t = {})", e.what(), e.theta()));
        } catch (const DomainError& e) {
            throw ConfigError(fmt::format("/warped/metric: {}", e.what()));
        }
    }();

    try {
        const MuComparisonReport mu = verify_mu_comparison(metric, 1000, cfg.tolerances.mu);
        Check c = bound_check("warped", "mu-comparison", mu.min_slack, 0.0, mu.min_slack, mu.pass);
        c.details = {{"family", std::string(to_string(spec.metric.family))},
                     {"band", {metric.K_lo(), metric.K_hi()}},
                     {"comparison", space_to_json(mu.comparison.space)},
                     {"max_abs_slack", mu.max_abs_slack},
                     {"argmin_t", mu.argmin_t},
                     {"radii", mu.count}};
        res.checks.push_back(std::move(c));
        Series s{"warped-mu", {"t", "mu_n", "mu0", "slack"}, {}};
        for (std::size_t i = 1; i <= mu.count; ++i) {
            const double t = metric.T() * static_cast<double>(i) / static_cast<double>(mu.count);
            const double mn = circle_normal_curvature(metric, t);
            const double m0 = mu0(mu.comparison.space, t);
            s.rows.push_back({t, mn, m0, m0 - mn});
        }
        res.series.push_back(std::move(s));
    } catch (const HypothesisError& e) {
        res.checks.push_back(hypothesis_check("warped", "mu-comparison", e.what()));
        return;
    }

    std::vector<RadialFunction> radials = spec.curves;
    for (int i = 0; i < spec.random_curves; ++i) {
        try {
            radials.push_back(random_radial_function(metric, rng, spec.samples));
        } catch (const HypothesisError& e) {
            res.checks.push_back(hypothesis_check("warped", fmt::format("random-{:03d}", i), e.what()));
        }
    }
    WarpedOptions wo;
    wo.angle_tolerance = cfg.tolerances.angle;
    wo.k0_margin = cfg.tolerances.k0_margin;
    wo.width_tolerance = cfg.tolerances.width;
    for (std::size_t i = 0; i < radials.size(); ++i) {
        const std::string name = indexed("curve", i, radials.size());
        const WarpedCurve curve = [&] {
            try {
                return WarpedCurve::make(metric, radials[i], spec.samples);
            } catch (const DomainError& e) {
                throw ConfigError(fmt::format("/warped/curves/{}: {}", i, e.what()));
            }
        }();
        WarpedReport rep;
        try {
            rep = verify_theorem2_on_warped(metric, curve, wo);
        } catch (const HypothesisError& e) {
            Check c = hypothesis_check("warped", name, e.what());
            c.details = {{"kmin", curve.kmin()}, {"radial", radial_to_json(radials[i])}};
            res.checks.push_back(std::move(c));
            continue;
        }
        const AngleReport& a = rep.angle;
        Check ca = bound_check("warped", name + "/angle", a.min_slack + a.bound_cos, a.bound_cos, a.min_slack, a.pass);
        ca.details = {{"kmin", rep.kmin}, {"h", a.h}, {"k0_used", a.k0_used}, {"R", a.R},
                      {"slack", summary_json(a.slack)}, {"radial", radial_to_json(radials[i])}};
        res.checks.push_back(std::move(ca));
        const WarpedWidth& w = rep.width;
        Check cw = bound_check("warped", name + "/width", w.d, w.d0, w.margin, w.pass);
        cw.details = {{"r", w.r}, {"rho1", w.rho1}, {"k0_used", w.k0_used}};
        res.checks.push_back(std::move(cw));

        Series s{indexed("warped-angle", i, radials.size()), {"theta", "t", "phi", "bound", "slack"}, {}};
        for (std::size_t k = 0; k < curve.samples().size(); ++k) {
            const WarpedSample& smp = curve.samples()[k];
            s.rows.push_back({smp.theta, smp.t, smp.phi, a.bound_cos, a.rows[k].slack});
        }
        res.series.push_back(std::move(s));
    }
}

}  // namespace

SuiteResult run(const RunConfig& cfg) {
    SuiteResult res;
    res.suite = cfg.suite;
    res.config = config_to_json(cfg);
    res.config.erase("output");
    res.metadata.tool_version = std::string(tool_version());
    res.metadata.config_hash = config_hash(cfg);
    res.metadata.seed = cfg.seed;

    Rng rng(cfg.seed);
    const bool all = cfg.suite == "all";
    if (all || cfg.suite == "angle" || cfg.suite == "width") {
        const std::vector<ClosedCurve> curves = build_curves(cfg, rng);
        if (all || cfg.suite == "angle") angle_suite(cfg, curves, rng, res);
        if (all || cfg.suite == "width") width_suite(cfg, curves, res);
    }
    if (all || cfg.suite == "spindle-table") spindle_suite(cfg, res);
    if (all || cfg.suite == "sweep") sweep_suite(cfg, res);
    if ((all && cfg.warped) || cfg.suite == "warped") warped_suite(cfg, rng, res);

    res.status = Status::Pass;
    for (const Check& c : res.checks) {
        if (c.status == Status::HypothesisViolation) {
            res.status = Status::HypothesisViolation;
            break;
        }
        if (c.status == Status::Fail) res.status = Status::Fail;
    }
    return res;
}

int exit_code(const SuiteResult& result) {
    switch (result.status) {
        case Status::Pass: return 0;
        case Status::Fail: return 2;
        case Status::HypothesisViolation: return 3;
    }
    return 2;
}

}  // namespace sphericity
