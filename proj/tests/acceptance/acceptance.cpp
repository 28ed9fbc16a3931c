#include "sphericity/bounds.hpp"
#include "sphericity/errors.hpp"
#include "sphericity/generators.hpp"
#include "sphericity/layer.hpp"
#include "sphericity/radial.hpp"
#include "sphericity/spindle.hpp"
#include "sphericity/warped.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#ifndef SPHERICITY_CLI
#define SPHERICITY_CLI "sphericity_cli"
#endif

using namespace sphericity;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out{false, ""};
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, fmt::format("unexpected exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failures;
    fmt::print("{} {:2d} {}: {} [{:.1f}s]\n", out.pass ? "PASS" : "FAIL", id, title, out.detail, secs);
    std::fflush(stdout);
}

// Uniform in angle and radius within 0.9 r of the incenter, as the CLI draws
// its random base points.
Point random_interior(const ClosedCurve& c, Rng& rng) {
    const SpaceForm& space = c.space();
    const Incenter in = incenter(c);
    const double angle = rng.uniform(0.0, 2.0 * kPi);
    const double dist = rng.uniform(0.0, 0.9 * in.r);
    return polar_point(space, in.center, frame_at(space, in.center), angle, dist);
}

struct SuiteCase {
    ClosedCurve curve;
    Point base;
};

// 100 flat support curves, 30 frame-ODE curves on the unit sphere and 30 on
// the hyperbolic plane of curvature -1.
const std::vector<SuiteCase>& angle_suite_cases() {
    static const std::vector<SuiteCase> cases = [] {
        std::vector<SuiteCase> out;
        Rng rng(2024);
        for (int i = 0; i < 100; ++i) {
            const SupportFunction h = random_support_function(rng);
            ClosedCurve c = make_support_curve(h, 1.0 / max_radius_of_curvature(h));
            const Point o = random_interior(c, rng);
            out.push_back({std::move(c), o});
        }
        for (const SpaceForm& sp : {SpaceForm::sphere(1.0), SpaceForm::hyperbolic(1.0)}) {
            for (int i = 0; i < 30; ++i) {
                const FourierProfile p = random_curvature_profile(sp, rng);
                ClosedCurve c = make_frame_ode_curve(sp, p, circle_length(sp, p.base));
                const Point o = random_interior(c, rng);
                out.push_back({std::move(c), o});
            }
        }
        return out;
    }();
    return cases;
}

Outcome euclidean_sharpness() {
    const SpaceForm flat = SpaceForm::flat();
    const ClosedCurve c = make_circle(flat, origin(flat), 1.0, 4096);
    const Point o = Point::flat(0.7, 0.0);
    const RadialMeasurement m = measure_radial(c, o);
    const std::size_t n = c.size();
    std::size_t worst = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (m.phi[i] > m.phi[worst]) worst = i;
    }
    const double min_cos = std::cos(m.phi[worst]);

    // Angle at O between the centre and the sample; the two samples nearest
    // to a right angle are the sharpness witnesses.
    std::vector<double> alpha(n);
    const Eigen::Vector2d to_centre(-0.7, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3& x = c[i].point.x;
        const Eigen::Vector2d v(x[0] - 0.7, x[1]);
        alpha[i] = std::acos(std::clamp(v.dot(to_centre) / v.norm() / to_centre.norm(), -1.0, 1.0));
    }
    std::size_t upper = 0, lower = 0;
    double best_upper = 1e9, best_lower = 1e9;
    for (std::size_t i = 0; i < n; ++i) {
        const double gap = std::abs(alpha[i] - kPi / 2);
        double& best = c[i].point.x[1] >= 0 ? best_upper : best_lower;
        std::size_t& at = c[i].point.x[1] >= 0 ? upper : lower;
        if (gap < best) best = gap, at = i;
    }
    auto cyclic = [n](std::size_t a, std::size_t b) {
        const std::size_t d = a > b ? a - b : b - a;
        return std::min(d, n - d);
    };
    const std::size_t offset = std::min(cyclic(worst, upper), cyclic(worst, lower));
    const double err = std::abs(min_cos - std::sqrt(0.51));
    return {err <= 1e-6 && offset <= 2,
            fmt::format("min cos phi = {:.12f}, |err| = {:.2e}, argmin {} samples from alpha = pi/2", min_cos, err,
                        offset)};
}

Outcome angle_suite() {
    double worst = 1e9;
    int failed = 0;
    for (const SuiteCase& sc : angle_suite_cases()) {
        const AngleReport rep = verify_angle_bound(sc.curve, sc.base);
        worst = std::min(worst, rep.min_slack);
        if (!rep.pass || rep.min_slack < -1e-9) ++failed;
    }
    return {failed == 0, fmt::format("{} curves, {} failing, min slack {:.3e}", angle_suite_cases().size(), failed,
                                     worst)};
}

Outcome identity_residuals() {
    std::size_t total = 0, within_tight = 0, within_loose = 0;
    double worst = 0.0;
    for (const SuiteCase& sc : angle_suite_cases()) {
        const RadialMeasurement m = measure_radial(sc.curve, sc.base);
        for (double r : curvature_identity_residuals(sc.curve, m)) {
            if (std::isnan(r)) continue;
            ++total;
            within_tight += std::abs(r) <= 1e-4;
            within_loose += std::abs(r) <= 1e-3;
            worst = std::max(worst, std::abs(r));
        }
    }
    const double frac = total ? static_cast<double>(within_tight) / total : 0.0;
    return {total > 0 && frac >= 0.99 && within_loose == total,
            fmt::format("{} samples, {:.4f}% within 1e-4, max |residual| {:.3e}", total, 100 * frac, worst)};
}

Outcome flat_optimum() {
    const SpaceForm flat = SpaceForm::flat();
    const SpindleOptimum opt = spindle_optimum(flat, 1.0);
    const SpindleOptimum num = spindle_optimum_numeric(flat, 1.0);
    const bool exact = opt.r0 == 1.0 / (2 + kSqrt2) && opt.d0 == kSqrt2 - 1;
    const double er = std::abs(num.r0 - opt.r0), ed = std::abs(num.d0 - opt.d0);
    return {exact && er <= 1e-7 && ed <= 1e-9,
            fmt::format("closed form {}, golden section |dr| = {:.2e}, |dd| = {:.2e}", exact ? "exact" : "inexact", er,
                        ed)};
}

Outcome curved_optimum() {
    bool ok = true;
    std::string detail;
    for (const auto& [sp, k0] : {std::pair{SpaceForm::sphere(1.0), 1.0}, std::pair{SpaceForm::hyperbolic(1.0), 2.0}}) {
        const SpindleOptimum opt = spindle_optimum(sp, k0);
        const SpindleOptimum num = spindle_optimum_numeric(sp, k0);
        const double er = std::abs(num.r0 - opt.r0), ed = std::abs(num.d0 - opt.d0);
        const double st = std::abs(stationarity_residual(sp, k0, opt.r0));
        ok = ok && er <= 1e-7 && ed <= 1e-9 && st <= 1e-10;
        detail += fmt::format("{}{}: |dr| = {:.2e}, |dd| = {:.2e}, stationarity {:.2e}", detail.empty() ? "" : "; ",
                              to_string(sp.kind()), er, ed, st);
    }
    return {ok, detail};
}

Outcome width_sharpness() {
    bool ok = true;
    std::string detail;
    for (const auto& [sp, k0] : {std::pair{SpaceForm::flat(), 1.0}, std::pair{SpaceForm::sphere(1.0), 1.0},
                                 std::pair{SpaceForm::hyperbolic(1.0), 2.0}}) {
        const SpindleOptimum opt = spindle_optimum(sp, k0);
        const LayerReport rep = layer_width(make_lune(sp, k0, opt.r0));
        const double err = std::abs(rep.d - opt.d0);
        ok = ok && err <= 1e-5;
        detail += fmt::format("{} lune |d - d0| = {:.2e}; ", to_string(sp.kind()), err);
    }

    Rng rng(606);
    int bodies = 0, failed = 0;
    double worst = 1e9;
    auto judge = [&](const ClosedCurve& c) {
        const LayerReport rep = layer_width(c);
        ++bodies;
        worst = std::min(worst, rep.margin);
        if (!rep.pass || rep.margin < -1e-7) ++failed;
    };
    for (int i = 0; i < 10; ++i) {
        const SupportFunction h = random_support_function(rng);
        judge(make_support_curve(h, 1.0 / max_radius_of_curvature(h)));
    }
    for (const auto& [sp, k0] : {std::pair{SpaceForm::flat(), 1.0}, std::pair{SpaceForm::sphere(1.0), 1.0},
                                 std::pair{SpaceForm::hyperbolic(1.0), 2.0}}) {
        for (int i = 0; i < 6; ++i) judge(make_disc_intersection(sp, random_disc_centers(sp, k0, rng), k0));
        if (sp.kind() == Geometry::Flat) continue;
        for (int i = 0; i < 4; ++i) {
            const FourierProfile p = random_curvature_profile(sp, rng);
            judge(make_frame_ode_curve(sp, p, circle_length(sp, p.base)));
        }
    }
    ok = ok && failed == 0;
    detail += fmt::format("{} random bodies, {} failing, min margin {:.3e}", bodies, failed, worst);
    return {ok, detail};
}

Outcome rewritten_identity() {
    double worst = 0.0;
    int points = 0;
    const double k1s[] = {0.05, 0.3, 1.0, 2.5, 8.0};
    const double ratios[] = {0.1, 0.9, 3.0, 20.0};
    for (double k1 : k1s) {
        for (double ratio : ratios) {
            const SpaceForm s = SpaceForm::sphere(k1);
            worst = std::max(worst, std::abs(d0_rewritten(s, ratio * k1) - spindle_optimum(s, ratio * k1).d0));
            const SpaceForm h = SpaceForm::hyperbolic(k1);
            const double k0 = k1 * (1.0 + ratio);
            worst = std::max(worst, std::abs(d0_rewritten(h, k0) - spindle_optimum(h, k0).d0));
            ++points;
        }
    }
    return {worst <= 1e-10, fmt::format("{} (k0, k1) points per space, max |difference| {:.2e}", points, worst)};
}

Outcome euclidean_limit() {
    bool ok = true;
    std::string detail;
    const double flat_d0 = kSqrt2 - 1;
    for (const SpaceForm& sp : {SpaceForm::sphere(1e-3), SpaceForm::hyperbolic(1e-3)}) {
        const double err = std::abs(spindle_optimum(sp, 1.0).d0 - flat_d0);
        ok = ok && err <= 1e-5;
        detail += fmt::format("{} |d0 - (sqrt2 - 1)| = {:.2e}; ", to_string(sp.kind()), err);
    }
    double worst = 0.0;
    for (const SpaceForm& sp : {SpaceForm::sphere(1e-3), SpaceForm::hyperbolic(1e-3)}) {
        const double R = circle_radius_of_curvature(sp, 1.0);
        for (int i = 0; i <= 10; ++i) {
            const double frac = i / 10.0;
            const double curved = cos_phi_lower_bound(make_angle_bound(sp, 1.0, frac * R));
            const double flat = cos_phi_lower_bound(make_angle_bound(SpaceForm::flat(), 1.0, frac));
            worst = std::max(worst, std::abs(curved - flat));
        }
    }
    ok = ok && worst <= 1e-4;
    detail += fmt::format("angle bounds max |difference| {:.2e}", worst);
    return {ok, detail};
}

WarpProfile warp(WarpFamily family, double T, double k = 1.0, double epsilon = 0.0, double weight = 0.0,
                 double delta = 0.0) {
    WarpProfile p;
    p.family = family;
    p.T = T;
    p.k = k;
    p.epsilon = epsilon;
    p.weight = weight;
    p.delta = delta;
    return p;
}

Outcome mu_comparison() {
    double worst = 1e9;
    int metrics = 0;
    for (const WarpProfile& p : {warp(WarpFamily::Cubic, 2.0, 1.0, 0.02), warp(WarpFamily::Cubic, 2.0, 1.0, 0.05),
                                 warp(WarpFamily::Cubic, 1.5, 1.0, 0.2), warp(WarpFamily::PerturbedSine, 1.2, 1.0, 0, 0, 0.01),
                                 warp(WarpFamily::PerturbedSine, 1.0, 1.0, 0, 0, 0.05),
                                 warp(WarpFamily::PerturbedSine, 0.5, 2.0, 0, 0, 0.03)}) {
        const MuComparisonReport rep = verify_mu_comparison(make_warped(p), 1000);
        worst = std::min(worst, rep.min_slack);
        ++metrics;
    }
    double equality = 0.0;
    for (const WarpProfile& p : {warp(WarpFamily::Flat, 2.0), warp(WarpFamily::Hyperbolic, 2.0),
                                 warp(WarpFamily::Hyperbolic, 1.0, 2.5), warp(WarpFamily::Sphere, 1.4),
                                 warp(WarpFamily::Sphere, 0.5, 3.0)}) {
        equality = std::max(equality, verify_mu_comparison(make_warped(p), 1000).max_abs_slack);
    }
    return {worst >= -1e-9 && equality <= 1e-10,
            fmt::format("{} non-constant metrics, min slack {:.3e}; constant warps max |slack| {:.2e}", metrics, worst,
                        equality)};
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SPHERICITY_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sphericity-acceptance-" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

Outcome warped_theorem() {
    int curves = 0, failed = 0;
    double worst_angle = 1e9, worst_width = 1e9;
    Rng rng(1010);
    for (const WarpProfile& p : {warp(WarpFamily::Cubic, 2.0, 1.0, 0.05), warp(WarpFamily::Cubic, 1.5, 1.0, 0.2),
                                 warp(WarpFamily::Blend, 2.0, 1.0, 0, 0.5),
                                 warp(WarpFamily::PerturbedSine, 1.2, 1.0, 0, 0, 0.01),
                                 warp(WarpFamily::PerturbedSine, 1.0, 1.0, 0, 0, 0.05)}) {
        const WarpedMetric m = make_warped(p);
        for (int i = 0; i < 20; ++i) {
            const RadialFunction rho = random_radial_function(m, rng);
            const WarpedReport rep = verify_theorem2_on_warped(m, WarpedCurve::make(m, rho));
            ++curves;
            worst_angle = std::min(worst_angle, rep.angle.min_slack);
            worst_width = std::min(worst_width, rep.width.margin);
            if (!rep.pass) ++failed;
        }
    }

    const fs::path dir = scratch("violation");
    std::ofstream(dir / "config.json") << R"({
  "suite": "warped",
  "warped": {
    "metric": {"family": "hyperbolic", "k": 1.0, "T": 2.0},
    "curves": [{"c0": 0.8, "harmonics": [{"n": 2, "a": 0.1}]}]
  }
})";
    const int code = run_cli("verify-warped --config " + (dir / "config.json").string() + " --out " +
                             (dir / "out").string());
    return {failed == 0 && code == 3,
            fmt::format("{} curves on 5 metrics, {} failing, min angle slack {:.3e}, min width margin {:.3e}; "
                        "violating curve exit code {}",
                        curves, failed, worst_angle, worst_width, code)};
}

std::string without_timestamp(const std::string& text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.find("\"timestamp\"") == std::string::npos) out += line + "\n";
    }
    return out;
}

Outcome determinism() {
    const std::vector<std::pair<std::string, std::string>> configs{
        {"verify-angle", R"({
  "suite": "angle", "seed": 17,
  "space": {"kind": "hyperbolic", "k1": 1.0},
  "curve": {"generator": "random_frame_ode", "count": 3},
  "base_point": {"kind": "random_interior"}
})"},
        {"verify-width", R"({
  "suite": "width", "seed": 18,
  "space": {"kind": "sphere", "k1": 1.0},
  "curve": {"generator": "random_disc", "k0": 1.0, "count": 3}
})"},
        {"verify-warped", R"({
  "suite": "warped", "seed": 19,
  "warped": {"metric": {"family": "perturbed_sine", "k": 1.0, "delta": 0.05, "T": 1.0}, "random_curves": 2}
})"}};
    int identical = 0;
    std::string detail;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const fs::path dir = scratch(fmt::format("determinism-{}", i));
        std::ofstream(dir / "config.json") << configs[i].second;
        std::string reports[2];
        bool ran = true;
        for (int k = 0; k < 2; ++k) {
            const fs::path out = dir / fmt::format("run{}", k);
            const int code = run_cli(configs[i].first + " --config " + (dir / "config.json").string() + " --out " +
                                     out.string());
            ran = ran && code == 0;
            reports[k] = without_timestamp(read_file(out / "report.json"));
        }
        if (ran && !reports[0].empty() && reports[0] == reports[1]) ++identical;
        else detail += fmt::format(" {} differs or failed;", configs[i].first);
    }
    return {identical == static_cast<int>(configs.size()),
            fmt::format("{}/{} configs byte-identical across two runs{}", identical, configs.size(), detail)};
}

}  // namespace

int main() {
    report(1, "Euclidean sharpness of the angle bound", euclidean_sharpness);
    report(2, "Angle bound on seeded curves", angle_suite);
    report(3, "Curvature identity residuals", identity_residuals);
    report(4, "Flat spindle optimum", flat_optimum);
    report(5, "Curved spindle optima", curved_optimum);
    report(6, "Width bound sharpness and random bodies", width_sharpness);
    report(7, "Rewritten d0 identity", rewritten_identity);
    report(8, "Euclidean limit", euclidean_limit);
    report(9, "Circle curvature comparison on warped metrics", mu_comparison);
    report(10, "Angle and width bounds on warped metrics", warped_theorem);
    report(11, "Determinism", determinism);
    fmt::print("{} of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
