#include "sphericity/bounds.hpp"
#include "sphericity/errors.hpp"
#include "sphericity/generators.hpp"
#include "sphericity/io.hpp"
#include "sphericity/layer.hpp"
#include "sphericity/radial.hpp"
#include "sphericity/report.hpp"
#include "sphericity/spindle.hpp"
#include "sphericity/warped.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace py = pybind11;
using namespace sphericity;

namespace {

using XY = std::array<double, 2>;

// Tangent-plane coordinates at the model origin, exp-mapped.
Point at(const SpaceForm& space, const XY& xy) {
    const Point o = origin(space);
    const Frame f = frame_at(space, o);
    return exp_map(space, Tangent{o, xy[0] * f.e1 + xy[1] * f.e2});
}

std::vector<Harmonic> harmonics(const std::vector<std::tuple<int, double, double>>& hs) {
    std::vector<Harmonic> out;
    for (const auto& [n, a, b] : hs) out.push_back({n, a, b});
    return out;
}

py::dict angle_dict(const AngleReport& r) {
    py::dict d;
    d["pass"] = r.pass;
    d["h"] = r.h;
    d["R"] = r.R;
    d["k0_used"] = r.k0_used;
    d["bound_cos"] = r.bound_cos;
    d["min_slack"] = r.min_slack;
    d["argmin_slack"] = r.argmin_slack;
    d["excluded_corner_count"] = r.excluded_corner_count;
    std::vector<double> s, t, phi, slack;
    for (const AngleRow& row : r.rows) {
        s.push_back(row.s);
        t.push_back(row.t);
        phi.push_back(row.phi);
        slack.push_back(row.slack);
    }
    d["s"] = s;
    d["t"] = t;
    d["phi"] = phi;
    d["slack"] = slack;
    return d;
}

py::dict width_dict(double r, double rho1, double d, double k0_used, double d0, double margin, bool pass) {
    py::dict out;
    out["r"] = r;
    out["rho1"] = rho1;
    out["d"] = d;
    out["k0_used"] = k0_used;
    out["d0"] = d0;
    out["margin"] = margin;
    out["pass"] = pass;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sharp radial-angle and layer-width bounds for convex curves in space forms";
    m.attr("__version__") = std::string(tool_version());

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_RuntimeError);
    py::register_exception<NonClosureError>(m, "NonClosureError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::enum_<Geometry>(m, "Geometry")
        .value("Flat", Geometry::Flat)
        .value("Sphere", Geometry::Sphere)
        .value("Hyperbolic", Geometry::Hyperbolic);

    py::class_<SpaceForm>(m, "SpaceForm")
        .def_static("flat", &SpaceForm::flat)
        .def_static("sphere", &SpaceForm::sphere, py::arg("k1"))
        .def_static("hyperbolic", &SpaceForm::hyperbolic, py::arg("k1"))
        .def_property_readonly("kind", &SpaceForm::kind)
        .def_property_readonly("k1", &SpaceForm::k1)
        .def("sn", &SpaceForm::sn)
        .def("cs", &SpaceForm::cs)
        .def("__repr__", [](const SpaceForm& s) {
            return "SpaceForm(" + std::string(to_string(s.kind())) + ", k1=" + format_number(s.k1()) + ")";
        });

    m.def("point", [](const SpaceForm& s, const XY& xy) -> Vec3 { return at(s, xy).x; }, py::arg("space"),
          py::arg("xy"), "Model coordinates of the exp-mapped tangent-plane point at the origin.");
    m.def("distance", [](const SpaceForm& s, const XY& a, const XY& b) { return distance(s, at(s, a), at(s, b)); });
    m.def("mu0", &mu0, py::arg("space"), py::arg("t"));
    m.def("circle_radius_of_curvature", &circle_radius_of_curvature, py::arg("space"), py::arg("k0"));

    m.def("cos_phi_lower_bound",
          [](const SpaceForm& s, double k0, double h) { return cos_phi_lower_bound(make_angle_bound(s, k0, h)); },
          py::arg("space"), py::arg("k0"), py::arg("h"));
    m.def("cos_phi_weak_bound",
          [](const SpaceForm& s, double k0, double h) { return cos_phi_weak_bound(make_angle_bound(s, k0, h)); },
          py::arg("space"), py::arg("k0"), py::arg("h"));
    m.def("circle_exact_angle", &circle_exact_angle, py::arg("space"), py::arg("R"), py::arg("h"), py::arg("alpha"));

    m.def("spindle_rho", &spindle_rho, py::arg("space"), py::arg("k0"), py::arg("r"));
    m.def("spindle_width", &spindle_width, py::arg("space"), py::arg("k0"), py::arg("r"));
    m.def("spindle_optimum", [](const SpaceForm& s, double k0) {
        const SpindleOptimum o = spindle_optimum(s, k0);
        return std::pair{o.r0, o.d0};
    }, py::arg("space"), py::arg("k0"));
    m.def("spindle_optimum_numeric", [](const SpaceForm& s, double k0) {
        const SpindleOptimum o = spindle_optimum_numeric(s, k0);
        return std::pair{o.r0, o.d0};
    }, py::arg("space"), py::arg("k0"));
    m.def("d0_rewritten", &d0_rewritten, py::arg("space"), py::arg("k0"));

    py::class_<ClosedCurve>(m, "Curve")
        .def_property_readonly("space", &ClosedCurve::space)
        .def_property_readonly("length", &ClosedCurve::total_length)
        .def_property_readonly("kmin", &ClosedCurve::kmin)
        .def_property_readonly("has_corners", &ClosedCurve::has_corners)
        .def("__len__", &ClosedCurve::size)
        .def("points", [](const ClosedCurve& c) {
            Eigen::MatrixX3d out(c.size(), 3);
            for (std::size_t i = 0; i < c.size(); ++i) out.row(i) = c[i].point.x.transpose();
            return out;
        })
        .def("curvatures", [](const ClosedCurve& c) {
            std::vector<double> k;
            for (const CurveSample& s : c.samples()) k.push_back(s.kappa);
            return k;
        })
        .def("contains", [](const ClosedCurve& c, const XY& xy) { return c.contains(at(c.space(), xy)); })
        .def("to_json", [](const ClosedCurve& c) { return curve_to_json(c).dump(); })
        .def_static("from_json", [](const std::string& text) { return curve_from_json(Json::parse(text)); });

    m.def("make_circle", [](const SpaceForm& s, double k0, const XY& center, std::size_t samples) {
        return make_circle(s, at(s, center), k0, samples);
    }, py::arg("space"), py::arg("k0"), py::arg("center") = XY{0, 0}, py::arg("samples") = 4096);
    m.def("make_lune", &make_lune, py::arg("space"), py::arg("k0"), py::arg("r"), py::arg("samples") = 4096);
    m.def("make_disc_intersection", [](const SpaceForm& s, const std::vector<XY>& centers, double k0,
                                       std::size_t samples) {
        std::vector<Point> pts;
        for (const XY& c : centers) pts.push_back(at(s, c));
        return make_disc_intersection(s, pts, k0, samples);
    }, py::arg("space"), py::arg("centers"), py::arg("k0"), py::arg("samples") = 4096);
    m.def("make_support_curve", [](double a0, const std::vector<std::tuple<int, double, double>>& hs,
                                   double k0_target) {
        return make_support_curve(SupportFunction{a0, harmonics(hs)}, k0_target);
    }, py::arg("a0"), py::arg("harmonics"), py::arg("k0_target"));
    m.def("make_frame_ode_curve", [](const SpaceForm& s, double base,
                                     const std::vector<std::tuple<int, double, double>>& hs) {
        return make_frame_ode_curve(s, FourierProfile{base, harmonics(hs)}, circle_length(s, base));
    }, py::arg("space"), py::arg("base"), py::arg("harmonics"));

    m.def("verify_angle", [](const ClosedCurve& c, const XY& base, double tolerance) {
        AngleOptions opts;
        opts.tolerance = tolerance;
        return angle_dict(verify_angle_bound(c, at(c.space(), base), opts));
    }, py::arg("curve"), py::arg("base") = XY{0, 0}, py::arg("tolerance") = 1e-9);
    m.def("layer_width", [](const ClosedCurve& c) {
        const LayerReport r = layer_width(c);
        return width_dict(r.r, r.rho1, r.d, r.k0_used, r.d0, r.margin, r.pass);
    }, py::arg("curve"));

    py::class_<WarpedMetric>(m, "WarpedMetric")
        .def_static("from_json", [](const std::string& text) { return metric_from_json(Json::parse(text)); })
        .def("to_json", [](const WarpedMetric& w) { return metric_to_json(w).dump(); })
        .def_property_readonly("T", &WarpedMetric::T)
        .def_property_readonly("band", &WarpedMetric::band)
        .def("f", &WarpedMetric::f)
        .def("K", &WarpedMetric::K);

    m.def("warped_metric", [](const std::string& family, double T, double k, double epsilon, double weight,
                              double delta) {
        WarpProfile p;
        p.family = warp_family_from_string(family);
        p.T = T;
        p.k = k;
        p.epsilon = epsilon;
        p.weight = weight;
        p.delta = delta;
        return make_warped(p);
    }, py::arg("family"), py::arg("T"), py::arg("k") = 1.0, py::arg("epsilon") = 0.0, py::arg("weight") = 0.0,
          py::arg("delta") = 0.0);
    m.def("verify_mu_comparison", [](const WarpedMetric& w, std::size_t radii) {
        const MuComparisonReport r = verify_mu_comparison(w, radii);
        py::dict d;
        d["comparison"] = std::string(to_string(r.comparison.space.kind()));
        d["k1"] = r.comparison.k1;
        d["min_slack"] = r.min_slack;
        d["max_abs_slack"] = r.max_abs_slack;
        d["pass"] = r.pass;
        return d;
    }, py::arg("metric"), py::arg("radii") = 1000);

    py::class_<WarpedCurve>(m, "WarpedCurve")
        .def_property_readonly("length", &WarpedCurve::length)
        .def_property_readonly("kmin", &WarpedCurve::kmin)
        .def_property_readonly("inradius", &WarpedCurve::inradius)
        .def_property_readonly("circumradius", &WarpedCurve::circumradius)
        .def("__len__", [](const WarpedCurve& c) { return c.samples().size(); });
    m.def("warped_curve", [](const WarpedMetric& w, double c0, const std::vector<std::tuple<int, double, double>>& hs,
                             std::size_t samples) {
        return WarpedCurve::make(w, RadialFunction{c0, harmonics(hs)}, samples);
    }, py::arg("metric"), py::arg("c0"), py::arg("harmonics"), py::arg("samples") = 4096);
    m.def("warped_curve_json", [](const WarpedMetric& w, const WarpedCurve& c) {
        return warped_curve_to_json(w, c).dump();
    });
    m.def("verify_warped", [](const WarpedMetric& w, const WarpedCurve& c) {
        const WarpedReport r = verify_theorem2_on_warped(w, c);
        py::dict d;
        d["pass"] = r.pass;
        d["kmin"] = r.kmin;
        d["angle"] = angle_dict(r.angle);
        d["width"] = width_dict(r.width.r, r.width.rho1, r.width.d, r.width.k0_used, r.width.d0, r.width.margin,
                                r.width.pass);
        return d;
    }, py::arg("metric"), py::arg("curve"));

    m.def("run", [](const std::string& config_text) {
        const SuiteResult r = run(parse_config(config_text));
        return std::pair{report_text(r), exit_code(r)};
    }, py::arg("config"), "Run a configuration; returns (report JSON text, exit code).");
    m.def("config_hash", [](const std::string& text) { return config_hash(parse_config(text)); });
}
