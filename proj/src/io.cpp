#include "sphericity/io.hpp"

#include "detail/json_read.hpp"

#include <cmath>
#include <cstdlib>

namespace sphericity {

using detail::as;
using detail::child;
using detail::read;
using detail::read_or;
using detail::require;

double round_digits(double v, int digits) {
    if (digits >= 17 || !std::isfinite(v)) return v;
    return std::strtod(fmt::format("{:.{}g}", v, digits).c_str(), nullptr);
}

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json space_to_json(const SpaceForm& space) {
    Json j{{"kind", std::string(to_string(space.kind()))}};
    if (space.kind() != Geometry::Flat) j["k1"] = space.k1();
    return j;
}

SpaceForm space_from_json(const Json& j, const std::string& path) {
    const auto kind = read<std::string>(j, "kind", path);
    try {
        const Geometry g = geometry_from_string(kind);
        return SpaceForm::make(g, g == Geometry::Flat ? 0.0 : read<double>(j, "k1", path));
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("{}: {}", path.empty() ? "/" : path, e.what()));
    }
}

Json curve_to_json(const ClosedCurve& curve, int digits) {
    Json samples = Json::array();
    for (const CurveSample& smp : curve.samples()) {
        samples.push_back({{"x", {round_digits(smp.point.x[0], digits), round_digits(smp.point.x[1], digits),
                                  round_digits(smp.point.x[2], digits)}},
                           {"s", round_digits(smp.s, digits)},
                           {"kappa", round_digits(smp.kappa, digits)},
                           {"corner", smp.corner}});
    }
    return {{"schema", "sphericity.curve/1"},
            {"space", space_to_json(curve.space())},
            {"provenance", std::string(to_string(curve.provenance()))},
            {"declared_k0", number(curve.declared_k0())},
            {"length", round_digits(curve.total_length(), digits)},
            {"closure_gap", round_digits(curve.closure_gap(), digits)},
            {"samples", std::move(samples)}};
}

ClosedCurve curve_from_json(const Json& j, const std::string& path) {
    const SpaceForm space = space_from_json(require(j, "space", path), child(path, "space"));
    Provenance prov = Provenance::Loaded;
    try {
        prov = provenance_from_string(read_or<std::string>(j, "provenance", path, "loaded"));
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("{}: {}", child(path, "provenance"), e.what()));
    }
    RawCurve raw;
    raw.length = read<double>(j, "length", path);
    raw.closure_gap = read_or<double>(j, "closure_gap", path, 0.0);
    const double declared = read_or<double>(j, "declared_k0", path, ClosedCurve::kUndeclared);

    const Json& samples = require(j, "samples", path);
    const std::string spath = child(path, "samples");
    if (!samples.is_array()) throw ConfigError(fmt::format("{}: expected an array", spath));
    bool any_kappa = false;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Json& smp = samples[i];
        const std::string p = child(spath, i);
        const auto x = read<std::array<double, 3>>(smp, "x", p);
        raw.points.push_back(Point{Vec3(x[0], x[1], x[2])});
        raw.s.push_back(read<double>(smp, "s", p));
        raw.corners.push_back(read_or<bool>(smp, "corner", p, false));
        if (smp.contains("kappa")) {
            any_kappa = true;
            raw.kappas.push_back(read<double>(smp, "kappa", p));
        } else if (any_kappa) {
            throw ConfigError(fmt::format("{}: missing kappa", p));
        }
    }
    if (any_kappa && raw.kappas.size() != raw.points.size()) {
        throw ConfigError(fmt::format("{}: kappa must be given for every sample or none", spath));
    }
    try {
        return ClosedCurve::assemble(space, std::move(raw), prov, declared);
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("{}: {}", path.empty() ? "/" : path, e.what()));
    }
}

Json warp_profile_to_json(const WarpProfile& p) {
    Json j{{"family", std::string(to_string(p.family))}, {"T", p.T}};
    switch (p.family) {
        case WarpFamily::Flat: break;
        case WarpFamily::Hyperbolic:
        case WarpFamily::Sphere: j["k"] = p.k; break;
        case WarpFamily::Cubic: j["epsilon"] = p.epsilon; break;
        case WarpFamily::Blend: j["k"] = p.k; j["weight"] = p.weight; break;
        case WarpFamily::PerturbedSine: j["k"] = p.k; j["delta"] = p.delta; break;
    }
    if (p.declared_band) j["declared_band"] = {p.declared_band->first, p.declared_band->second};
    return j;
}

WarpProfile warp_profile_from_json(const Json& j, const std::string& path) {
    WarpProfile p;
    try {
        p.family = warp_family_from_string(read<std::string>(j, "family", path));
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("{}: {}", child(path, "family"), e.what()));
    }
    p.T = read<double>(j, "T", path);
    p.k = read_or<double>(j, "k", path, 1.0);
    p.epsilon = read_or<double>(j, "epsilon", path, 0.0);
    p.weight = read_or<double>(j, "weight", path, 0.0);
    p.delta = read_or<double>(j, "delta", path, 0.0);
    if (j.contains("declared_band")) {
        const auto band = read<std::array<double, 2>>(j, "declared_band", path);
        p.declared_band = std::pair{band[0], band[1]};
    }
    return p;
}

Json metric_to_json(const WarpedMetric& metric) {
    return {{"schema", "sphericity.warped_metric/1"},
            {"profile", warp_profile_to_json(metric.profile())},
            {"band", {metric.K_lo(), metric.K_hi()}}};
}

WarpedMetric metric_from_json(const Json& j, const std::string& path) {
    const WarpProfile p = warp_profile_from_json(require(j, "profile", path), child(path, "profile"));
    try {
        return WarpedMetric::make(p);
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("{}: {}", child(path, "profile"), e.what()));
    }
}

Json harmonics_to_json(const std::vector<Harmonic>& hs) {
    Json out = Json::array();
    for (const Harmonic& h : hs) out.push_back({{"n", h.n}, {"a", h.a}, {"b", h.b}});
    return out;
}

std::vector<Harmonic> harmonics_from_json(const Json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(fmt::format("{}: expected an array", path));
    std::vector<Harmonic> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = child(path, i);
        out.push_back({read<int>(j[i], "n", p), read_or<double>(j[i], "a", p, 0.0), read_or<double>(j[i], "b", p, 0.0)});
    }
    return out;
}

Json radial_to_json(const RadialFunction& rho) {
    return {{"c0", rho.c0}, {"harmonics", harmonics_to_json(rho.harmonics)}};
}

RadialFunction radial_from_json(const Json& j, const std::string& path) {
    RadialFunction rho;
    rho.c0 = read<double>(j, "c0", path);
    if (j.contains("harmonics")) rho.harmonics = harmonics_from_json(j.at("harmonics"), child(path, "harmonics"));
    return rho;
}

Json warped_curve_to_json(const WarpedMetric& metric, const WarpedCurve& curve, int digits) {
    Json samples = Json::array();
    for (const WarpedSample& s : curve.samples()) {
        samples.push_back({{"theta", round_digits(s.theta, digits)},
                           {"t", round_digits(s.t, digits)},
                           {"s", round_digits(s.s, digits)},
                           {"kappa", round_digits(s.kappa, digits)},
                           {"phi", round_digits(s.phi, digits)}});
    }
    return {{"schema", "sphericity.warped_curve/1"},
            {"metric", metric_to_json(metric)},
            {"radial", radial_to_json(curve.radial())},
            {"length", round_digits(curve.length(), digits)},
            {"samples", std::move(samples)}};
}

WarpedCurve warped_curve_from_json(const WarpedMetric& metric, const Json& j, const std::string& path) {
    const RadialFunction rho = radial_from_json(require(j, "radial", path), child(path, "radial"));
    std::size_t n = 4096;
    if (j.contains("samples") && j.at("samples").is_array() && !j.at("samples").empty()) n = j.at("samples").size();
    try {
        return WarpedCurve::make(metric, rho, n);
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("{}: {}", child(path, "radial"), e.what()));
    }
}

}  // namespace sphericity
