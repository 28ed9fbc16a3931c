#include "sphericity/report.hpp"

#include "detail/json_read.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <set>

namespace sphericity {

using detail::as;
using detail::child;
using detail::read;
using detail::read_or;
using detail::require;

namespace {

void allow_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& path) {
    if (!j.is_object()) throw ConfigError(fmt::format("{}: expected an object", path.empty() ? "/" : path));
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) throw ConfigError(fmt::format("{}: unknown field", child(path, key)));
    }
}

template <class T>
void one_of(const T& value, std::initializer_list<T> options, const std::string& path) {
    if (std::find(options.begin(), options.end(), value) == options.end()) {
        throw ConfigError(fmt::format("{}: unsupported value '{}'", path, value));
    }
}

Json xy(const std::array<double, 2>& v) { return Json::array({v[0], v[1]}); }

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

CurveSpec curve_from(const Json& j, const std::string& path) {
    allow_keys(j, {"generator", "k0", "r", "center", "centers", "support", "profile", "length_guess", "count",
                   "samples", "path"},
               path);
    CurveSpec c;
    c.generator = read_or<std::string>(j, "generator", path, c.generator);
    one_of<std::string>(c.generator,
                        {"circle", "lune", "support", "frame_ode", "disc_intersection", "random_support",
                         "random_frame_ode", "random_disc", "file"},
                        child(path, "generator"));
    c.k0 = read_or<double>(j, "k0", path, c.k0);
    if (j.contains("r")) c.r = read<double>(j, "r", path);
    c.center = read_or<std::array<double, 2>>(j, "center", path, c.center);
    c.centers = read_or<std::vector<std::array<double, 2>>>(j, "centers", path, {});
    if (j.contains("support")) {
        const Json& s = j.at("support");
        const std::string sp = child(path, "support");
        allow_keys(s, {"a0", "harmonics"}, sp);
        c.support.a0 = read_or<double>(s, "a0", sp, 1.0);
        if (s.contains("harmonics")) c.support.harmonics = harmonics_from_json(s.at("harmonics"), child(sp, "harmonics"));
    }
    if (j.contains("profile")) {
        const Json& p = j.at("profile");
        const std::string pp = child(path, "profile");
        allow_keys(p, {"base", "harmonics"}, pp);
        c.profile.base = read<double>(p, "base", pp);
        if (p.contains("harmonics")) c.profile.harmonics = harmonics_from_json(p.at("harmonics"), child(pp, "harmonics"));
    }
    if (j.contains("length_guess")) c.length_guess = read<double>(j, "length_guess", path);
    c.count = read_or<int>(j, "count", path, c.count);
    if (c.count < 1) throw ConfigError(fmt::format("{}: must be at least 1", child(path, "count")));
    c.samples = read_or<std::size_t>(j, "samples", path, c.samples);
    if (c.samples < 16) throw ConfigError(fmt::format("{}: must be at least 16", child(path, "samples")));
    c.path = read_or<std::string>(j, "path", path, "");
    if (c.generator == "file" && c.path.empty()) throw ConfigError(fmt::format("{}: required for file curves", child(path, "path")));
    return c;
}

Json curve_to(const CurveSpec& c) {
    Json j{{"generator", c.generator}, {"k0", c.k0}, {"center", xy(c.center)}, {"count", c.count}, {"samples", c.samples}};
    if (c.r) j["r"] = *c.r;
    Json centers = Json::array();
    for (const auto& p : c.centers) centers.push_back(xy(p));
    j["centers"] = std::move(centers);
    j["support"] = {{"a0", c.support.a0}, {"harmonics", harmonics_to_json(c.support.harmonics)}};
    j["profile"] = {{"base", c.profile.base}, {"harmonics", harmonics_to_json(c.profile.harmonics)}};
    if (c.length_guess) j["length_guess"] = *c.length_guess;
    if (!c.path.empty()) j["path"] = c.path;
    return j;
}

}  // namespace

RunConfig config_from_json(const Json& j) {
    allow_keys(j, {"suite", "seed", "space", "curve", "base_point", "k0_mode", "tolerances", "spindle_table", "sweep",
                   "warped", "output"},
               "");
    RunConfig c;
    c.suite = read_or<std::string>(j, "suite", "", c.suite);
    one_of<std::string>(c.suite, {"angle", "width", "spindle-table", "warped", "sweep", "all"}, "/suite");
    c.seed = read_or<std::uint64_t>(j, "seed", "", 0);
    if (j.contains("space")) {
        allow_keys(j.at("space"), {"kind", "k1"}, "/space");
        c.space = space_from_json(j.at("space"), "/space");
    }
    if (j.contains("curve")) c.curve = curve_from(j.at("curve"), "/curve");
    if (j.contains("base_point")) {
        const Json& b = j.at("base_point");
        allow_keys(b, {"kind", "coords"}, "/base_point");
        c.base.kind = read_or<std::string>(b, "kind", "/base_point", c.base.kind);
        one_of<std::string>(c.base.kind, {"origin", "tangent", "incenter", "random_interior"}, "/base_point/kind");
        c.base.coords = read_or<std::array<double, 2>>(b, "coords", "/base_point", c.base.coords);
    }
    const auto mode = read_or<std::string>(j, "k0_mode", "", "measured");
    one_of<std::string>(mode, {"measured", "declared"}, "/k0_mode");
    c.k0_mode = mode == "declared" ? K0Mode::Declared : K0Mode::Measured;
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        const std::string p = "/tolerances";
        allow_keys(t, {"angle", "width", "k0_margin", "mu", "identity", "limit", "angle_limit"}, p);
        Tolerances& tol = c.tolerances;
        tol.angle = read_or<double>(t, "angle", p, tol.angle);
        tol.width = read_or<double>(t, "width", p, tol.width);
        tol.k0_margin = read_or<double>(t, "k0_margin", p, tol.k0_margin);
        tol.mu = read_or<double>(t, "mu", p, tol.mu);
        tol.identity = read_or<double>(t, "identity", p, tol.identity);
        tol.limit = read_or<double>(t, "limit", p, tol.limit);
        tol.angle_limit = read_or<double>(t, "angle_limit", p, tol.angle_limit);
    }
    if (j.contains("spindle_table")) {
        const Json& s = j.at("spindle_table");
        const std::string p = "/spindle_table";
        allow_keys(s, {"spaces", "k0", "r_samples"}, p);
        if (s.contains("spaces")) {
            const Json& arr = s.at("spaces");
            if (!arr.is_array()) throw ConfigError(p + "/spaces: expected an array");
            c.spindle_table.spaces.clear();
            for (std::size_t i = 0; i < arr.size(); ++i) {
                c.spindle_table.spaces.push_back(space_from_json(arr[i], child(p + "/spaces", i)));
            }
        }
        c.spindle_table.k0 = read_or<std::vector<double>>(s, "k0", p, c.spindle_table.k0);
        c.spindle_table.r_samples = read_or<int>(s, "r_samples", p, c.spindle_table.r_samples);
        if (c.spindle_table.r_samples < 2) throw ConfigError(p + "/r_samples: must be at least 2");
    }
    if (j.contains("sweep")) {
        const Json& s = j.at("sweep");
        allow_keys(s, {"k0", "k1"}, "/sweep");
        c.sweep.k0 = read_or<double>(s, "k0", "/sweep", c.sweep.k0);
        c.sweep.k1 = read_or<std::vector<double>>(s, "k1", "/sweep", c.sweep.k1);
    }
    if (j.contains("warped")) {
        const Json& w = j.at("warped");
        const std::string p = "/warped";
        allow_keys(w, {"metric", "curves", "random_curves", "samples"}, p);
        WarpedSpec ws;
        ws.metric = warp_profile_from_json(require(w, "metric", p), p + "/metric");
        if (w.contains("curves")) {
            const Json& arr = w.at("curves");
            if (!arr.is_array()) throw ConfigError(p + "/curves: expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) ws.curves.push_back(radial_from_json(arr[i], child(p + "/curves", i)));
        }
        ws.random_curves = read_or<int>(w, "random_curves", p, 0);
        ws.samples = read_or<std::size_t>(w, "samples", p, ws.samples);
        if (ws.samples < 16) throw ConfigError(p + "/samples: must be at least 16");
        c.warped = std::move(ws);
    }
    if (j.contains("output")) {
        const Json& o = j.at("output");
        allow_keys(o, {"dir", "format"}, "/output");
        c.output.dir = read_or<std::string>(o, "dir", "/output", c.output.dir);
        c.output.format = read_or<std::string>(o, "format", "/output", c.output.format);
        one_of<std::string>(c.output.format, {"json", "csv", "both"}, "/output/format");
    }
    return c;
}

RunConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        throw ConfigError(fmt::format("{}:{}: syntax error: {}", line, col, e.what()));
    }
    return config_from_json(j);
}

Json config_to_json(const RunConfig& c) {
    Json j{{"suite", c.suite},
           {"seed", c.seed},
           {"space", space_to_json(c.space)},
           {"curve", curve_to(c.curve)},
           {"base_point", {{"kind", c.base.kind}, {"coords", xy(c.base.coords)}}},
           {"k0_mode", c.k0_mode == K0Mode::Declared ? "declared" : "measured"},
           {"tolerances",
            {{"angle", c.tolerances.angle},
             {"width", c.tolerances.width},
             {"k0_margin", c.tolerances.k0_margin},
             {"mu", c.tolerances.mu},
             {"identity", c.tolerances.identity},
             {"limit", c.tolerances.limit},
             {"angle_limit", c.tolerances.angle_limit}}},
           {"sweep", {{"k0", c.sweep.k0}, {"k1", c.sweep.k1}}},
           {"output", {{"dir", c.output.dir}, {"format", c.output.format}}}};
    Json spaces = Json::array();
    for (const SpaceForm& s : c.spindle_table.spaces) spaces.push_back(space_to_json(s));
    j["spindle_table"] = {{"spaces", spaces}, {"k0", c.spindle_table.k0}, {"r_samples", c.spindle_table.r_samples}};
    if (c.warped) {
        Json curves = Json::array();
        for (const RadialFunction& r : c.warped->curves) curves.push_back(radial_to_json(r));
        j["warped"] = {{"metric", warp_profile_to_json(c.warped->metric)},
                       {"curves", curves},
                       {"random_curves", c.warped->random_curves},
                       {"samples", c.warped->samples}};
    }
    return j;
}

std::string config_hash(const RunConfig& config) {
    Json j = config_to_json(config);
    // Output location does not affect results.
    j.erase("output");
    const std::string canonical = j.dump();
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(canonical.data(), canonical.size(), digest, &len, EVP_sha256(), nullptr);
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

}  // namespace sphericity
