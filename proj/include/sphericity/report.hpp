#pragma once

#include "sphericity/bounds.hpp"
#include "sphericity/generators.hpp"
#include "sphericity/io.hpp"
#include "sphericity/warped.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sphericity {

// Generators: circle, lune, support, frame_ode, disc_intersection,
// random_support, random_frame_ode, random_disc, file.
struct CurveSpec {
    std::string generator = "circle";
    double k0 = 1.0;
    // Lune inradius; the width maximiser r0 when absent.
    std::optional<double> r;
    // Tangent-plane coordinates at the origin (exp-mapped).
    std::array<double, 2> center{0.0, 0.0};
    std::vector<std::array<double, 2>> centers;
    SupportFunction support;
    FourierProfile profile;
    std::optional<double> length_guess;
    int count = 1;
    std::size_t samples = 4096;
    std::string path;
};

// origin | tangent (coords exp-mapped at the origin) | incenter | random_interior
struct BaseSpec {
    std::string kind = "origin";
    std::array<double, 2> coords{0.0, 0.0};
};

struct Tolerances {
    double angle = 1e-9;
    double width = 1e-7;
    double k0_margin = 1e-6;
    double mu = 1e-9;
    double identity = 1e-9;
    double limit = 1e-5;
    double angle_limit = 1e-4;
};

struct SpindleTableSpec {
    std::vector<SpaceForm> spaces{SpaceForm::flat()};
    std::vector<double> k0{1.0};
    int r_samples = 33;
};

struct SweepSpec {
    double k0 = 1.0;
    std::vector<double> k1{1e-1, 1e-2, 1e-3, 1e-4};
};

struct WarpedSpec {
    WarpProfile metric;
    std::vector<RadialFunction> curves;
    int random_curves = 0;
    std::size_t samples = 4096;
};

struct OutputSpec {
    std::string dir = "out";
    std::string format = "both";  // json | csv | both
};

// suite: angle | width | spindle-table | warped | sweep | all
struct RunConfig {
    std::string suite = "all";
    std::uint64_t seed = 0;
    SpaceForm space = SpaceForm::flat();
    CurveSpec curve;
    BaseSpec base;
    K0Mode k0_mode = K0Mode::Measured;
    Tolerances tolerances;
    SpindleTableSpec spindle_table;
    SweepSpec sweep;
    std::optional<WarpedSpec> warped;
    OutputSpec output;
};

// ConfigError messages carry "line:column" for syntax errors and a JSON
// pointer for invalid values.
RunConfig parse_config(const std::string& text);
RunConfig config_from_json(const Json& j);
Json config_to_json(const RunConfig& config);

// SHA-256 (hex) of the canonical (sorted, compact) JSON form.
std::string config_hash(const RunConfig& config);

enum class Status { Pass, Fail, HypothesisViolation };
std::string_view to_string(Status s);

struct Check {
    std::string suite;
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    double slack = 0.0;
    Status status = Status::Pass;
    std::string message;
    Json details = Json::object();
};

using Cell = std::variant<double, std::string>;

struct Series {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Metadata {
    std::string tool_version;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string timestamp;
};

struct SuiteResult {
    std::string suite;
    std::vector<Check> checks;
    std::vector<Series> series;
    Status status = Status::Pass;
    Metadata metadata;
    Json config;

    bool pass() const { return status == Status::Pass; }
    const Series* find_series(const std::string& name) const;
};

std::string_view tool_version();

SuiteResult run(const RunConfig& config);

// 0 pass, 2 bound failure, 3 hypothesis violation.
int exit_code(const SuiteResult& result);

// Timestamp is set by the caller (it is the only non-deterministic field).
Json report_json(const SuiteResult& result);
std::string report_text(const SuiteResult& result);

std::string csv_text(const Series& series);
// Writes <dir>/<name>.csv for the named series, or for every series whose
// name starts with "<kind>-"; DomainError naming the available series
// otherwise. Returns the written paths.
std::vector<std::filesystem::path> emit_plot_data(const SuiteResult& result, const std::string& kind,
                                                  const std::filesystem::path& dir);

// Writes report.json and/or all CSV series according to the format.
std::vector<std::filesystem::path> write_outputs(const SuiteResult& result, const std::filesystem::path& dir,
                                                 const std::string& format);

}  // namespace sphericity
