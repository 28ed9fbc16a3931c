#include "sphericity/errors.hpp"
#include "sphericity/report.hpp"
#include "sphericity/spindle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace sphericity;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("sphericity-test-cli-" + std::to_string(::getpid())) / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string message_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* kAngleConfig = R"({
  "suite": "angle",
  "space": {"kind": "flat"},
  "curve": {"generator": "circle", "k0": 1.0},
  "base_point": {"kind": "tangent", "coords": [0.7, 0.0]}
})";

const char* kLuneConfig = R"({
  "suite": "width",
  "space": {"kind": "sphere", "k1": 1.0},
  "curve": {"generator": "lune", "k0": 1.0}
})";

const char* kViolatingWarpedConfig = R"({
  "suite": "warped",
  "warped": {
    "metric": {"family": "hyperbolic", "k": 1.0, "T": 2.0},
    "curves": [{"c0": 0.8, "harmonics": [{"n": 2, "a": 0.1}]}]
  }
})";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SPHERICITY_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

// --- configuration ------------------------------------------------------------------

TEST(Config, Defaults) {
    const RunConfig c = parse_config("{}");
    EXPECT_EQ(c.suite, "all");
    EXPECT_EQ(c.seed, 0u);
    EXPECT_EQ(c.space.kind(), Geometry::Flat);
    EXPECT_EQ(c.curve.generator, "circle");
    EXPECT_EQ(c.k0_mode, K0Mode::Measured);
    EXPECT_EQ(c.tolerances.angle, 1e-9);
    EXPECT_EQ(c.tolerances.width, 1e-7);
    EXPECT_EQ(c.output.format, "both");
}

TEST(Config, SyntaxErrorCarriesLineAndColumn) {
    const std::string msg = message_of("{\n  \"suite\": \"angle\",\n  \"seed\": ,\n}");
    EXPECT_EQ(msg.rfind("3:", 0), 0u) << msg;
    EXPECT_NE(msg.find("syntax error"), std::string::npos) << msg;
}

TEST(Config, InvalidValuesCarryPointer) {
    EXPECT_NE(message_of(R"({"suite": "volume"})").find("/suite"), std::string::npos);
    EXPECT_NE(message_of(R"({"curve": {"k0": "one"}})").find("/curve/k0"), std::string::npos);
    EXPECT_NE(message_of(R"({"curve": {"colour": 1}})").find("/curve/colour"), std::string::npos);
    EXPECT_NE(message_of(R"({"space": {"kind": "torus"}})").find("/space"), std::string::npos);
    EXPECT_NE(message_of(R"({"space": {"kind": "sphere"}})").find("/space/k1"), std::string::npos);
    EXPECT_NE(message_of(R"({"output": {"format": "xml"}})").find("/output/format"), std::string::npos);
    EXPECT_NE(message_of(R"({"warped": {"metric": {"family": "cubic", "T": 1}, "curves": [{"c0": 0.5, "harmonics": [{"a": 1}]}]}})")
                  .find("/warped/curves/0/harmonics/0/n"),
              std::string::npos);
    EXPECT_NE(message_of(R"({"tolerances": {"angle": "tight"}})").find("/tolerances/angle"), std::string::npos);
}

TEST(Config, RoundTrip) {
    const RunConfig a = parse_config(kViolatingWarpedConfig);
    const Json j = config_to_json(a);
    const RunConfig b = config_from_json(Json::parse(j.dump()));
    EXPECT_EQ(config_to_json(b).dump(), j.dump());
    EXPECT_EQ(config_hash(a), config_hash(b));

    const RunConfig c = parse_config(kLuneConfig);
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(c))).dump(), config_to_json(c).dump());
}

TEST(Config, HashIgnoresOutputButNotContent) {
    RunConfig a = parse_config(kAngleConfig);
    RunConfig b = a;
    b.output.dir = "elsewhere";
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 64u);
    b.seed = 7;
    EXPECT_NE(config_hash(a), config_hash(b));
}

// --- suites -------------------------------------------------------------------------

TEST(Run, AngleSharpnessCase) {
    const SuiteResult r = run(parse_config(kAngleConfig));
    EXPECT_TRUE(r.pass());
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_LT(r.checks[0].slack, 1e-5);
    EXPECT_GE(r.checks[0].slack, -1e-9);
    EXPECT_NEAR(r.checks[0].bound, std::sqrt(0.51), 1e-9);
    const Series* s = r.find_series("angle");
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->columns, (std::vector<std::string>{"s", "t", "phi", "bound", "slack"}));
    EXPECT_EQ(exit_code(r), 0);
}

TEST(Run, SphereLuneWidthCase) {
    const SuiteResult r = run(parse_config(kLuneConfig));
    EXPECT_TRUE(r.pass());
    ASSERT_EQ(r.checks.size(), 1u);
    EXPECT_LT(std::abs(r.checks[0].slack), 1e-5);
    // The bound is d0 at the measured kmin less the 1e-6 margin.
    EXPECT_NEAR(r.checks[0].bound, spindle_optimum(SpaceForm::sphere(1.0), 1.0 - 1e-6).d0, 1e-8);
}

TEST(Run, SpindleTable) {
    const SuiteResult r = run(parse_config(R"({"suite": "spindle-table", "spindle_table": {"k0": [0.5, 1, 2]}})"));
    EXPECT_TRUE(r.pass());
    const Series* table = r.find_series("spindle-table");
    ASSERT_NE(table, nullptr);
    EXPECT_EQ(table->columns, (std::vector<std::string>{"space", "k1", "k0", "r", "rho", "d", "r0", "d0"}));
    ASSERT_FALSE(table->rows.empty());
    for (const auto& row : table->rows) {
        const double k0 = std::get<double>(row[2]);
        ASSERT_NEAR(std::get<double>(row[7]), (std::sqrt(2.0) - 1) / k0, 1e-15);
    }
    const Series* spindle = r.find_series("spindle-000");
    ASSERT_NE(spindle, nullptr);
    EXPECT_EQ(spindle->columns, (std::vector<std::string>{"r", "rho", "d"}));
}

TEST(Run, SweepConvergesToEuclidean) {
    const SuiteResult r = run(parse_config(R"({"suite": "sweep"})"));
    EXPECT_TRUE(r.pass());
    for (const char* name : {"sweep-sphere", "sweep-hyperbolic"}) {
        const Series* s = r.find_series(name);
        ASSERT_NE(s, nullptr) << name;
        EXPECT_EQ(s->columns, (std::vector<std::string>{"k1", "d0"}));
        const auto& last = s->rows.back();
        EXPECT_EQ(std::get<double>(last[0]), 1e-4);
        EXPECT_NEAR(std::get<double>(last[1]), std::sqrt(2.0) - 1, 1e-8);
    }
}

TEST(Run, HypothesisViolationIsNotAFailure) {
    const SuiteResult r = run(parse_config(kViolatingWarpedConfig));
    EXPECT_EQ(r.status, Status::HypothesisViolation);
    EXPECT_EQ(exit_code(r), 3);
    bool found = false;
    for (const Check& c : r.checks) found |= c.status == Status::HypothesisViolation;
    EXPECT_TRUE(found);
}

TEST(Run, BoundFailureExitCode) {
    // A negative tolerance demands slack of at least 1, which no curve meets.
    RunConfig cfg = parse_config(kAngleConfig);
    cfg.tolerances.angle = -1.0;
    const SuiteResult r = run(cfg);
    EXPECT_EQ(r.status, Status::Fail);
    EXPECT_EQ(exit_code(r), 2);
}

TEST(Run, GeneratorErrorsBecomeConfigErrors) {
    EXPECT_THROW(run(parse_config(R"({"suite": "angle", "curve": {"generator": "lune", "k0": 1, "r": 2}})")),
                 ConfigError);
    EXPECT_THROW(run(parse_config(R"({"suite": "angle", "space": {"kind": "hyperbolic", "k1": 1}, "curve": {"k0": 0.5}})")),
                 ConfigError);
}

TEST(Run, DeterministicForSeed) {
    const RunConfig cfg = parse_config(R"({"suite": "angle", "seed": 17, "curve": {"generator": "random_support", "count": 3},
                                          "base_point": {"kind": "random_interior"}})");
    SuiteResult a = run(cfg);
    SuiteResult b = run(cfg);
    a.metadata.timestamp = b.metadata.timestamp = "fixed";
    EXPECT_EQ(report_text(a), report_text(b));
    EXPECT_TRUE(a.pass());
    EXPECT_EQ(a.checks.size(), 3u);
    RunConfig other = cfg;
    other.seed = 18;
    SuiteResult c = run(other);
    c.metadata.timestamp = "fixed";
    EXPECT_NE(report_text(a), report_text(c));
}

// --- reports ----------------------------------------------------------------------

TEST(Report, JsonLayout) {
    SuiteResult r = run(parse_config(kAngleConfig));
    r.metadata.timestamp = "2026-01-01T00:00:00Z";
    const Json j = report_json(r);
    EXPECT_EQ(j.at("schema"), "sphericity.report/1");
    EXPECT_EQ(j.at("metadata").at("tool_version"), std::string(tool_version()));
    EXPECT_EQ(j.at("metadata").at("config_hash"), config_hash(parse_config(kAngleConfig)));
    EXPECT_EQ(j.at("status"), "pass");
    EXPECT_TRUE(j.at("pass").get<bool>());
    EXPECT_FALSE(j.at("config").contains("output"));
    EXPECT_EQ(j.at("series").at(0).at("file"), "angle.csv");
}

TEST(Report, CsvUsesSeventeenDigits) {
    Series s{"demo", {"a", "b"}, {{Cell{0.1}, Cell{std::string("flat")}}, {Cell{1.0 / 3.0}, Cell{2.0}}}};
    EXPECT_EQ(csv_text(s), "a,b\n0.10000000000000001,flat\n0.33333333333333331,2\n");
}

TEST(Report, EmitPlotData) {
    const SuiteResult r = run(parse_config(kAngleConfig));
    const fs::path dir = scratch("plot");
    const auto written = emit_plot_data(r, "angle", dir);
    ASSERT_EQ(written.size(), 1u);
    const std::string text = read_file(written[0]);
    EXPECT_EQ(text.rfind("s,t,phi,bound,slack\n", 0), 0u);
    try {
        emit_plot_data(r, "spindle", dir);
        FAIL() << "expected an error";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("available: angle"), std::string::npos) << e.what();
    }
}

TEST(Report, WriteOutputsHonoursFormat) {
    const SuiteResult r = run(parse_config(kAngleConfig));
    const fs::path dir = scratch("formats");
    EXPECT_EQ(write_outputs(r, dir / "json", "json").size(), 1u);
    EXPECT_TRUE(fs::exists(dir / "json" / "report.json"));
    EXPECT_FALSE(fs::exists(dir / "json" / "angle.csv"));
    write_outputs(r, dir / "csv", "csv");
    EXPECT_FALSE(fs::exists(dir / "csv" / "report.json"));
    EXPECT_TRUE(fs::exists(dir / "csv" / "angle.csv"));
    EXPECT_THROW(write_outputs(r, dir, "xml"), ConfigError);
}

// --- command line -----------------------------------------------------------------

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("exit");
    std::ofstream(dir / "angle.json") << kAngleConfig;
    std::ofstream(dir / "warped.json") << kViolatingWarpedConfig;
    std::ofstream(dir / "broken.json") << "{\"suite\": ";
    EXPECT_EQ(run_cli("verify-angle --config " + (dir / "angle.json").string() + " --out " + (dir / "a").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "a" / "report.json"));
    EXPECT_EQ(run_cli("verify-warped --config " + (dir / "warped.json").string() + " --out " + (dir / "w").string()), 3);
    EXPECT_EQ(run_cli("verify-angle --config " + (dir / "broken.json").string() + " --out " + (dir / "b").string()), 1);
    EXPECT_EQ(run_cli("verify-angle --format yaml"), 1);
    EXPECT_EQ(run_cli("no-such-command"), 1);
    EXPECT_EQ(run_cli("--version"), 0);
}

TEST(Cli, WidthFromCurveFile) {
    const fs::path dir = scratch("curve");
    const ClosedCurve lune = make_lune(SpaceForm::flat(), 1.0, spindle_optimum(SpaceForm::flat(), 1.0).r0, 2048);
    std::ofstream(dir / "lune.json") << curve_to_json(lune).dump();
    EXPECT_EQ(run_cli("verify-width --curve " + (dir / "lune.json").string() + " --format json --out " +
                      (dir / "out").string()),
              0);
    const Json rep = Json::parse(read_file(dir / "out" / "report.json"));
    EXPECT_EQ(rep.at("suite"), "width");
    EXPECT_LT(std::abs(rep.at("checks").at(0).at("slack").get<double>()), 1e-5);
}
