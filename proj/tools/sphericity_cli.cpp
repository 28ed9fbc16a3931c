#include "sphericity/errors.hpp"
#include "sphericity/report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <ctime>
#include <map>
#include <optional>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string_view>

using namespace sphericity;

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::string format;
    std::string curve;
    std::optional<std::uint64_t> seed;
};

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunConfig load(const Flags& flags, const std::string& suite) {
    RunConfig cfg;
    if (!flags.config.empty()) {
        std::ifstream in(flags.config);
        if (!in) throw ConfigError(fmt::format("cannot read config '{}'", flags.config));
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            cfg = parse_config(buf.str());
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("{}:{}", flags.config, e.what()));
        }
    }
    cfg.suite = suite;
    if (flags.seed) cfg.seed = *flags.seed;
    if (!flags.out.empty()) cfg.output.dir = flags.out;
    if (!flags.format.empty()) cfg.output.format = flags.format;
    if (!flags.curve.empty()) {
        cfg.curve.generator = "file";
        cfg.curve.path = flags.curve;
    }
    return cfg;
}

std::string verdict(const std::string& command, const SuiteResult& res) {
    std::string word = "PASS";
    if (res.status == Status::Fail) word = "FAIL";
    if (res.status == Status::HypothesisViolation) word = "HYPOTHESIS VIOLATION";
    std::string line = fmt::format("{}: {} ({} checks)", command, word, res.checks.size());
    for (const Check& c : res.checks) {
        if (c.status != Status::Pass) {
            line += fmt::format(" first: {}/{}", c.suite, c.name);
            if (!c.message.empty()) line += fmt::format(": {}", c.message);
            break;
        }
    }
    return line;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Angle and layer-width bounds for convex curves in space forms"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    Flags flags;
    struct Command {
        const char* name;
        const char* suite;
        const char* help;
    };
    const Command commands[] = {
        {"verify-angle", "angle", "Check the radial angle bound along curves"},
        {"verify-width", "width", "Check the layer width bound of convex bodies"},
        {"spindle-table", "spindle-table", "Tabulate lune widths and the width maximiser"},
        {"verify-warped", "warped", "Check both bounds on rotationally symmetric metrics"},
        {"sweep", "sweep", "Follow the width bound as the space flattens"}};
    std::map<CLI::App*, std::string> suites;
    for (const auto& [name, suite, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", flags.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out, "Output directory");
        sub->add_option("--seed", flags.seed, "Seed override");
        sub->add_option("--format", flags.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
        if (std::string_view(name) == "verify-width") sub->add_option("--curve", flags.curve, "Curve JSON")->check(CLI::ExistingFile);
        suites[sub] = suite;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        const RunConfig cfg = load(flags, suites.at(chosen));
        SuiteResult res = run(cfg);
        res.metadata.timestamp = utc_timestamp();
        write_outputs(res, cfg.output.dir, cfg.output.format);
        std::cout << verdict(chosen->get_name(), res) << "\n";
        return exit_code(res);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
