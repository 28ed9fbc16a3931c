#include "sphericity/report.hpp"

#include "sphericity/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace sphericity {

namespace {

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json check_json(const Check& c) {
    return {{"suite", c.suite},
            {"name", c.name},
            {"status", std::string(to_string(c.status))},
            {"measured", number(c.measured)},
            {"bound", number(c.bound)},
            {"slack", number(c.slack)},
            {"message", c.message},
            {"details", c.details}};
}

std::string cell_text(const Cell& cell) {
    if (const double* v = std::get_if<double>(&cell)) return std::isnan(*v) ? "nan" : fmt::format("{:.17g}", *v);
    return std::get<std::string>(cell);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError(fmt::format("cannot write '{}'", path.string()));
    out << text;
}

}  // namespace

Json report_json(const SuiteResult& r) {
    std::size_t passed = 0, failed = 0, violated = 0;
    Json checks = Json::array();
    for (const Check& c : r.checks) {
        checks.push_back(check_json(c));
        if (c.status == Status::Pass) ++passed;
        if (c.status == Status::Fail) ++failed;
        if (c.status == Status::HypothesisViolation) ++violated;
    }
    Json series = Json::array();
    for (const Series& s : r.series) {
        series.push_back({{"name", s.name}, {"columns", s.columns}, {"rows", s.rows.size()}, {"file", s.name + ".csv"}});
    }
    return {{"schema", "sphericity.report/1"},
            {"metadata",
             {{"tool_version", r.metadata.tool_version},
              {"config_hash", r.metadata.config_hash},
              {"seed", r.metadata.seed},
              {"timestamp", r.metadata.timestamp}}},
            {"suite", r.suite},
            {"status", std::string(to_string(r.status))},
            {"pass", r.pass()},
            {"counts", {{"pass", passed}, {"fail", failed}, {"hypothesis_violation", violated}}},
            {"config", r.config},
            {"checks", std::move(checks)},
            {"series", std::move(series)}};
}

std::string report_text(const SuiteResult& result) { return report_json(result).dump(2) + "\n"; }

std::string csv_text(const Series& series) {
    std::string out;
    for (std::size_t i = 0; i < series.columns.size(); ++i) out += (i ? "," : "") + series.columns[i];
    out += "\n";
    for (const auto& row : series.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += cell_text(row[i]);
        }
        out += "\n";
    }
    return out;
}

std::vector<std::filesystem::path> emit_plot_data(const SuiteResult& result, const std::string& kind,
                                                  const std::filesystem::path& dir) {
    std::vector<const Series*> chosen;
    for (const Series& s : result.series) {
        if (s.name == kind || s.name.rfind(kind + "-", 0) == 0) chosen.push_back(&s);
    }
    if (chosen.empty()) {
        std::string names;
        for (const Series& s : result.series) names += (names.empty() ? "" : ", ") + s.name;
        throw DomainError(fmt::format("no series '{}'; available: {}", kind, names.empty() ? "(none)" : names));
    }
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for (const Series* s : chosen) {
        const auto path = dir / (s->name + ".csv");
        write_file(path, csv_text(*s));
        written.push_back(path);
    }
    return written;
}

std::vector<std::filesystem::path> write_outputs(const SuiteResult& result, const std::filesystem::path& dir,
                                                 const std::string& format) {
    if (format != "json" && format != "csv" && format != "both") {
        throw ConfigError(fmt::format("unsupported format '{}'", format));
    }
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    if (format != "csv") {
        const auto path = dir / "report.json";
        write_file(path, report_text(result));
        written.push_back(path);
    }
    if (format != "json") {
        for (const Series& s : result.series) {
            const auto path = dir / (s.name + ".csv");
            write_file(path, csv_text(s));
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace sphericity
