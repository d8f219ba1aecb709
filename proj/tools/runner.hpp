#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"
#include "levypot/bounds.hpp"
#include "levypot/process.hpp"
#include "levypot/quadrature.hpp"
#include "levypot/simulation.hpp"

namespace levypot::cli {

// 17 significant digits, so a value survives a round trip through text.
std::string format_number(double x);

using CellValue = std::variant<double, std::string>;

struct Table {
    std::string file;   // name inside the output directory
    std::vector<std::string> header;
    std::vector<std::vector<CellValue>> rows;

    std::string to_csv() const;
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
    const std::string& text(std::size_t row, const std::string& name) const;
};

// A NaN yerr marks a point without an error bar; it is written as an empty field.
struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    double yerr = 0.0;
};
Table plot_table(std::string file, const std::vector<PlotPoint>& series);
void emit_plotdata(const std::string& path, const std::vector<PlotPoint>& series);

const std::vector<std::string>& command_names();

using TaskValue = std::variant<double, std::vector<double>, std::string, bool>;

struct TaskParams {
    std::map<std::string, TaskValue> values;
    double num(const std::string& key) const;
    const std::vector<double>& list(const std::string& key) const;
    const std::string& str(const std::string& key) const;
    bool flag(const std::string& key) const;
};

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::optional<std::string> theorem;
};

struct RunConfig {
    std::string command;
    ProcessSpec spec;
    SimScheme scheme;
    RunOptions runs;
    std::optional<QuadratureConfig> quad;
    std::string out_dir = ".";
    TaskParams task;
};

// Validates every section and parameter; throws ConfigParseError before any
// computation. `command` from the command line wins over [task] command.
RunConfig build_config(const ConfigFile& file, const std::string& command, const Overrides& over = {});

struct RunResult {
    std::vector<Table> tables;
    std::vector<SandwichReport> reports;
    std::string summary;
    int exit_code = 0;   // 2 when a sandwich is violated
    const Table& table(const std::string& file) const;
};

RunResult execute(const RunConfig& cfg);
// Writes all tables at once; throws IoError.
void write_tables(const RunResult& result, const std::string& out_dir);

} // namespace levypot::cli
