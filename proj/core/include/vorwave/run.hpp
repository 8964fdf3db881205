#pragma once

#include "vorwave/config.hpp"
#include "vorwave/nonlinear.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace vorwave {

struct Table {
    std::string name;  // file stem
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

// Two-column x,value companion for plotting tools.
struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct JsonDocument {
    std::string name;
    std::string text;
};

struct Artifacts {
    std::vector<Table> tables;
    std::vector<JsonDocument> documents;
    std::vector<PlotSeries> plots;
};

struct OutputFile {
    std::string path;
    std::uintmax_t bytes = 0;
    std::string crc32;  // hex
};

std::string format_csv(const Table& table);
std::string format_plot(const PlotSeries& series);

// Writes <dir>/<name>.csv, .json and .dat files in a fixed order.
std::vector<OutputFile> export_results(const Artifacts& artifacts, const std::string& dir);

const std::vector<std::string>& command_names();

WaveProblemOptions wave_options(const RunConfig& cfg);
SolveOptions solve_options(const RunConfig& cfg);

// Pure computation behind a subcommand; throws module errors.
Artifacts compute_artifacts(const std::string& command, const RunConfig& cfg, std::vector<std::string>& warnings);

struct RunReport {
    std::string command;
    std::string config;  // canonical echo
    std::vector<OutputFile> outputs;
    double wall_seconds = 0.0;
    std::vector<std::string> warnings;
    bool ok = false;
    std::string error;
    int exit_status = 0;
};

std::string report_json(const RunReport& report);

// Runs, exports, and writes <out>/report.json; module errors are captured in the report.
RunReport run_command(const std::string& command, const RunConfig& cfg);

}  // namespace vorwave
