#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlbif/config.hpp"

namespace nlbif {

struct RunOptions {
    std::filesystem::path out;  ///< empty: use the config's output_dir
    int jobs = 1;
    double tol_scale = 1.0;
};

struct RunResult {
    int status = 0;  ///< 0 success, 1 task failure, 2 configuration error
    std::vector<std::string> tasks;  ///< tasks actually executed, in order
    std::vector<std::string> artifacts;
    std::string failed_task;
    std::string message;
    std::filesystem::path out_dir;
};

/// Requested tasks plus their prerequisites, in execution order.
std::vector<std::string> plan_tasks(const RunConfig& cfg);

/// Executes a parsed configuration and writes a manifest next to the artifacts.
RunResult run(const RunConfig& cfg, const RunOptions& opts, std::ostream& log);

/// Loads, parses and runs; a configuration error returns status 2 without touching the disk.
RunResult run_file(const std::string& config_path, const RunOptions& opts, std::ostream& log);

} // namespace nlbif
