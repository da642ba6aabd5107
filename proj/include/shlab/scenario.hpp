#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "shlab/config.hpp"
#include "shlab/report.hpp"

namespace shlab {

struct RunOptions {
    double tolerance_scale = 1.0;
    std::optional<std::filesystem::path> output_dir;  // overrides the config
    int threads = 0;                                  // recorded only; the caller sets OpenMP
};

struct RunResult {
    Json report;
    std::vector<Check> checks;
    std::vector<std::string> files;  // relative to the output directory
    bool all_pass = true;
    std::filesystem::path output_dir;
};

// Executes the configured pipeline and writes report.json, timing.json, CSV
// profiles and plot.py into the output directory. Library errors propagate.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

}  // namespace shlab
