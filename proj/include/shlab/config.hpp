#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shlab/barriers.hpp"
#include "shlab/grid.hpp"
#include "shlab/models.hpp"
#include "shlab/solver.hpp"
#include "shlab/tuner.hpp"

namespace shlab {

inline constexpr int kSchemaVersion = 1;

enum class Pipeline { Solve, Tune, VerifyIdentity, Energy, Penrose, Barriers, Rigidity, PpWaveAudit, Refine };

const char* pipeline_name(Pipeline p);
std::optional<Pipeline> pipeline_from_name(const std::string& s);

struct ScenarioConfig {
    Pipeline pipeline = Pipeline::Solve;
    ModelSpec model;
    Grid grid;
    SolverParams solver;
    TunerParams tuner;  // tuner.solver mirrors solver
    BoundaryValues boundary_values;  // optional overrides for the solve pipeline
    std::vector<double> radii;       // energy pipeline
    int levels = 32;                 // level samples for identity and rigidity
    double tolerance = 1e-5;         // base tolerance before --tolerance-scale
    BarrierParams barriers;
    int refinements = 3;             // dyadic refinements in the refine pipeline
    bool export_meshes = false;
    std::filesystem::path output_dir = "out";
    nlohmann::ordered_json echo;     // the parsed document, for the report
};

// Throws ConfigError naming the offending field path, e.g. "grid.r_min".
// A pipeline given by the caller (the CLI subcommand) takes precedence over
// the document's "pipeline" key, which is then optional.
ScenarioConfig parse_config(const nlohmann::json& doc, std::optional<Pipeline> pipeline = std::nullopt);
ScenarioConfig load_config(const std::filesystem::path& file, std::optional<Pipeline> pipeline = std::nullopt);

}  // namespace shlab
