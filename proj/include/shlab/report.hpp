#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shlab/energy.hpp"
#include "shlab/solver.hpp"
#include "shlab/surface.hpp"
#include "shlab/tuner.hpp"

namespace shlab {

using Json = nlohmann::ordered_json;

// Shortest text that round-trips the double.
std::string format_number(double x);

// Pass/fail record; margin > 0 means the check passed with room to spare.
struct Check {
    std::string name;
    double value = 0;
    double tolerance = 0;
    double margin = 0;
    bool pass = false;
};
// value <= tolerance
Check upper_check(std::string name, double value, double tolerance);
// value >= tolerance
Check lower_check(std::string name, double value, double tolerance);
Json to_json(const Check& c);

struct RefinementRow {
    std::string study;
    double h = 0;
    double error = 0;
    double order = 0;  // observed order against the previous row (NaN on the first)
};

// Radial profile along the line xi = theta = 0:
// r, u, |grad u|, residual, theta_+, mu, dec_margin.
void write_profile_csv(const std::filesystem::path& file, const InitialDataSet& data, const ScalarField& u);
// r, flux, extrapolant (the fit a + b / r evaluated at r).
void write_flux_csv(const std::filesystem::path& file, const EnergyEstimate& e);
// One row per iterate of the boundary vector.
void write_iterates_csv(const std::filesystem::path& file, const TunerReport& t);
void write_refinement_csv(const std::filesystem::path& file, const std::vector<RefinementRow>& rows);
// Generic table writer for smaller outputs.
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
// Indexed triangle list: "v x y z" lines then "f i j k" lines, 1-based.
void write_mesh(const std::filesystem::path& file, const TriMesh& mesh);
// Script that regenerates figures from whichever of the named CSVs exist.
void write_plot_script(const std::filesystem::path& dir, const std::vector<std::string>& csv_files);
void write_json(const std::filesystem::path& file, const Json& j);

}  // namespace shlab
