#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shlab/models.hpp"
#include "shlab/solver.hpp"
#include "shlab/tuner.hpp"

namespace shlab {

// Torus average of the mass aspect; for constant m, p this is the aspect itself.
double energy_from_mass_aspect(const AsymptoticTensors& asym, double period_xi, double period_theta);

struct PenroseResult {
    bool applicable = false;
    std::string reason;
    double C = 0;          // 4 min d_upsilon u on the inner torus
    double area = 0;       // induced area of the inner torus
    double bound = 0;      // C area / |T^2|
    double k_plus_g = 0;   // sup |k + g| over samples
    double max_abs_H = 0;  // on the inner torus
    double H_tolerance = 0;
    bool holds = false;    // E >= bound - tolerance (when applicable)
};

struct EnergyEstimate {
    std::optional<double> E_mass_aspect;
    std::vector<double> radii;
    std::vector<double> flux;  // -(2/|T^2|) int theta_+ |grad u| dA at each radius
    double E_flux = 0;         // a in the fit flux(r) = a + b / r over the top three radii
    double fit_b = 0;
    std::optional<double> lower_bound_rhs;
    std::optional<PenroseResult> penrose;
};

struct FluxParams {
    TunerParams tuner;  // used when the domain has excised boxes
};

// One truncated solve per radius (each a grid node): u = 0 on the inner
// torus, u = truncation_value on the truncation torus. Boxes are tuned on
// the unit-normalized problem and scaled (the equation is 1-homogeneous).
EnergyEstimate energy_from_flux(const InitialDataSet& data, const std::vector<double>& radii,
                                const FluxParams& params, const ModelSpec* model = nullptr);

// Solution of the truncated problem at grid index i_max (helper for flux and barriers).
SpacetimeHarmonicSolution truncated_solve(const InitialDataSet& data, int i_max, const FluxParams& params,
                                          const ModelSpec* model, InitialDataSet* restricted = nullptr);

// (1/|T^2|) int (|spacetime Hessian|^2/|grad u| + 2 (mu + J(nu)) |grad u|) dV
double energy_lower_bound(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol,
                          const ConstraintFields& cf);

// E is the energy compared against the bound.
PenroseResult penrose_bound(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol, double E,
                            double tolerance);

int nearest_radial_index(const Grid& g, double r);

}  // namespace shlab
