#pragma once

#include <vector>

#include "shlab/levelset.hpp"
#include "shlab/solver.hpp"

namespace shlab {

struct LevelRigidity {
    double t = 0;
    long chi = 0;
    double chi_plus_norm = 0;     // sup |chi+|
    double gauss = 0;             // sup |K|
    double x_gradient = 0;        // sup |X + grad log f|
    double dec = 0;               // sup |mu + J(nu)|
    double x_gradient_l2 = 0;     // integral of |X + grad log f|^2
    double gauss_bonnet = 0;      // 2 pi chi - x_gradient_l2
    bool balance_checked = false;
    bool balance_ok = true;
    double area = 0;
};

struct RigidityReport {
    double chi_plus_norm = 0;
    double gauss_flatness = 0;
    double x_gradient_match = 0;
    double dec_saturation = 0;
    double tolerance = 0;  // threshold for the Gauss-Bonnet balance check
    std::vector<LevelRigidity> levels;
    long skipped_levels = 0;
    bool balance_ok = true;
};

// Diagnostics on n_levels midpoint levels of u; nu = grad u / |grad u|
// points toward infinity. Throws FoliationBroken if |grad u| <= eps at a node
// that a sampled level passes through.
RigidityReport rigidity_diagnostics(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol,
                                    const ConstraintFields& cf, int n_levels, double tolerance);

}  // namespace shlab
