#pragma once

#include <map>
#include <optional>
#include <vector>

#include "shlab/solver.hpp"

namespace shlab {

enum class RootMethod { Bisection, Illinois };

struct TunerParams {
    SolverParams solver;
    RootMethod method = RootMethod::Illinois;
    // Target for |extremal n(u)| on a tuned box; unset means grid spacing h.
    std::optional<double> phi_tol;
    double value_tol = 1e-9;  // bracket width at which root finding stops
    int max_root_steps = 60;
    double outer_tol = 1e-6;  // sup-norm change of the boundary vector
    int outer_max = 50;
};

double resolved_phi_tol(const TunerParams& p, const Grid& g);

// Constants on the tunable components, ordered by component id (2, 3, ...).
using BoundaryVector = std::vector<double>;

// Anchors u = 0 on the inner torus, u = 1 on the outer torus; a on boxes.
BoundaryValues anchored_values(const InitialDataSet& data, const BoundaryVector& a);

// n(u_a) on each tunable component, keyed by component id.
std::map<int, BoundaryNormalField> phi_map(const InitialDataSet& data, const BoundaryVector& a,
                                           const SolverParams& params, const ScalarField* guess = nullptr);

// min n(u) on OuterPlus boxes, max n(u) on InnerMinus boxes: the quantity
// driven to zero. Increasing in the component's own constant.
double extremal_phi(const InitialDataSet& data, int component, const BoundaryNormalField& f);

struct OptimalValue {
    double value = 0;
    double phi = 0;        // extremal n(u) at value
    double bracket = 0;    // final bracket width
    int steps = 0;         // solves spent on root finding
    ScalarField u;         // solution at value, reusable as a warm start
};

// T_i(a): root in [0, 1] of the extremal n(u) with the i-th entry replaced.
// Throws NoBracket when both ends share a sign.
OptimalValue optimal_value(const InitialDataSet& data, std::size_t index, const BoundaryVector& a,
                           const TunerParams& params, const ScalarField* guess = nullptr);

struct TunerReport {
    BoundaryVector fixed_point;
    std::vector<BoundaryVector> iterates;
    std::map<int, double> min_normal_derivatives;  // min of d_upsilon u per tunable component
    std::map<int, double> extremal_n;              // min/max n(u) per tunable component
    std::vector<int> bisection_counts;             // total root-finding solves per component
    SpacetimeHarmonicSolution solution;
    double phi_tol = 0;
    bool converged = false;
};

// Fixed-point iteration a_{j+1} = T(a_j) from start (default all ones).
// Throws MonotonicityViolation if an entry grows by more than outer_tol.
TunerReport tune_boundary_constants(const InitialDataSet& data, const TunerParams& params,
                                    std::optional<BoundaryVector> start = std::nullopt);

}  // namespace shlab
