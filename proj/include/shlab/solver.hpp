#pragma once

#include <map>
#include <optional>
#include <vector>

#include "shlab/data.hpp"
#include "shlab/field.hpp"
#include "shlab/geometry.hpp"

namespace shlab {

struct SolverParams {
    // Floor for |grad u| in the drift direction; unset means
    // 1e-8 (r_max - r_min).
    std::optional<double> grad_floor;
    double picard_tol = 1e-11;
    int picard_max = 200;
    double linear_tol = 1e-10;  // relative residual of the inner Krylov solve
    int linear_max = 20000;
    double damping = 1.0;
};

void validate(const SolverParams& p);
double resolved_grad_floor(const SolverParams& p, const Grid& g);

using BoundaryValues = std::map<int, double>;

// One quadrature sample of a boundary component. Box edges and corners
// appear once per incident face, each with that face's normal.
struct NormalSample {
    std::size_t node = 0;
    int axis = 0;          // the face is {x^axis = const}
    int outward = 1;       // outer normal of the domain points along outward * e_axis
    double n_u = 0;        // derivative along the outer unit normal of the domain
    double d_upsilon = 0;  // derivative along the designated normal upsilon
    double area = 0;       // induced area carried by the sample
};

struct BoundaryNormalField {
    int component = 0;
    std::vector<NormalSample> samples;

    double min_upsilon() const;
    double max_upsilon() const;
    double min_n() const;
    double max_n() const;
    // Sample with the smallest d_upsilon.
    const NormalSample& argmin_upsilon() const;
};

struct SpacetimeHarmonicSolution {
    ScalarField u;
    BoundaryValues boundary_values;
    std::map<int, BoundaryNormalField> normal_derivatives;
    double residual_norm = 0;
    int picard_iters = 0;
    int linear_iters = 0;
    double grad_floor = 0;
    double damping = 1.0;  // final damping after automatic halving
};

// u attains the constants on boundary samples; excised interiors carry the
// constant of their box. Throws NoConvergence / LinearSolveFailure.
SpacetimeHarmonicSolution solve_dirichlet(const InitialDataSet& data, const BoundaryValues& values,
                                          const SolverParams& params,
                                          const ScalarField* initial_guess = nullptr);

// Delta u + (tr k) |grad u| on usable samples (zero on excised ones).
ScalarField residual(const InitialDataSet& data, const ScalarField& u);

// Hessian plus k |grad u|.
TensorField spacetime_hessian(const InitialDataSet& data, const ScalarField& u);

BoundaryNormalField boundary_normal_derivative(const InitialDataSet& data, const ScalarField& u, int component);
const BoundaryNormalField& boundary_normal_derivative(const SpacetimeHarmonicSolution& sol, int component);

// Sup of the residual over interior samples.
double interior_residual_norm(const InitialDataSet& data, const ScalarField& u);

}  // namespace shlab
