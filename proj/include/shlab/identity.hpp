#pragma once

#include <map>

#include "shlab/levelset.hpp"
#include "shlab/solver.hpp"

namespace shlab {

// Integral of theta_+ |grad u| over one boundary component, with theta_+
// taken with respect to the designated normal upsilon (toward infinity on
// both tori, the outer normal on OuterPlus boxes, the inner one on
// InnerMinus boxes).
struct ComponentFlux {
    int id = 0;
    double flux = 0;
    double area = 0;
    double max_abs_theta_plus = 0;
    double max_abs_H = 0;
};

ComponentFlux component_flux(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol, int id);

struct VerificationReport {
    BulkIntegrals bulk;
    EulerIntegral euler;
    std::map<int, ComponentFlux> flux;
    double plus_flux_sum = 0;   // OuterPlus boxes
    double minus_flux_sum = 0;  // inner torus and InnerMinus boxes
    double outer_flux = 0;      // outer truncation torus
    double lhs = 0;             // 1/2 hessian + energy + plus sum - minus sum
    double rhs = 0;             // 2 pi int chi dt - outer flux
    double margin = 0;          // rhs - lhs
    double tolerance = 0;
    bool holds = false;         // margin >= -tolerance
};

VerificationReport verify_identity(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol,
                                   const ConstraintFields& cf, int n_levels, double tolerance);

}  // namespace shlab
