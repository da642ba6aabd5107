#pragma once

#include "shlab/energy.hpp"
#include "shlab/models.hpp"

namespace shlab {

struct BarrierParams {
    double rho0 = 5.0;  // matching radius of the upper barrier, in the asymptotic chart
    double rho1 = 5.0;  // matching radius of the lower barrier
    // Unset: the extreme values allowed by the construction rules.
    std::optional<double> lambda, varsigma;
    double bracket_tol = 1e-4;
    double min_sign_fraction = 0.999;
    bool strict = false;  // throw ResidualSignViolation instead of reporting
    FluxParams solve;
};

struct BarrierPair {
    ScalarField z_plus, z_minus;
    double lambda = 0, varsigma = 0, c0 = 0, c1 = 0;
    double r0 = 0, r1 = 0;      // coordinate radii of the matching tori
    double rho0 = 0, rho1 = 0;  // the same in the asymptotic chart
    // Exterior samples (interior nodes beyond the matching torus).
    long exterior_plus = 0, exterior_minus = 0;
    long violations_plus = 0, violations_minus = 0;
    double sign_fraction_plus = 1, sign_fraction_minus = 1;
    double worst_plus = 0, worst_r_plus = 0;    // largest residual of z+ and where
    double worst_minus = 0, worst_r_minus = 0;  // smallest residual of z- and where
    bool gluing_ok = false;
    // Bracketing of the truncated solution on exterior samples.
    double bracket_low = 0;   // min (u - z-)
    double bracket_high = 0;  // min (z+ - u)
    bool bracket_ok = false;
    bool residual_ok = false;
    ScalarField u;  // the truncated solution used for bracketing
};

// Upper barrier rho + (c0 - rho0 - lambda rho0^-2) + lambda rho^-2 outside the
// matching torus and c0 w+ inside; lower barrier analogously with c1 w-.
BarrierPair build_barriers(const InitialDataSet& data, const ModelSpec& model, const BarrierParams& params);

}  // namespace shlab
