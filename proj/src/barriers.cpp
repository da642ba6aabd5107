#include "shlab/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shlab/errors.hpp"

namespace shlab {

namespace {

int matching_index(const Grid& G, const ModelSpec& model, double rho) {
    for (int i = 0; i < G.n_r; ++i)
        if (asymptotic_radius(model, G.r(i)) >= rho) {
            if (i < 8 || i > G.n_r - 8) break;
            return i;
        }
    throw InvalidSpec("matching radius " + std::to_string(rho) + " does not leave room on the grid");
}

// Boundary values of the auxiliary solves: `on` on the matching torus and
// on every box, 0 on the inner torus (or -1 / 0 for the lower barrier).
SpacetimeHarmonicSolution auxiliary(const InitialDataSet& sub, double torus, double boxes, const SolverParams& sp) {
    BoundaryValues v{{kInnerTorus, 0.0}, {kOuterTorus, torus}};
    for (int c = kFirstBox; c < sub.grid->component_count(); ++c) v[c] = boxes;
    return solve_dirichlet(sub, v, sp);
}

}  // namespace

BarrierPair build_barriers(const InitialDataSet& data, const ModelSpec& model, const BarrierParams& params) {
    const Grid& G = *data.grid;
    const AsymptoticTensors A = analytic_asymptotics(model);
    BarrierPair B;
    B.lambda = params.lambda.value_or((-1.0 + 1.5 * A.tr_m - A.tr_p) / 6.0);
    B.varsigma = params.varsigma.value_or((1.0 + 1.5 * A.tr_m - A.tr_p) / 6.0);

    const int i0 = matching_index(G, model, params.rho0);
    const int i1 = matching_index(G, model, params.rho1);
    B.r0 = G.r(i0);
    B.r1 = G.r(i1);
    B.rho0 = asymptotic_radius(model, B.r0);
    B.rho1 = asymptotic_radius(model, B.r1);

    // The truncated solution to be bracketed.
    const auto sol = truncated_solve(data, G.n_r - 1, params.solve, &model);
    B.u = sol.u;
    const double u_top = truncation_value(model, G.r_min, G.r_max);
    const double rho_max = asymptotic_radius(model, G.r_max);
    const auto& C = data.geometry();

    // Upper barrier: auxiliary w+ on M_{r0}, c0 from the gluing inequality
    // and from z+ >= u on the truncation torus.
    const InitialDataSet sub0 = restrict_radially(data, i0);
    const auto wp = auxiliary(sub0, 1.0, 1.0, params.solve.tuner.solver);
    double c0 = u_top - (rho_max - B.rho0 - B.lambda * std::pow(B.rho0, -2) + B.lambda * std::pow(rho_max, -2));
    for (const auto& s : wp.normal_derivatives.at(kOuterTorus).samples) {
        const double n_ext = std::sqrt(C.pt[s.node].ginv(0, 0)) * asymptotic_radius_derivative(model, B.r0) *
                             (1.0 - 2.0 * B.lambda * std::pow(B.rho0, -3));
        if (!(s.n_u > 0)) throw ResidualSignViolation("auxiliary w+ has non-positive normal derivative at the matching torus");
        c0 = std::max(c0, n_ext / s.n_u);
    }
    B.c0 = c0 * (1 + 1e-6) + 1e-12;
    B.gluing_ok = true;

    // Lower barrier: w- = -1 on T_{r1}, 0 on the inner torus and boxes; any
    // c1 > 0 glues (the inner normal derivative is negative), so c1 only
    // has to keep z- below u on the truncation torus.
    const InitialDataSet sub1 = restrict_radially(data, i1);
    const auto wm = auxiliary(sub1, -1.0, 0.0, params.solve.tuner.solver);
    for (const auto& s : wm.normal_derivatives.at(kOuterTorus).samples)
        if (!(s.n_u < 0)) B.gluing_ok = false;
    double c1 = rho_max - B.rho1 - B.varsigma * std::pow(B.rho1, -2) + B.varsigma * std::pow(rho_max, -2) - u_top;
    B.c1 = std::max(c1, 0.0) * (1 + 1e-6) + 1e-12;

    B.z_plus = ScalarField(data.grid);
    B.z_minus = ScalarField(data.grid);
    for (std::size_t n = 0; n < G.size(); ++n) {
        int i, j, l;
        G.unpack(n, i, j, l);
        const double rho = asymptotic_radius(model, G.r(i));
        B.z_plus[n] = i <= i0 ? B.c0 * wp.u[sub0.grid->index(i, j, l)]
                              : rho + (B.c0 - B.rho0 - B.lambda * std::pow(B.rho0, -2)) + B.lambda * std::pow(rho, -2);
        B.z_minus[n] = i <= i1 ? B.c1 * wm.u[sub1.grid->index(i, j, l)]
                               : rho - (B.c1 + B.rho1 + B.varsigma * std::pow(B.rho1, -2)) + B.varsigma * std::pow(rho, -2);
    }

    // Residual signs of the exterior formulas, evaluated on the exterior
    // formula extended over the whole grid so stencils never cross the kink.
    ScalarField ext_p(data.grid), ext_m(data.grid);
    for (std::size_t n = 0; n < G.size(); ++n) {
        int i, j, l;
        G.unpack(n, i, j, l);
        const double rho = asymptotic_radius(model, G.r(i));
        ext_p[n] = rho + B.lambda * std::pow(rho, -2);
        ext_m[n] = rho + B.varsigma * std::pow(rho, -2);
    }
    const ScalarField res_p = residual(data, ext_p), res_m = residual(data, ext_m);
    const auto& topo = data.topology();
    B.worst_plus = -std::numeric_limits<double>::infinity();
    B.worst_minus = std::numeric_limits<double>::infinity();
    B.bracket_low = B.bracket_high = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < G.size(); ++n) {
        if (topo.kind[n] != NodeKind::Interior) continue;
        int i, j, l;
        G.unpack(n, i, j, l);
        if (i > i0) {
            ++B.exterior_plus;
            if (res_p[n] > 0) ++B.violations_plus;
            if (res_p[n] > B.worst_plus) {
                B.worst_plus = res_p[n];
                B.worst_r_plus = G.r(i);
            }
            B.bracket_high = std::min(B.bracket_high, B.z_plus[n] - sol.u[n]);
        }
        if (i > i1) {
            ++B.exterior_minus;
            if (res_m[n] < 0) ++B.violations_minus;
            if (res_m[n] < B.worst_minus) {
                B.worst_minus = res_m[n];
                B.worst_r_minus = G.r(i);
            }
            B.bracket_low = std::min(B.bracket_low, sol.u[n] - B.z_minus[n]);
        }
    }
    if (B.exterior_plus == 0 || B.exterior_minus == 0) throw InvalidSpec("no exterior samples beyond the matching tori");
    B.sign_fraction_plus = 1.0 - double(B.violations_plus) / B.exterior_plus;
    B.sign_fraction_minus = 1.0 - double(B.violations_minus) / B.exterior_minus;
    B.residual_ok = B.sign_fraction_plus >= params.min_sign_fraction && B.sign_fraction_minus >= params.min_sign_fraction;
    B.bracket_ok = B.bracket_low >= -params.bracket_tol && B.bracket_high >= -params.bracket_tol;
    if (params.strict && !B.residual_ok) {
        const bool plus = B.sign_fraction_plus < params.min_sign_fraction;
        throw ResidualSignViolation(std::string(plus ? "z+" : "z-") + " residual has the wrong sign; worst " +
                                    std::to_string(plus ? B.worst_plus : B.worst_minus) + " at r = " +
                                    std::to_string(plus ? B.worst_r_plus : B.worst_r_minus));
    }
    return B;
}

}  // namespace shlab
