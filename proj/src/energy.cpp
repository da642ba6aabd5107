#include "shlab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shlab/errors.hpp"
#include "shlab/identity.hpp"
#include "shlab/levelset.hpp"
#include "shlab/surface.hpp"

namespace shlab {

double energy_from_mass_aspect(const AsymptoticTensors& asym, double, double) { return asym.mass_aspect; }

int nearest_radial_index(const Grid& g, double r) {
    const int i = int(std::lround((r - g.r_min) / g.h_r()));
    if (i < 0 || i >= g.n_r) throw DomainError("radius " + std::to_string(r) + " outside the grid");
    if (std::abs(g.r(i) - r) > 1e-9 * std::max(1.0, r))
        throw DomainError("radius " + std::to_string(r) + " is not a grid node");
    return i;
}

SpacetimeHarmonicSolution truncated_solve(const InitialDataSet& data, int i_max, const FluxParams& params,
                                          const ModelSpec* model, InitialDataSet* restricted) {
    const Grid& G = *data.grid;
    InitialDataSet sub = i_max == G.n_r - 1 ? data : restrict_radially(data, i_max);
    const double rmax = G.r(i_max);
    const double top = model ? truncation_value(*model, G.r_min, rmax) : rmax - G.r_min;
    SpacetimeHarmonicSolution sol;
    if (G.excisions.empty()) {
        sol = solve_dirichlet(sub, {{kInnerTorus, 0.0}, {kOuterTorus, top}}, params.tuner.solver);
    } else {
        TunerReport tr = tune_boundary_constants(sub, params.tuner);
        BoundaryValues v = anchored_values(sub, tr.fixed_point);
        for (auto& [id, x] : v) x *= top;
        ScalarField guess = tr.solution.u;
        for (auto& x : guess.v) x *= top;
        sol = solve_dirichlet(sub, v, params.tuner.solver, &guess);
    }
    if (restricted) *restricted = sub;
    return sol;
}

namespace {

// Least-squares fit of y = a + b / r.
std::pair<double, double> fit_inverse(const std::vector<double>& r, const std::vector<double>& y) {
    const std::size_t n = r.size();
    if (n == 1) return {y[0], 0.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 1.0 / r[i];
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {(sy - b * sx) / n, b};
}

}  // namespace

EnergyEstimate energy_from_flux(const InitialDataSet& data, const std::vector<double>& radii,
                                const FluxParams& params, const ModelSpec* model) {
    const Grid& G = *data.grid;
    if (radii.empty()) throw InvalidSpec("energy_from_flux needs at least one radius");
    for (std::size_t j = 1; j < radii.size(); ++j)
        if (!(radii[j] > radii[j - 1])) throw InvalidSpec("flux radii must be increasing");
    EnergyEstimate E;
    E.radii = radii;
    for (double r : radii) {
        const int i = nearest_radial_index(G, r);
        InitialDataSet sub;
        const auto sol = truncated_solve(data, i, params, model, &sub);
        const ComponentFlux f = component_flux(sub, sol, kOuterTorus);
        E.flux.push_back(-2.0 / G.torus_area() * f.flux);
    }
    const std::size_t k = std::min<std::size_t>(3, radii.size());
    const std::vector<double> rr(radii.end() - k, radii.end()), ff(E.flux.end() - k, E.flux.end());
    std::tie(E.E_flux, E.fit_b) = fit_inverse(rr, ff);
    if (model) {
        try {
            E.E_mass_aspect = energy_from_mass_aspect(analytic_asymptotics(*model), model->period_xi, model->period_theta);
        } catch (const NoExpansionKnown&) {
        }
    }
    return E;
}

double energy_lower_bound(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol,
                          const ConstraintFields& cf) {
    const BulkIntegrals B = bulk_integrals(data, sol.u, cf, sol.grad_floor);
    return (B.hessian_term + 2.0 * B.energy_term) / data.grid->torus_area();
}

PenroseResult penrose_bound(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol, double E,
                            double tolerance) {
    const Grid& G = *data.grid;
    PenroseResult P;
    for (std::size_t n = 0; n < data.g.size(); ++n) {
        const Sym3 s = data.k[n] + data.g[n];
        for (double c : s.c) P.k_plus_g = std::max(P.k_plus_g, std::abs(c));
    }
    const ComponentFlux inner = component_flux(data, sol, kInnerTorus);
    P.max_abs_H = inner.max_abs_H;
    P.area = inner.area;
    const double h = G.spacing();
    P.H_tolerance = 10 * h * h;
    if (P.k_plus_g > 1e-8) {
        P.reason = "k differs from -g";
        return P;
    }
    if (P.max_abs_H > P.H_tolerance) {
        P.reason = "boundary is not minimal (|H| = " + std::to_string(P.max_abs_H) + ")";
        return P;
    }
    P.applicable = true;
    P.C = 4.0 * boundary_normal_derivative(sol, kInnerTorus).min_upsilon();
    P.bound = P.C * P.area / G.torus_area();
    P.holds = E >= P.bound - tolerance;
    return P;
}

}  // namespace shlab
