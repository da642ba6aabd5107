#include "shlab/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shlab/errors.hpp"

namespace shlab {

double resolved_phi_tol(const TunerParams& p, const Grid& g) { return p.phi_tol ? *p.phi_tol : g.spacing(); }

BoundaryValues anchored_values(const InitialDataSet& data, const BoundaryVector& a) {
    const int nt = data.grid->component_count() - kFirstBox;
    if (int(a.size()) != nt)
        throw InvalidSpec("boundary vector has " + std::to_string(a.size()) + " entries, expected " +
                          std::to_string(nt));
    BoundaryValues v{{kInnerTorus, 0.0}, {kOuterTorus, 1.0}};
    for (int b = 0; b < nt; ++b) v[kFirstBox + b] = a[b];
    return v;
}

std::map<int, BoundaryNormalField> phi_map(const InitialDataSet& data, const BoundaryVector& a,
                                           const SolverParams& params, const ScalarField* guess) {
    auto sol = solve_dirichlet(data, anchored_values(data, a), params, guess);
    std::map<int, BoundaryNormalField> out;
    for (int c = kFirstBox; c < data.grid->component_count(); ++c) out[c] = sol.normal_derivatives.at(c);
    return out;
}

double extremal_phi(const InitialDataSet& data, int component, const BoundaryNormalField& f) {
    return data.component(component).kind == ComponentKind::InnerMinus ? f.max_n() : f.min_n();
}

namespace {

struct Eval {
    double phi;
    ScalarField u;
};

Eval evaluate(const InitialDataSet& data, std::size_t index, BoundaryVector a, double c, const SolverParams& sp,
              const ScalarField* guess) {
    a[index] = c;
    const int comp = kFirstBox + int(index);
    auto sol = solve_dirichlet(data, anchored_values(data, a), sp, guess);
    return {extremal_phi(data, comp, sol.normal_derivatives.at(comp)), std::move(sol.u)};
}

}  // namespace

OptimalValue optimal_value(const InitialDataSet& data, std::size_t index, const BoundaryVector& a,
                           const TunerParams& params, const ScalarField* guess) {
    if (index >= a.size()) throw UnknownComponent("tunable index out of range");
    const double tol = resolved_phi_tol(params, *data.grid);
    OptimalValue out;
    double lo = 0.0, hi = 1.0;
    Eval elo = evaluate(data, index, a, lo, params.solver, guess);
    Eval ehi = evaluate(data, index, a, hi, params.solver, &elo.u);
    out.steps = 2;
    if (elo.phi > 0 || ehi.phi < 0 || (elo.phi == 0 && ehi.phi == 0))
        throw NoBracket("extremal normal derivative has one sign on [0, 1] (" + std::to_string(elo.phi) + ", " +
                        std::to_string(ehi.phi) + ")");
    double flo = elo.phi, fhi = ehi.phi;
    int side = 0;  // which end moved last: +1 low, -1 high
    ScalarField warm = ehi.u;
    auto finish = [&](double c, double phi, ScalarField u) {
        out.value = c;
        out.phi = phi;
        out.bracket = hi - lo;
        out.u = std::move(u);
        return out;
    };
    if (std::abs(flo) <= tol && std::abs(flo) <= std::abs(fhi)) return finish(lo, flo, std::move(elo.u));
    if (std::abs(fhi) <= tol) return finish(hi, fhi, std::move(ehi.u));
    for (int step = 0; step < params.max_root_steps; ++step) {
        double c = 0.5 * (lo + hi);
        if (params.method == RootMethod::Illinois) {
            c = (lo * fhi - hi * flo) / (fhi - flo);
            // Guard against collapse onto an endpoint.
            const double w = hi - lo;
            c = std::clamp(c, lo + 1e-3 * w, hi - 1e-3 * w);
        }
        Eval e = evaluate(data, index, a, c, params.solver, &warm);
        ++out.steps;
        warm = e.u;
        if (std::abs(e.phi) <= tol || hi - lo <= params.value_tol) {
            if (e.phi < 0) lo = c;
            else hi = c;
            return finish(c, e.phi, std::move(e.u));
        }
        // Illinois: halve the stale end's value when the same end moves twice.
        if (e.phi < 0) {
            lo = c;
            flo = e.phi;
            if (side == 1) fhi *= 0.5;
            side = 1;
        } else {
            hi = c;
            fhi = e.phi;
            if (side == -1) flo *= 0.5;
            side = -1;
        }
        if (hi - lo <= params.value_tol) {
            Eval f = evaluate(data, index, a, 0.5 * (lo + hi), params.solver, &warm);
            ++out.steps;
            return finish(0.5 * (lo + hi), f.phi, std::move(f.u));
        }
    }
    throw NoConvergence("root finding for the optimal boundary value did not converge");
}

TunerReport tune_boundary_constants(const InitialDataSet& data, const TunerParams& params,
                                    std::optional<BoundaryVector> start) {
    validate(params.solver);
    const int nt = data.grid->component_count() - kFirstBox;
    TunerReport rep;
    rep.phi_tol = resolved_phi_tol(params, *data.grid);
    BoundaryVector a = start ? *start : BoundaryVector(nt, 1.0);
    if (int(a.size()) != nt) throw InvalidSpec("start vector has the wrong length");
    rep.iterates.push_back(a);
    rep.bisection_counts.assign(nt, 0);
    if (nt == 0) {
        rep.solution = solve_dirichlet(data, anchored_values(data, a), params.solver);
        rep.converged = true;
        return rep;
    }
    std::vector<ScalarField> warm(nt);
    for (int it = 0; it < params.outer_max; ++it) {
        BoundaryVector next(nt);
        for (int i = 0; i < nt; ++i) {
            OptimalValue ov = optimal_value(data, std::size_t(i), a, params, warm[i].size() ? &warm[i] : nullptr);
            rep.bisection_counts[i] += ov.steps;
            next[i] = ov.value;
            warm[i] = std::move(ov.u);
        }
        for (int i = 0; i < nt; ++i)
            if (next[i] > a[i] + params.outer_tol)
                throw MonotonicityViolation("component " + std::to_string(kFirstBox + i) + " rose from " +
                                            std::to_string(a[i]) + " to " + std::to_string(next[i]));
        double change = 0;
        for (int i = 0; i < nt; ++i) change = std::max(change, std::abs(next[i] - a[i]));
        a = next;
        rep.iterates.push_back(a);
        if (change < params.outer_tol) {
            rep.converged = true;
            break;
        }
    }
    if (!rep.converged) throw NoConvergence("boundary tuner did not reach a fixed point");
    rep.fixed_point = a;
    rep.solution = solve_dirichlet(data, anchored_values(data, a), params.solver, &warm[0]);
    for (int i = 0; i < nt; ++i) {
        const int c = kFirstBox + i;
        const auto& f = rep.solution.normal_derivatives.at(c);
        rep.min_normal_derivatives[c] = f.min_upsilon();
        rep.extremal_n[c] = extremal_phi(data, c, f);
    }
    return rep;
}

}  // namespace shlab
