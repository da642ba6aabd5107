#include "shlab/refine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "shlab/errors.hpp"
#include "shlab/levelset.hpp"
#include "shlab/solver.hpp"

namespace shlab {

namespace {

bool has_closed_solution(const ModelSpec& m) { return m.kind == ModelKind::Kottler || m.kind == ModelKind::PpWave; }

double closed_solution(const ModelSpec& m, double r) { return m.kind == ModelKind::PpWave ? ppwave_u(r, m.r0).u : r; }

double closed_derivative(const ModelSpec& m, double r) {
    return m.kind == ModelKind::PpWave ? 1.0 / std::sqrt(1.0 - std::pow(r, -3)) : 1.0;
}

void push_rows(std::vector<RefinementRow>& out, const char* study, const std::vector<double>& h,
               const std::vector<double>& err) {
    for (std::size_t i = 0; i < h.size(); ++i) {
        double order = std::numeric_limits<double>::quiet_NaN();
        if (i > 0 && err[i] > 0 && err[i - 1] > 0) order = std::log(err[i - 1] / err[i]) / std::log(h[i - 1] / h[i]);
        out.push_back({study, h[i], err[i], order});
    }
}

}  // namespace

Grid refine_grid(const Grid& g) {
    Grid f = g;
    f.n_r = 2 * (g.n_r - 1) + 1;
    if (g.is3d()) {
        f.n_xi = 2 * g.n_xi;
        f.n_theta = 2 * g.n_theta;
    }
    return f;
}

std::vector<RefinementRow> refinement_study(const ModelSpec& model, const Grid& base, int refinements) {
    if (!is_radial(model)) throw InvalidSpec("refinement study needs a radial model");
    if (!base.excisions.empty()) throw InvalidSpec("refinement study does not support excisions");
    if (refinements < 1) throw InvalidSpec("refinements must be positive");

    // Reference for the bulk quadrature: |T^2| int u'(r) sqrt(g^rr) sqrt(det g) dr.
    auto integrand = [&](double r) {
        const PointGeometry pg = evaluate_point(analytic_jet(model, r));
        const double du = has_closed_solution(model) ? closed_derivative(model, r) : 1.0;
        return std::sqrt(pg.ginv(0, 0)) * std::abs(du) * pg.sqrt_det;
    };
    const double reference = base.torus_area() * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                                     integrand, base.r_min, base.r_max, 12, 1e-13);

    std::vector<double> h, e_R, e_res, e_bulk;
    Grid g = base;
    for (int level = 0; level <= refinements; ++level, g = refine_grid(g)) {
        const InitialDataSet data = build_model(model, g);
        const auto& topo = data.topology();
        const ScalarField R = scalar_curvature(data);
        ScalarField u(data.grid);
        for (std::size_t n = 0; n < g.size(); ++n) {
            int i, j, l;
            g.unpack(n, i, j, l);
            u[n] = has_closed_solution(model) ? closed_solution(model, g.r(i)) : g.r(i);
        }
        const ScalarField res = residual(data, u);
        double eR = 0, eres = 0;
        for (std::size_t n = 0; n < g.size(); ++n) {
            if (!topo.usable(n)) continue;
            int i, j, l;
            g.unpack(n, i, j, l);
            eR = std::max(eR, std::abs(R[n] - evaluate_point(analytic_jet(model, g.r(i))).R));
            if (topo.kind[n] == NodeKind::Interior) eres = std::max(eres, std::abs(res[n]));
        }
        ConstraintFields unit;
        unit.mu = ScalarField(data.grid, 1.0);
        unit.J = CovectorField(data.grid);
        const BulkIntegrals B = bulk_integrals(data, u, unit, resolved_grad_floor(SolverParams{}, g));
        h.push_back(g.spacing());
        e_R.push_back(eR);
        e_res.push_back(eres);
        e_bulk.push_back(std::abs(B.energy_term - reference));
    }
    std::vector<RefinementRow> rows;
    push_rows(rows, "scalar_curvature", h, e_R);
    if (has_closed_solution(model)) push_rows(rows, "residual", h, e_res);
    push_rows(rows, "bulk_quadrature", h, e_bulk);
    return rows;
}

}  // namespace shlab
