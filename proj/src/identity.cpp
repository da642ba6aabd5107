#include "shlab/identity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "shlab/surface.hpp"

namespace shlab {

ComponentFlux component_flux(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol, int id) {
    const auto& field = boundary_normal_derivative(sol, id);
    const auto& C = data.geometry();
    const ComponentKind kind = data.component(id).kind;
    ComponentFlux F;
    F.id = id;
    for (const auto& s : field.samples) {
        // Direction of upsilon along the face axis.
        int sign = 1;
        if (id >= kFirstBox) sign = kind == ComponentKind::InnerMinus ? -s.outward : s.outward;
        const SurfacePoint p = coordinate_surface_point(C.pt[s.node], data.g[s.node], data.k[s.node], s.axis, sign);
        const double theta = p.H + p.tr_k;
        F.flux += theta * std::abs(s.n_u) * s.area;
        F.area += s.area;
        F.max_abs_theta_plus = std::max(F.max_abs_theta_plus, std::abs(theta));
        F.max_abs_H = std::max(F.max_abs_H, std::abs(p.H));
    }
    return F;
}

VerificationReport verify_identity(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol,
                                   const ConstraintFields& cf, int n_levels, double tolerance) {
    VerificationReport R;
    R.tolerance = tolerance;
    R.bulk = bulk_integrals(data, sol.u, cf, sol.grad_floor);
    R.euler = euler_integral(data, std::make_shared<const ScalarField>(sol.u), n_levels, sol.grad_floor);
    for (int c = 0; c < data.grid->component_count(); ++c) {
        const ComponentFlux f = component_flux(data, sol, c);
        R.flux[c] = f;
        if (c == kOuterTorus) R.outer_flux = f.flux;
        else if (data.component(c).kind == ComponentKind::InnerMinus) R.minus_flux_sum += f.flux;
        else R.plus_flux_sum += f.flux;
    }
    R.lhs = 0.5 * R.bulk.hessian_term + R.bulk.energy_term + R.plus_flux_sum - R.minus_flux_sum;
    R.rhs = R.euler.value - R.outer_flux;
    R.margin = R.rhs - R.lhs;
    R.holds = R.margin >= -tolerance;
    return R;
}

}  // namespace shlab
