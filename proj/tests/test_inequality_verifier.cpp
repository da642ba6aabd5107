#include <doctest.h>

#include <cmath>

#include "shlab/barriers.hpp"
#include "shlab/energy.hpp"
#include "shlab/errors.hpp"
#include "shlab/identity.hpp"
#include "shlab/models.hpp"
#include "shlab/rigidity.hpp"

using namespace shlab;

namespace {

ModelSpec ppwave() {
    ModelSpec s;
    s.kind = ModelKind::PpWave;
    s.r0 = 1.5;
    return s;
}

SpacetimeHarmonicSolution anchored(const InitialDataSet& data, const ModelSpec& s) {
    const Grid& g = *data.grid;
    return solve_dirichlet(data, {{kInnerTorus, 0.0}, {kOuterTorus, truncation_value(s, g.r_min, g.r_max)}},
                           SolverParams{});
}

double rigidity_max(const RigidityReport& r) {
    return std::max({r.chi_plus_norm, r.gauss_flatness, r.x_gradient_match, r.dec_saturation});
}

}  // namespace

TEST_CASE("energy from the mass aspect") {
    CHECK(energy_from_mass_aspect(analytic_asymptotics(ModelSpec{}), 1, 1) == 0.0);
    CHECK(energy_from_mass_aspect(analytic_asymptotics(ppwave()), 1, 1) == 0.0);
    ModelSpec neck;
    neck.kind = ModelKind::WarpedProduct;
    neck.warp = WarpProfile::MinimalNeck;
    // g_ab = r^2 (1 + r^-3)^{4/3} ghat = r^2 ghat + (4/3) r^-1 ghat + ...: m = (4/3) ghat, tr m = 8/3.
    CHECK(energy_from_mass_aspect(analytic_asymptotics(neck), 1, 1) == doctest::Approx(8.0));
}

TEST_CASE("Kottler identity terms vanish") {
    ModelSpec s;
    auto data = build_model(s, Grid::radial(1.0, 3.0, 801));
    auto sol = anchored(data, s);
    auto rep = verify_identity(data, sol, compute_constraints(data), 32, 1e-5);
    CHECK(std::abs(rep.bulk.hessian_term) < 1e-6);
    CHECK(std::abs(rep.bulk.energy_term) < 1e-6);
    CHECK(std::abs(rep.minus_flux_sum) < 1e-6);
    CHECK(std::abs(rep.outer_flux) < 1e-6);
    CHECK(rep.euler.value == 0.0);
    CHECK(std::abs(rep.margin) < 1e-5);
    CHECK(rep.holds);
}

TEST_CASE("lower bound with a constant energy density") {
    // u = r - 1 on Kottler has |grad u| = r and sqrt(det g) = r; with mu = c
    // and J = 0 the bound is 2 c int_1^R r^2 dr = 2 c (R^3 - 1) / 3.
    ModelSpec s;
    const double R = 3.0, c = 0.25;
    auto data = build_model(s, Grid::radial(1.0, R, 801));
    auto sol = anchored(data, s);
    auto cf = compute_constraints(data);
    for (std::size_t n = 0; n < cf.mu.size(); ++n) {
        cf.mu[n] = c;
        cf.J[n] = Vec3{};
        cf.J_norm[n] = 0;
        cf.dec_margin[n] = c;
    }
    CHECK(energy_lower_bound(data, sol, cf) == doctest::Approx(2 * c * (R * R * R - 1) / 3).epsilon(1e-5));
}

TEST_CASE("Penrose bound applicability") {
    ModelSpec ko;
    auto kd = build_model(ko, Grid::radial(1.0, 5.0, 401));
    auto kp = penrose_bound(kd, anchored(kd, ko), 0.0, 1e-6);
    CHECK_FALSE(kp.applicable);
    CHECK(kp.max_abs_H == doctest::Approx(2.0).epsilon(1e-6));

    auto pd = build_model(ppwave(), Grid::radial(1.5, 5.0, 351));
    auto pp = penrose_bound(pd, anchored(pd, ppwave()), 0.0, 1e-6);
    CHECK_FALSE(pp.applicable);
    CHECK(pp.reason == "k differs from -g");

    ModelSpec neck;
    neck.kind = ModelKind::WarpedProduct;
    neck.warp = WarpProfile::MinimalNeck;
    auto nd = build_model(neck, Grid::radial(1.0, 20.0, 1901));
    auto np = penrose_bound(nd, anchored(nd, neck), 8.0, 1e-3);
    CHECK(np.applicable);
    CHECK(np.C > 0);
    // Inner torus area: f(0)^2 |T^2| = 2^{4/3}.
    CHECK(np.area == doctest::Approx(std::pow(2.0, 4.0 / 3)).epsilon(1e-6));
    CHECK(np.holds);
}

TEST_CASE("flux energy on Kottler") {
    ModelSpec s;
    auto data = build_model(s, Grid::radial(1.0, 20.0, 191));
    auto e = energy_from_flux(data, {5.0, 10.0, 20.0}, FluxParams{}, &s);
    CHECK(e.flux.size() == 3);
    CHECK(std::abs(e.E_flux) < 1e-3);
    CHECK_THROWS_AS(nearest_radial_index(*data.grid, 5.05), DomainError);
    CHECK_THROWS_AS(nearest_radial_index(*data.grid, 25.0), DomainError);
    CHECK_THROWS_AS(energy_from_flux(data, {10.0, 5.0}, FluxParams{}, &s), InvalidSpec);
}

TEST_CASE("barrier construction on Kottler") {
    ModelSpec s;
    auto data = build_model(s, Grid::radial(1.0, 20.0, 1901));
    auto B = build_barriers(data, s, BarrierParams{});
    // Zero traces give lambda = -1/6 and varsigma = 1/6.
    CHECK(B.lambda == doctest::Approx(-1.0 / 6));
    CHECK(B.varsigma == doctest::Approx(1.0 / 6));
    CHECK(B.sign_fraction_plus >= 0.999);
    CHECK(B.sign_fraction_minus >= 0.999);
    CHECK(B.bracket_low >= -1e-4);
    CHECK(B.bracket_high >= -1e-4);
    CHECK(B.gluing_ok);
    CHECK(B.r0 >= 5.0);
}

TEST_CASE("rigidity diagnostics separate equality from strict inequality") {
    ModelSpec s;
    auto kd = build_model(s, Grid::radial(1.0, 3.0, 401));
    const double h = kd.grid->spacing();
    auto kr = rigidity_diagnostics(kd, anchored(kd, s), compute_constraints(kd), 32, 1e-3);
    CHECK(rigidity_max(kr) <= 10 * h * h);
    CHECK(kr.balance_ok);

    ModelSpec pk;
    pk.kind = ModelKind::PerturbedKottler;
    pk.perturbation = Perturbation{0.1, 3.0, {{0, 0}}};
    auto pd = build_model(pk, Grid::radial(1.0, 3.0, 401));
    auto pr = rigidity_diagnostics(pd, anchored(pd, pk), compute_constraints(pd), 32, 1e-3);
    CHECK(rigidity_max(pr) > 1e3 * h * h);
}
