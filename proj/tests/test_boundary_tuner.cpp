#include <doctest.h>

#include <cmath>

#include "shlab/errors.hpp"
#include "shlab/models.hpp"
#include "shlab/tuner.hpp"

using namespace shlab;

namespace {

InitialDataSet box_model(ComponentKind kind = ComponentKind::OuterPlus) {
    ModelSpec s;
    s.period_xi = s.period_theta = 0.5;
    Grid g = Grid::torus(1.0, 1.5, 16, 8, 8, 0.5, 0.5);
    g.excisions.push_back(box_from_coords(g, 1.2, 1.3, 0.19, 0.31, 0.19, 0.31, kind));
    return build_model(s, g);
}

}  // namespace

TEST_CASE("anchored values and vector length") {
    auto data = box_model();
    auto v = anchored_values(data, {0.3});
    CHECK(v.at(kInnerTorus) == 0.0);
    CHECK(v.at(kOuterTorus) == 1.0);
    CHECK(v.at(kFirstBox) == 0.3);
    CHECK_THROWS_AS(anchored_values(data, {0.3, 0.4}), InvalidSpec);
    TunerParams p;
    CHECK(resolved_phi_tol(p, *data.grid) == doctest::Approx(data.grid->spacing()));
}

TEST_CASE("extremal normal derivative increases with the box constant") {
    auto data = box_model();
    double prev = -1e300;
    for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        auto phi = phi_map(data, {c}, SolverParams{});
        const double e = extremal_phi(data, kFirstBox, phi.at(kFirstBox));
        CHECK(e > prev);
        prev = e;
    }
}

TEST_CASE("optimal value is a root of the extremal derivative") {
    auto data = box_model();
    for (auto method : {RootMethod::Bisection, RootMethod::Illinois}) {
        TunerParams p;
        p.method = method;
        p.phi_tol = 1e-6;
        auto ov = optimal_value(data, 0, {1.0}, p);
        CHECK(ov.value > 0.0);
        CHECK(ov.value < 1.0);
        // Re-solve independently at the returned constant.
        auto phi = phi_map(data, {ov.value}, SolverParams{});
        CHECK(std::abs(extremal_phi(data, kFirstBox, phi.at(kFirstBox))) <= 1e-6 * 1.01);
    }
    TunerParams p;
    CHECK_THROWS_AS(optimal_value(data, 3, {1.0}, p), UnknownComponent);
}

TEST_CASE("fixed point iteration from the all-ones vector") {
    auto data = box_model();
    TunerParams p;
    auto rep = tune_boundary_constants(data, p);
    REQUIRE(rep.converged);
    REQUIRE(rep.iterates.size() >= 2);
    CHECK(rep.iterates.front()[0] == 1.0);
    for (std::size_t j = 1; j < rep.iterates.size(); ++j)
        CHECK(rep.iterates[j][0] <= rep.iterates[j - 1][0] + p.outer_tol);
    CHECK(std::abs(rep.extremal_n.at(kFirstBox)) <= rep.phi_tol);
    // Restart from a vector above the fixed point.
    const double a = rep.fixed_point[0];
    auto again = tune_boundary_constants(data, p, BoundaryVector{0.5 * (a + 1)});
    CHECK(std::abs(again.fixed_point[0] - a) <= 10 * p.outer_tol);
    CHECK_THROWS_AS(tune_boundary_constants(data, p, BoundaryVector{1.0, 1.0}), InvalidSpec);
}

TEST_CASE("inner-minus boxes use the maximum of the normal derivative") {
    auto data = box_model(ComponentKind::InnerMinus);
    BoundaryNormalField f;
    f.samples = {NormalSample{0, 0, 1, -2.0, 0, 1}, NormalSample{1, 0, 1, 3.0, 0, 1}};
    CHECK(extremal_phi(data, kFirstBox, f) == 3.0);
    auto plus = box_model();
    CHECK(extremal_phi(plus, kFirstBox, f) == -2.0);
}
