#include <doctest.h>

#include <cmath>

#include "shlab/errors.hpp"
#include "shlab/geometry.hpp"
#include "shlab/models.hpp"
#include "shlab/surface.hpp"

using namespace shlab;

namespace {

double max_abs_interior(const Grid& g, const ScalarField& f, double offset, int skip = 3) {
    double m = 0;
    for (std::size_t n = 0; n < f.size(); ++n) {
        int i, j, l;
        g.unpack(n, i, j, l);
        if (i < skip || i >= g.n_r - skip) continue;
        m = std::max(m, std::abs(f[n] - offset));
    }
    return m;
}

}  // namespace

TEST_CASE("grid validation rejects malformed grids") {
    CHECK_THROWS_AS(Grid::radial(0.5, 2.0, 64).validate(), InvalidGrid);
    CHECK_THROWS_AS(Grid::radial(2.0, 2.0, 64).validate(), InvalidGrid);
    CHECK_THROWS_AS(Grid::radial(1.0, 2.0, 4).validate(), GridTooCoarse);
    CHECK_THROWS_AS(Grid::torus(1.0, 2.0, 16, 4, 16).validate(), GridTooCoarse);

    Grid g = Grid::torus(1.0, 2.0, 16, 8, 8);
    g.excisions.push_back({0, 3, 2, 4, 2, 4});  // touches the inner torus
    CHECK_THROWS_AS(g.validate(), InvalidGrid);

    Grid ok = Grid::torus(1.0, 2.0, 16, 8, 8);
    ok.excisions.push_back({5, 8, 2, 4, 2, 4});
    ok.excisions.push_back({6, 9, 3, 5, 3, 5});  // overlaps the first
    CHECK_THROWS_AS(ok.validate(), InvalidGrid);
}

TEST_CASE("grid index round trip and spacing") {
    Grid g = Grid::torus(1.0, 3.0, 17, 8, 12, 2.0, 3.0);
    for (std::size_t n : {std::size_t(0), std::size_t(77), g.size() - 1}) {
        int i, j, l;
        g.unpack(n, i, j, l);
        CHECK(g.index(i, j, l) == n);
    }
    CHECK(g.h_r() == doctest::Approx(0.125));
    CHECK(g.h_xi() == doctest::Approx(0.25));
    CHECK(g.h_theta() == doctest::Approx(0.25));
    CHECK(g.wrap(1, -1) == 7);
    CHECK(g.wrap(2, 12) == 0);
}

TEST_CASE("Kottler slice is hyperbolic space: R = -6 and vacuum constraints") {
    // Constant sectional curvature -1 in dimension 3; with k = -g,
    // mu = (R + (tr k)^2 - |k|^2)/2 = (-6 + 9 - 3)/2 = 0. Sampled derivatives
    // are fourth order, so the errors must drop by ~16 per halving of h.
    ModelSpec s;
    double eR[2], emu[2], eJ[2];
    int k = 0;
    for (int n : {101, 201}) {
        auto data = build_model(s, Grid::radial(1.0, 5.0, n));
        auto cf = compute_constraints(data);
        eR[k] = max_abs_interior(*data.grid, scalar_curvature(data), -6.0, 0);
        emu[k] = max_abs_interior(*data.grid, cf.mu, 0.0, 0);
        eJ[k] = max_abs_interior(*data.grid, cf.J_norm, 0.0, 0);
        ++k;
    }
    CHECK(eR[1] < 1e-4);
    CHECK(eR[0] / eR[1] > 12);
    CHECK(emu[1] < 1e-4);
    CHECK(emu[0] / emu[1] > 12);
    CHECK(eJ[1] < 1e-4);
}

TEST_CASE("Kottler constraints on the 3D backend") {
    ModelSpec s;
    double e[2];
    int k = 0;
    for (int n : {24, 47}) {
        auto data = build_model(s, Grid::torus(1.0, 2.0, n, 8, 8));
        auto cf = compute_constraints(data);
        e[k++] = std::max(max_abs_interior(*data.grid, cf.mu, 0.0, 0), max_abs_interior(*data.grid, cf.J_norm, 0.0, 0));
    }
    CHECK(e[1] < 1e-4);
    CHECK(e[0] / e[1] > 12);
}

TEST_CASE("pp-wave scalar curvature matches the vacuum Hamiltonian constraint") {
    // With mu = 0 the constraint gives R = |k|^2 - (tr k)^2. Both sides use the
    // displayed diagonal components, evaluated here by hand.
    ModelSpec s;
    s.kind = ModelKind::PpWave;
    s.r0 = 1.5;
    for (double r : {1.6, 2.0, 4.0, 10.0}) {
        const double A = 1 - std::pow(r, -3);
        const double g[3] = {1 / (r * r * A), r * r * A, r * r};
        const double k[3] = {-1 / (r * r * std::sqrt(A)), -r * r * std::sqrt(A) * (1 + 0.5 * std::pow(r, -3)),
                             -r * r * std::sqrt(A)};
        double trk = 0, k2 = 0;
        for (int a = 0; a < 3; ++a) {
            trk += k[a] / g[a];
            k2 += (k[a] / g[a]) * (k[a] / g[a]);
        }
        const auto pg = evaluate_point(analytic_jet(s, r));
        CHECK(pg.R == doctest::Approx(k2 - trk * trk).epsilon(1e-10));
        CHECK(std::abs(pg.mu) < 1e-10);
        CHECK(pg.J_norm < 1e-10);
    }
}

TEST_CASE("finite-difference curvature converges to the closed form") {
    ModelSpec s;
    s.kind = ModelKind::PpWave;
    s.r0 = 1.5;
    double err[2];
    int k = 0;
    for (int n : {101, 201}) {
        auto data = build_model(s, Grid::radial(1.5, 4.0, n));
        auto R = scalar_curvature(data);
        double e = 0;
        for (int i = 0; i < n; ++i) e = std::max(e, std::abs(R[i] - evaluate_point(analytic_jet(s, data.grid->r(i))).R));
        err[k++] = e;
    }
    CHECK(err[1] < err[0] / 8);  // at least third order
}

TEST_CASE("coordinate tori of the Kottler slice are weakly untrapped MOTS") {
    // For g = r^-2 dr^2 + r^2 ghat and unit normal r d_r: H = 2 and tr k|_T = -2.
    ModelSpec s;
    for (double r : {1.0, 3.0, 7.5}) {
        const auto jet = analytic_jet(s, r);
        const auto pg = evaluate_point(jet);
        const auto sp = coordinate_surface_point(pg, jet.g, jet.k, 0, +1);
        CHECK(sp.H == doctest::Approx(2.0));
        CHECK(sp.tr_k == doctest::Approx(-2.0));
        CHECK(sp.chi_plus_norm < 1e-12);
        CHECK(sp.area_density == doctest::Approx(r * r));
        const auto in = coordinate_surface_point(pg, jet.g, jet.k, 0, -1);
        CHECK(in.H == doctest::Approx(-2.0));
    }
}

TEST_CASE("triangle area under a constant metric") {
    const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{0, 1, 0};
    CHECK(triangle_area(nullptr, Sym3::identity(), a, b, c) == doctest::Approx(0.5));
    // Scaling the first axis by 3 (g_00 = 9) triples the area.
    CHECK(triangle_area(nullptr, Sym3::diag(9, 1, 1), a, b, c) == doctest::Approx(1.5));
}

TEST_CASE("degenerate metric is rejected") {
    MetricJet jet;
    jet.g = Sym3::diag(1, 0, 1);
    CHECK_THROWS_AS(evaluate_point(jet), SingularMetric);
}
