#include <doctest.h>

#include <cmath>
#include <memory>

#include "shlab/errors.hpp"
#include "shlab/levelset.hpp"
#include "shlab/marching.hpp"
#include "shlab/models.hpp"
#include "shlab/solver.hpp"

using namespace shlab;

namespace {

template <class F>
std::vector<double> sample(const Lattice& L, F f) {
    std::vector<double> v(L.size());
    for (int i = 0; i < L.n[0]; ++i)
        for (int j = 0; j < L.n[1]; ++j)
            for (int l = 0; l < L.n[2]; ++l)
                v[L.index(i, j, l)] = f(L.origin[0] + i * L.spacing[0], L.origin[1] + j * L.spacing[1],
                                        L.origin[2] + l * L.spacing[2]);
    return v;
}

Lattice box_lattice(Vec3 lo, Vec3 hi, std::array<int, 3> n) {
    Lattice L;
    L.n = n;
    L.origin = lo;
    for (int a = 0; a < 3; ++a) L.spacing[a] = (hi[a] - lo[a]) / (n[a] - 1);
    return L;
}

double ring(double x, double y, double z, double cx, double R, double a) {
    const double q = std::hypot(x - cx, y) - R;
    return q * q + z * z - a * a;
}

}  // namespace

TEST_CASE("sphere has Euler characteristic 2") {
    auto L = box_lattice({-1.3, -1.3, -1.3}, {1.3, 1.3, 1.3}, {27, 27, 27});
    auto f = sample(L, [](double x, double y, double z) { return x * x + y * y + z * z; });
    auto pieces = split_pieces(march_tetrahedra(L, f, 1.0));
    REQUIRE(pieces.size() == 1);
    CHECK(pieces[0].closed);
    CHECK(euler_characteristic(pieces) == std::vector<long>{2});
}

TEST_CASE("embedded torus has Euler characteristic 0") {
    auto L = box_lattice({-1.6, -1.6, -0.6}, {1.6, 1.6, 0.6}, {41, 41, 17});
    auto f = sample(L, [](double x, double y, double z) { return ring(x, y, z, 0, 1.0, 0.35); });
    auto mesh = march_tetrahedra(L, f, 0.0);
    CHECK(euler_characteristic(mesh) == 0);
}

TEST_CASE("two fused rings form a genus-2 surface") {
    auto L = box_lattice({-2.5, -1.5, -0.6}, {2.5, 1.5, 0.6}, {81, 49, 21});
    auto f = sample(L, [](double x, double y, double z) {
        return std::min(ring(x, y, z, -1.0, 1.0, 0.3), ring(x, y, z, 1.0, 1.0, 0.3));
    });
    auto pieces = split_pieces(march_tetrahedra(L, f, 0.0));
    REQUIRE(pieces.size() == 1);
    CHECK(euler_characteristic(pieces) == std::vector<long>{-2});
}

TEST_CASE("periodic lattice level set of a radial coordinate is a torus") {
    Lattice L;
    L.n = {10, 8, 8};
    L.periodic = {false, true, true};
    L.spacing = {0.1, 0.125, 0.125};
    auto f = sample(L, [](double x, double, double) { return x; });
    auto pieces = split_pieces(march_tetrahedra(L, f, 0.43));
    REQUIRE(pieces.size() == 1);
    CHECK(euler_characteristic(pieces) == std::vector<long>{0});
}

TEST_CASE("open meshes are rejected") {
    TriMesh m;
    m.pos = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.tri = {{0, 1, 2}};
    auto pieces = split_pieces(m);
    CHECK_FALSE(pieces.at(0).closed);
    CHECK_THROWS_AS(euler_characteristic(pieces), OpenMesh);
}

TEST_CASE("radial level sets are coordinate tori") {
    auto data = build_model(ModelSpec{}, Grid::radial(1.0, 10.0, 181));
    auto u = std::make_shared<ScalarField>(data.grid);
    for (int i = 0; i < 181; ++i) (*u)[i] = data.grid->r(i) - 1;
    auto s = extract_level_set(data, u, 2.5, 1e-8);
    CHECK(s.coordinate_torus);
    CHECK(s.r_star == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(euler_characteristic(s) == std::vector<long>{0});
    CHECK_THROWS_AS(extract_level_set(data, u, 9.0, 1e-8), DomainError);
    CHECK_THROWS_AS(extract_level_set(data, u, -0.5, 1e-8), DomainError);

    auto e = euler_integral(data, u, 32, 1e-8);
    CHECK(e.value == 0.0);
    CHECK(e.levels.size() == 32);
    CHECK(e.skipped_measure == 0.0);
    CHECK_THROWS_AS(euler_integral(data, u, 8, 1e-8), InvalidSpec);
}

TEST_CASE("3D level sets of the Kottler solution are tori") {
    auto data = build_model(ModelSpec{}, Grid::torus(1.0, 2.0, 12, 8, 8));
    auto u = std::make_shared<ScalarField>(data.grid);
    for (std::size_t n = 0; n < u->size(); ++n) {
        int i, j, l;
        data.grid->unpack(n, i, j, l);
        (*u)[n] = data.grid->r(i) - 1;
    }
    auto s = extract_level_set(data, u, 0.37, 1e-8);
    REQUIRE(s.pieces.size() == 1);
    CHECK(euler_characteristic(s) == std::vector<long>{0});
    // Induced area of {r = 1.37} is r^2 |T^2|.
    auto geo = surface_geometry(data, s, NormalOrientation::TowardInfinity);
    CHECK(geo.area == doctest::Approx(1.37 * 1.37).epsilon(1e-3));
    CHECK(euler_integral(data, u, 16, 1e-8).value == 0.0);
}

TEST_CASE("bulk volume quadrature") {
    // sqrt(det g) = r for the Kottler metric, so the volume of [1, 3] x T^2 is 4.
    auto data = build_model(ModelSpec{}, Grid::radial(1.0, 3.0, 401));
    ScalarField u(data.grid);
    for (int i = 0; i < 401; ++i) u[i] = data.grid->r(i) - 1;
    auto cf = compute_constraints(data);
    auto b = bulk_integrals(data, u, cf, 1e-8);
    CHECK(b.volume == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(std::abs(b.hessian_term) < 1e-10);
    CHECK(b.floored_samples == 0);
}
