#include "shlab/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "shlab/errors.hpp"

namespace shlab {

namespace {

struct NodeExtras {
    double chi_plus = 0, K = 0, x_grad = 0, dec = 0, grad = 0;
};

// Tangential projection P T P with P_a^b = delta_a^b - nu_a nu^b.
Sym3 project(const Sym3& T, const Vec3& nu_lo, const Vec3& nu_up) {
    const Vec3 Tn = contract(T, nu_up);
    const double Tnn = dot(Tn, nu_up);
    Sym3 out;
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b)
            out(a, b) = T(a, b) - nu_lo[a] * Tn[b] - nu_lo[b] * Tn[a] + nu_lo[a] * nu_lo[b] * Tnn;
    return out;
}

NodeExtras extras(const PointGeometry& pg, const Sym3& k, const Jet& j, double mu, const Vec3& J) {
    NodeExtras e;
    e.grad = gradient_norm(pg, j.d);
    if (!(e.grad > 0)) return e;
    const Vec3 up = contract(pg.ginv, j.d);
    Vec3 nu_lo, nu_up;
    for (int a = 0; a < 3; ++a) {
        nu_lo[a] = j.d[a] / e.grad;
        nu_up[a] = up[a] / e.grad;
    }
    const Sym3 hess = covariant_hessian(pg, j);
    Sym3 II = project(hess, nu_lo, nu_up);
    II *= 1.0 / e.grad;
    const double H = trace(pg.ginv, II);
    e.K = 0.5 * (pg.R - 2.0 * apply(pg.ricci, nu_up, nu_up) + H * H - norm2(pg.ginv, II));
    e.chi_plus = std::sqrt(std::max(0.0, norm2(pg.ginv, II + project(k, nu_lo, nu_up))));
    // X + grad log f = P(spacetime Hessian(nu, .)) / |grad u|.
    const Sym3 sh = hess + k * e.grad;
    Vec3 W = contract(sh, nu_up);
    const double Wn = dot(W, nu_up);
    for (int a = 0; a < 3; ++a) W[a] = (W[a] - Wn * nu_lo[a]) / e.grad;
    e.x_grad = std::sqrt(std::max(0.0, dot(W, contract(pg.ginv, W))));
    e.dec = mu + dot(J, nu_up);
    return e;
}

NodeExtras blend(const NodeExtras& a, const NodeExtras& b, double s) {
    auto l = [s](double x, double y) { return (1 - s) * x + s * y; };
    return {l(a.chi_plus, b.chi_plus), l(a.K, b.K), l(a.x_grad, b.x_grad), l(a.dec, b.dec), l(a.grad, b.grad)};
}

}  // namespace

RigidityReport rigidity_diagnostics(const InitialDataSet& data, const SpacetimeHarmonicSolution& sol,
                                    const ConstraintFields& cf, int n_levels, double tolerance) {
    if (n_levels < 1) throw InvalidSpec("n_levels must be positive");
    const Grid& G = *data.grid;
    const auto& C = data.geometry();
    const auto& topo = data.topology();
    const Differentiator D(G, topo, function_accuracy(G));
    const std::size_t N = G.size();
    std::vector<NodeExtras> node(N);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t q = 0; q < std::ptrdiff_t(N); ++q) {
        const std::size_t n = std::size_t(q);
        if (!topo.usable(n)) continue;
        node[n] = extras(C.pt[n], data.k[n], D.jet(sol.u.v.data(), n), cf.mu[n], cf.J[n]);
    }
    const double eps = sol.grad_floor;
    auto require = [&](std::size_t n) {
        if (node[n].grad <= eps)
            throw FoliationBroken("|grad u| = " + std::to_string(node[n].grad) + " at node " + std::to_string(n));
    };

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t n = 0; n < N; ++n)
        if (topo.usable(n)) {
            lo = std::min(lo, sol.u[n]);
            hi = std::max(hi, sol.u[n]);
        }
    auto u = std::make_shared<const ScalarField>(sol.u);

    RigidityReport R;
    R.tolerance = tolerance;
    for (int m = 0; m < n_levels; ++m) {
        LevelRigidity L;
        L.t = lo + (hi - lo) * (m + 0.5) / n_levels;
        LevelSurface S;
        try {
            S = extract_level_set(data, u, L.t, eps);
        } catch (const NearCriticalLevel&) {
            ++R.skipped_levels;
            continue;
        }
        const SurfaceGeometry sg = surface_geometry(data, S, NormalOrientation::TowardInfinity);
        std::vector<NodeExtras> samples;
        if (S.coordinate_torus) {
            const double x = (S.r_star - G.r_min) / G.h_r();
            const int i0 = std::clamp(int(std::floor(x)) - 1, 0, G.n_r - 4);
            NodeExtras acc;
            for (int q = 0; q < 4; ++q) {
                double w = 1;
                for (int p = 0; p < 4; ++p)
                    if (p != q) w *= (x - (i0 + p)) / double(q - p);
                const std::size_t n = G.index(i0 + q, 0, 0);
                require(n);
                acc.chi_plus += w * node[n].chi_plus;
                acc.K += w * node[n].K;
                acc.x_grad += w * node[n].x_grad;
                acc.dec += w * node[n].dec;
            }
            samples.push_back(acc);
        } else {
            for (const auto& piece : S.pieces)
                for (const auto& e : piece.mesh.src) {
                    require(e.a);
                    require(e.b);
                    samples.push_back(blend(node[e.a], node[e.b], e.s));
                }
        }
        for (long c : euler_characteristic(S)) L.chi += c;
        for (std::size_t s = 0; s < samples.size(); ++s) {
            L.chi_plus_norm = std::max(L.chi_plus_norm, std::abs(samples[s].chi_plus));
            L.gauss = std::max(L.gauss, std::abs(samples[s].K));
            L.x_gradient = std::max(L.x_gradient, std::abs(samples[s].x_grad));
            L.dec = std::max(L.dec, std::abs(samples[s].dec));
            L.x_gradient_l2 += samples[s].x_grad * samples[s].x_grad * sg.dA[s];
        }
        L.area = sg.area;
        L.gauss_bonnet = 2.0 * std::numbers::pi * double(L.chi) - L.x_gradient_l2;
        L.balance_checked = L.chi_plus_norm <= tolerance && L.dec <= tolerance;
        L.balance_ok = !L.balance_checked || std::abs(L.gauss_bonnet) <= tolerance * std::max(1.0, L.area);
        R.balance_ok = R.balance_ok && L.balance_ok;
        R.chi_plus_norm = std::max(R.chi_plus_norm, L.chi_plus_norm);
        R.gauss_flatness = std::max(R.gauss_flatness, L.gauss);
        R.x_gradient_match = std::max(R.x_gradient_match, L.x_gradient);
        R.dec_saturation = std::max(R.dec_saturation, L.dec);
        R.levels.push_back(L);
    }
    if (R.levels.empty()) throw TooManySkipped("every sampled level was near-critical");
    return R;
}

}  // namespace shlab
