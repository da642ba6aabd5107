#include "shlab/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <unordered_map>

#include "shlab/errors.hpp"
#include "shlab/marching.hpp"

namespace shlab {

namespace {

double grad_norm_at(const InitialDataSet& data, const Differentiator& D, const ScalarField& u, std::size_t n) {
    return gradient_norm(data.geometry().pt[n], D.jet(u.v.data(), n).d);
}

void check_range(const InitialDataSet& data, const ScalarField& u, double t) {
    const auto& topo = data.topology();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t n = 0; n < u.size(); ++n)
        if (topo.usable(n)) {
            lo = std::min(lo, u[n]);
            hi = std::max(hi, u[n]);
        }
    if (!(t > lo && t < hi)) throw DomainError("level " + std::to_string(t) + " outside the open range of u");
}

LevelSurface radial_level(const InitialDataSet& data, const ScalarField& u, double t, double eps) {
    const Grid& G = *data.grid;
    const Differentiator D(G, data.topology(), function_accuracy(G));
    int crossing = -1, count = 0;
    for (int i = 0; i + 1 < G.n_r; ++i) {
        const double a = u[i] - t, b = u[i + 1] - t;
        if ((a <= 0 && b > 0) || (a > 0 && b <= 0)) {
            crossing = i;
            ++count;
        }
    }
    if (count != 1) throw NearCriticalLevel("radial profile crosses the level " + std::to_string(count) + " times");
    const int i = crossing;
    for (int q : {i, i + 1})
        if (grad_norm_at(data, D, u, std::size_t(q)) < eps)
            throw NearCriticalLevel("|grad u| below the floor next to the level");
    // Cubic Lagrange interpolant through four nodes, root by bisection.
    const int i0 = std::clamp(i - 1, 0, G.n_r - 4);
    auto interp = [&](double x) {
        double s = 0;
        for (int q = 0; q < 4; ++q) {
            double w = 1;
            for (int p = 0; p < 4; ++p)
                if (p != q) w *= (x - (i0 + p)) / double(q - p);
            s += w * u[i0 + q];
        }
        return s - t;
    };
    double a = i, b = i + 1;
    double fa = interp(a);
    for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = interp(m);
        if ((fm > 0) == (fa > 0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    LevelSurface s;
    s.t = t;
    s.coordinate_torus = true;
    s.r_star = G.r_min + 0.5 * (a + b) * G.h_r();
    s.regular = true;
    return s;
}

}  // namespace

LevelSurface extract_level_set(const InitialDataSet& data, std::shared_ptr<const ScalarField> u, double t,
                               double eps) {
    check_range(data, *u, t);
    const Grid& G = *data.grid;
    if (!G.is3d()) {
        LevelSurface s = radial_level(data, *u, t, eps);
        s.source = u;
        return s;
    }
    const TriMesh mesh = march_tetrahedra(lattice_of(G), u->v, t);
    const Differentiator D(G, data.topology(), function_accuracy(G));
    std::unordered_map<std::size_t, double> seen;
    for (const auto& e : mesh.src)
        for (std::size_t n : {e.a, e.b}) {
            auto it = seen.find(n);
            if (it == seen.end()) it = seen.emplace(n, grad_norm_at(data, D, *u, n)).first;
            if (it->second < eps) throw NearCriticalLevel("|grad u| below the floor in a surface cell");
        }
    LevelSurface s;
    s.t = t;
    s.pieces = split_pieces(mesh);
    s.regular = true;
    s.source = u;
    return s;
}

std::vector<long> euler_characteristic(const LevelSurface& s) {
    if (s.coordinate_torus) return {0};
    return euler_characteristic(s.pieces);
}

EulerIntegral euler_integral(const InitialDataSet& data, std::shared_ptr<const ScalarField> u, int n_samples,
                             double eps) {
    if (n_samples < 16) throw InvalidSpec("euler_integral needs at least 16 samples");
    const auto& topo = data.topology();
    EulerIntegral E;
    E.t_min = std::numeric_limits<double>::infinity();
    E.t_max = -E.t_min;
    for (std::size_t n = 0; n < u->size(); ++n)
        if (topo.usable(n)) {
            E.t_min = std::min(E.t_min, (*u)[n]);
            E.t_max = std::max(E.t_max, (*u)[n]);
        }
    const double dt = (E.t_max - E.t_min) / n_samples;
    E.levels.resize(n_samples);
    E.chi.assign(n_samples, 0);
    E.skipped.assign(n_samples, false);
    std::vector<std::string> other_error(n_samples);
    data.geometry();
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n_samples; ++k) {
        const double t = E.t_min + (k + 0.5) * dt;
        E.levels[k] = t;
        try {
            long c = 0;
            for (long x : euler_characteristic(extract_level_set(data, u, t, eps))) c += x;
            E.chi[k] = c;
        } catch (const NearCriticalLevel&) {
            E.skipped[k] = true;
        } catch (const std::exception& ex) {
            other_error[k] = ex.what();
        }
    }
    for (const auto& msg : other_error)
        if (!msg.empty()) throw OpenMesh(msg);
    long skipped = 0;
    double sum = 0;
    for (int k = 0; k < n_samples; ++k) {
        if (E.skipped[k]) ++skipped;
        else sum += double(E.chi[k]);
    }
    E.skipped_measure = skipped * dt;
    if (skipped * 10 > n_samples)
        throw TooManySkipped(std::to_string(skipped) + " of " + std::to_string(n_samples) + " levels near-critical");
    E.value = 2 * std::numbers::pi * sum * dt;
    return E;
}

std::vector<double> node_weights(const Grid& G) {
    std::vector<double> w(G.size(), 0.0);
    if (!G.is3d()) {
        for (int i = 0; i < G.n_r; ++i)
            w[i] = G.h_r() * (i == 0 || i == G.n_r - 1 ? 0.5 : 1.0) * G.torus_area();
        return w;
    }
    // Each cell not inside an excision gives 1/8 of its volume to each corner.
    const double share = G.h_r() * G.h_xi() * G.h_theta() / 8.0;
    for (int i = 0; i + 1 < G.n_r; ++i)
        for (int j = 0; j < G.n_xi; ++j)
            for (int l = 0; l < G.n_theta; ++l) {
                bool excised = false;
                for (const auto& e : G.excisions)
                    if (i >= e.r_lo && i + 1 <= e.r_hi && j >= e.xi_lo && j + 1 <= e.xi_hi && l >= e.th_lo &&
                        l + 1 <= e.th_hi)
                        excised = true;
                if (excised) continue;
                for (int di = 0; di < 2; ++di)
                    for (int dj = 0; dj < 2; ++dj)
                        for (int dl = 0; dl < 2; ++dl)
                            w[G.index(i + di, G.wrap(1, j + dj), G.wrap(2, l + dl))] += share;
            }
    return w;
}

BulkIntegrals bulk_integrals(const InitialDataSet& data, const ScalarField& u, const ConstraintFields& cf,
                             double eps) {
    const Grid& G = *data.grid;
    const auto& C = data.geometry();
    const auto& topo = data.topology();
    const Differentiator D(G, topo, function_accuracy(G));
    const std::vector<double> w = node_weights(G);
    const std::size_t N = G.size();
    std::vector<double> hess(N, 0.0), energy(N, 0.0), vol(N, 0.0);
    std::vector<char> floored(N, 0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t q = 0; q < std::ptrdiff_t(N); ++q) {
        const std::size_t n = std::size_t(q);
        if (!topo.usable(n) || w[n] == 0.0) continue;
        const auto& pg = C.pt[n];
        const Jet j = D.jet(u.v.data(), n);
        const double gn = gradient_norm(pg, j.d);
        const Sym3 H = covariant_hessian(pg, j) + data.k[n] * gn;
        const double dV = w[n] * pg.sqrt_det;
        floored[n] = gn < eps;
        hess[n] = norm2(pg.ginv, H) / std::max(gn, eps) * dV;
        const Vec3 grad_up = contract(pg.ginv, j.d);
        energy[n] = (cf.mu[n] * gn + dot(cf.J[n], grad_up)) * dV;
        vol[n] = dV;
    }
    BulkIntegrals B;
    for (std::size_t n = 0; n < N; ++n) {
        B.hessian_term += hess[n];
        B.energy_term += energy[n];
        B.volume += vol[n];
        if (floored[n]) {
            B.hessian_floored += hess[n];
            ++B.floored_samples;
        }
    }
    return B;
}

}  // namespace shlab
