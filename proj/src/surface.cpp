#include "shlab/surface.hpp"

#include <cmath>
#include <map>

#include "shlab/errors.hpp"

namespace shlab {

SurfacePoint coordinate_surface_point(const PointGeometry& pg, const Sym3& g, const Sym3& k, int axis,
                                      int sign) {
    SurfacePoint S;
    const int b = (axis + 1) % 3, c = (axis + 2) % 3;
    const double gbb = g(b, b), gbc = g(b, c), gcc = g(c, c);
    const double dg = gbb * gcc - gbc * gbc;
    if (!(dg > 0)) throw DegenerateSurface("induced metric singular on coordinate surface");
    const double ibb = gcc / dg, ibc = -gbc / dg, icc = gbb / dg;
    const double nrm = std::sqrt(pg.ginv(axis, axis));
    const double IIbb = -sign * pg.gamma[axis](b, b) / nrm;
    const double IIbc = -sign * pg.gamma[axis](b, c) / nrm;
    const double IIcc = -sign * pg.gamma[axis](c, c) / nrm;
    S.II(b, b) = IIbb;
    S.II(b, c) = IIbc;
    S.II(c, c) = IIcc;
    S.k_t(b, b) = k(b, b);
    S.k_t(b, c) = k(b, c);
    S.k_t(c, c) = k(c, c);
    S.H = ibb * IIbb + 2 * ibc * IIbc + icc * IIcc;
    S.tr_k = ibb * k(b, b) + 2 * ibc * k(b, c) + icc * k(c, c);
    auto norm2d = [&](double xbb, double xbc, double xcc) {
        // |X|^2 = gamma^{ij} gamma^{kl} X_ik X_jl for a 2x2 symmetric X
        const double a00 = ibb * xbb + ibc * xbc, a01 = ibb * xbc + ibc * xcc;
        const double a10 = ibc * xbb + icc * xbc, a11 = ibc * xbc + icc * xcc;
        return a00 * a00 + a01 * a10 + a10 * a01 + a11 * a11;
    };
    S.chi_plus_norm = std::sqrt(std::max(0.0, norm2d(IIbb + k(b, b), IIbc + k(b, c), IIcc + k(c, c))));
    S.chi_minus_norm = std::sqrt(std::max(0.0, norm2d(IIbb - k(b, b), IIbc - k(b, c), IIcc - k(c, c))));
    S.area_density = std::sqrt(dg);
    return S;
}

namespace {

// P^a_i T_ab P^b_j with P^a_i = delta^a_i - nu^a nu_i
Sym3 project(const Sym3& T, const Vec3& nu_up, const Vec3& nu_dn) {
    const Vec3 Tn = contract(T, nu_up);
    const double Tnn = dot(Tn, nu_up);
    Sym3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            out(i, j) = T(i, j) - nu_dn[i] * Tn[j] - nu_dn[j] * Tn[i] + nu_dn[i] * nu_dn[j] * Tnn;
    return out;
}

}  // namespace

SurfacePoint level_set_point(const PointGeometry& pg, const Sym3& k, const Jet& uj, int sign) {
    SurfacePoint S;
    const double gn = gradient_norm(pg, uj.d);
    if (!(gn > 0)) throw DegenerateSurface("level set through a critical point");
    Vec3 nu_dn{}, nu_up{};
    for (int a = 0; a < 3; ++a) nu_dn[a] = sign * uj.d[a] / gn;
    nu_up = contract(pg.ginv, nu_dn);
    const Sym3 hess = covariant_hessian(pg, uj);
    S.II = project(hess, nu_up, nu_dn) * (sign / gn);
    S.k_t = project(k, nu_up, nu_dn);
    S.H = trace(pg.ginv, S.II);
    S.tr_k = trace(pg.ginv, S.k_t);
    S.chi_plus_norm = std::sqrt(std::max(0.0, norm2(pg.ginv, S.II + S.k_t)));
    S.chi_minus_norm = std::sqrt(std::max(0.0, norm2(pg.ginv, S.II - S.k_t)));
    return S;
}

double triangle_area(const Grid* grid, const Sym3& g, const Vec3& p0, const Vec3& p1, const Vec3& p2) {
    auto diff = [&](const Vec3& a, const Vec3& b) {
        Vec3 d{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        if (grid && grid->is3d()) {
            const double P[3] = {0, grid->period_xi, grid->period_theta};
            for (int ax = 1; ax < 3; ++ax) d[ax] -= P[ax] * std::round(d[ax] / P[ax]);
        }
        return d;
    };
    const Vec3 e1 = diff(p0, p1), e2 = diff(p0, p2);
    const double a = apply(g, e1, e1), b = apply(g, e1, e2), c = apply(g, e2, e2);
    const double gram = a * c - b * b;
    if (!(gram >= -1e-14 * (a * c + 1e-300)) || !std::isfinite(gram))
        throw DegenerateSurface("induced metric singular on a facet");
    return 0.5 * std::sqrt(std::max(gram, 0.0));
}

namespace {

template <class T>
T lerp(const T& a, const T& b, double s) {
    return a * (1 - s) + b * s;
}

SurfacePoint mix(const SurfacePoint& a, const SurfacePoint& b, double s) {
    SurfacePoint o;
    o.H = lerp(a.H, b.H, s);
    o.tr_k = lerp(a.tr_k, b.tr_k, s);
    o.II = lerp(a.II, b.II, s);
    o.k_t = lerp(a.k_t, b.k_t, s);
    o.chi_plus_norm = lerp(a.chi_plus_norm, b.chi_plus_norm, s);
    o.chi_minus_norm = lerp(a.chi_minus_norm, b.chi_minus_norm, s);
    o.area_density = lerp(a.area_density, b.area_density, s);
    return o;
}

void push(SurfaceGeometry& G, const SurfacePoint& p, double dA) {
    G.H.push_back(p.H);
    G.tr_k.push_back(p.tr_k);
    G.theta_plus.push_back(p.H + p.tr_k);
    G.theta_minus.push_back(p.H - p.tr_k);
    G.II.push_back(p.II);
    G.chi_plus.push_back(p.II + p.k_t);
    G.chi_minus.push_back(p.II - p.k_t);
    G.chi_plus_norm.push_back(p.chi_plus_norm);
    G.chi_minus_norm.push_back(p.chi_minus_norm);
    G.dA.push_back(dA);
    G.area += dA;
}

}  // namespace

SurfaceGeometry surface_geometry(const InitialDataSet& data, const LevelSurface& surf,
                                 NormalOrientation orientation) {
    const Grid& G = *data.grid;
    const auto& C = data.geometry();
    const int sign = orientation == NormalOrientation::Inner ? -1 : 1;
    SurfaceGeometry out;

    if (surf.coordinate_torus) {
        // Cubic Lagrange interpolation of node values to r_star.
        const double x = (surf.r_star - G.r_min) / G.h_r();
        int i0 = int(std::floor(x)) - 1;
        i0 = std::max(0, std::min(i0, G.n_r - 4));
        SurfacePoint acc;
        for (int q = 0; q < 4; ++q) {
            double w = 1;
            for (int p = 0; p < 4; ++p)
                if (p != q) w *= (x - (i0 + p)) / double(q - p);
            const std::size_t n = G.index(i0 + q, 0, 0);
            const SurfacePoint sp = coordinate_surface_point(C.pt[n], data.g[n], data.k[n], 0, sign);
            acc.H += w * sp.H;
            acc.tr_k += w * sp.tr_k;
            acc.II += sp.II * w;
            acc.k_t += sp.k_t * w;
            acc.chi_plus_norm += w * sp.chi_plus_norm;
            acc.chi_minus_norm += w * sp.chi_minus_norm;
            acc.area_density += w * sp.area_density;
        }
        push(out, acc, acc.area_density * G.torus_area());
        return out;
    }

    if (!surf.source) throw DegenerateSurface("triangulated level set without a source field");
    const auto& topo = data.topology();
    Differentiator D(G, topo, function_accuracy(G));
    const double* u = surf.source->v.data();
    std::map<std::size_t, SurfacePoint> node_cache;
    auto at_node = [&](std::size_t n) -> const SurfacePoint& {
        auto it = node_cache.find(n);
        if (it != node_cache.end()) return it->second;
        const Jet j = D.jet(u, n);
        return node_cache.emplace(n, level_set_point(C.pt[n], data.k[n], j, sign)).first->second;
    };
    for (const auto& piece : surf.pieces) {
        const auto& M = piece.mesh;
        std::vector<double> vA(M.pos.size(), 0.0);
        for (const auto& t : M.tri) {
            Sym3 gm;
            for (int q = 0; q < 3; ++q) {
                const auto& e = M.src[t[q]];
                gm += lerp(data.g[e.a], data.g[e.b], e.s) * (1.0 / 3.0);
            }
            const double a = triangle_area(&G, gm, M.pos[t[0]], M.pos[t[1]], M.pos[t[2]]);
            for (int q = 0; q < 3; ++q) vA[t[q]] += a / 3.0;
        }
        for (std::size_t v = 0; v < M.pos.size(); ++v) {
            const auto& e = M.src[v];
            push(out, mix(at_node(e.a), at_node(e.b), e.s), vA[v]);
        }
    }
    return out;
}

}  // namespace shlab
