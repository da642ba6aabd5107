#include "shlab/geometry.hpp"

#include <cmath>
#include <string>

#include "shlab/errors.hpp"

namespace shlab {

PointGeometry evaluate_point(const MetricJet& J) {
    PointGeometry P;
    double d;
    if (!try_inverse(J.g, P.ginv, d)) throw SingularMetric("metric inverse failed");
    P.sqrt_det = std::sqrt(d);
    const Sym3& gi = P.ginv;

    // d_m g^{kl}
    std::array<Sym3, 3> dgi{};
    for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 3; ++k)
            for (int l = k; l < 3; ++l) {
                double s = 0;
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b) s -= gi(k, a) * gi(l, b) * J.dg[m](a, b);
                dgi[m](k, l) = s;
            }

    // Christoffel symbols of the first kind, [ij, l] = 1/2 (d_i g_lj + d_j g_li - d_l g_ij)
    auto first_kind = [&](int i, int j, int l) {
        return 0.5 * (J.dg[i](l, j) + J.dg[j](l, i) - J.dg[l](i, j));
    };
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                double s = 0;
                for (int l = 0; l < 3; ++l) s += gi(k, l) * first_kind(i, j, l);
                P.gamma[k](i, j) = s;
            }

    // d_m Gamma^k_ij
    double dG[3][3][3][3];  // [m][k][i][j]
    for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    double s = 0;
                    for (int l = 0; l < 3; ++l) {
                        const double d2 = 0.5 * (J.ddg[m][i](l, j) + J.ddg[m][j](l, i) - J.ddg[m][l](i, j));
                        s += dgi[m](k, l) * first_kind(i, j, l) + gi(k, l) * d2;
                    }
                    dG[m][k][i][j] = s;
                }

    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) {
                s += dG[k][k][i][j] - dG[j][k][i][k];
                for (int l = 0; l < 3; ++l)
                    s += P.gamma[k](k, l) * P.gamma[l](i, j) - P.gamma[k](j, l) * P.gamma[l](i, k);
            }
            P.ricci(i, j) = s;
        }
    P.R = trace(gi, P.ricci);

    P.trk = trace(gi, J.k);
    P.k2 = norm2(gi, J.k);
    P.mu = 0.5 * (P.R + P.trk * P.trk - P.k2);

    // J_i = g^{jl} nabla_l k_ij - d_i tr k
    for (int i = 0; i < 3; ++i) {
        double div = 0;
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) {
                double cov = J.dk[l](i, j);
                for (int m = 0; m < 3; ++m) cov -= P.gamma[m](l, i) * J.k(m, j) + P.gamma[m](l, j) * J.k(i, m);
                div += gi(j, l) * cov;
            }
        const double dtr = trace(dgi[i], J.k) + trace(gi, J.dk[i]);
        P.J[i] = div - dtr;
    }
    double jn = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) jn += gi(a, b) * P.J[a] * P.J[b];
    P.J_norm = std::sqrt(std::max(jn, 0.0));
    return P;
}

MetricJet metric_jet(const InitialDataSet& data, const GeometryStencils& st, std::size_t n) {
    const Grid& G = *data.grid;
    int i, j, l;
    G.unpack(n, i, j, l);
    MetricJet J;
    J.g = data.g[n];
    J.k = data.k[n];
    const double* g0 = data.g.v.front().c.data();
    const double* k0 = data.k.v.front().c.data();
    const int dims = G.is3d() ? 3 : 1;
    for (int c = 0; c < 6; ++c) {
        for (int a = 0; a < dims; ++a) {
            J.dg[a].c[c] = st.d1(g0 + c, 6, i, j, l, a);
            J.dk[a].c[c] = st.d1(k0 + c, 6, i, j, l, a);
            J.ddg[a][a].c[c] = st.d2(g0 + c, 6, i, j, l, a);
        }
        if (dims == 3)
            for (int a = 0; a < 3; ++a)
                for (int b = a + 1; b < 3; ++b) {
                    const double m = 0.5 * (st.mixed(g0 + c, 6, i, j, l, a, b) + st.mixed(g0 + c, 6, i, j, l, b, a));
                    J.ddg[a][b].c[c] = m;
                    J.ddg[b][a].c[c] = m;
                }
    }
    return J;
}

GeometryCache build_geometry_cache(const InitialDataSet& data) {
    const Grid& G = *data.grid;
    G.validate();
    const std::size_t N = G.size();
    GeometryStencils st(G, kGeometryAccuracy);
    GeometryCache C;
    C.pt.resize(N);
    std::vector<std::string> failures(1);
    bool failed = false;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < std::ptrdiff_t(N); ++n) {
        try {
            C.pt[n] = evaluate_point(metric_jet(data, st, std::size_t(n)));
        } catch (const SingularMetric&) {
#pragma omp critical
            failed = true;
        }
    }
    if (failed) throw SingularMetric("metric inverse failed on at least one sample");

    // sqrt(det g) g^{ij}, stored row-wise (9 entries, symmetric)
    std::vector<double> P(N * 9);
    for (std::size_t n = 0; n < N; ++n)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) P[n * 9 + a * 3 + b] = C.pt[n].sqrt_det * C.pt[n].ginv(a, b);
    C.div_coef.resize(N);
    const int dims = G.is3d() ? 3 : 1;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < std::ptrdiff_t(N); ++n) {
        int i, j, l;
        G.unpack(std::size_t(n), i, j, l);
        Vec3 b{};
        for (int col = 0; col < 3; ++col) {
            double s = 0;
            for (int a = 0; a < dims; ++a) s += st.d1(P.data() + a * 3 + col, 9, i, j, l, a);
            b[col] = s / C.pt[n].sqrt_det;
        }
        C.div_coef[n] = b;
    }
    return C;
}

ScalarField scalar_curvature(const InitialDataSet& data) {
    if (data.grid->n_r < 8) throw GridTooCoarse("n_r < 8");
    const auto& C = data.geometry();
    ScalarField R(data.grid);
    for (std::size_t n = 0; n < R.size(); ++n) R[n] = C.pt[n].R;
    return R;
}

ConstraintFields compute_constraints(const InitialDataSet& data) {
    const auto& C = data.geometry();
    ConstraintFields F{ScalarField(data.grid), CovectorField(data.grid), ScalarField(data.grid),
                       ScalarField(data.grid)};
    for (std::size_t n = 0; n < F.mu.size(); ++n) {
        F.mu[n] = C.pt[n].mu;
        F.J[n] = C.pt[n].J;
        F.J_norm[n] = C.pt[n].J_norm;
        F.dec_margin[n] = C.pt[n].mu - C.pt[n].J_norm;
    }
    return F;
}

int function_accuracy(const Grid& g) { return g.is3d() ? 2 : 4; }

Sym3 covariant_hessian(const PointGeometry& pg, const Jet& j) {
    Sym3 h = j.dd;
    for (int c = 0; c < 3; ++c)
        if (j.d[c] != 0.0) h -= pg.gamma[c] * j.d[c];
    return h;
}

double gradient_norm(const PointGeometry& pg, const Vec3& du) {
    return std::sqrt(std::max(apply(pg.ginv, du, du), 0.0));
}

ScalarField laplace_beltrami(const InitialDataSet& data, const ScalarField& u) {
    const auto& C = data.geometry();
    const auto& topo = data.topology();
    Differentiator D(*data.grid, topo, function_accuracy(*data.grid));
    ScalarField out(data.grid);
    const std::size_t N = u.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t n = 0; n < std::ptrdiff_t(N); ++n) {
        if (!topo.usable(std::size_t(n))) continue;
        const Jet j = D.jet(u.v.data(), std::size_t(n));
        out[n] = trace(C.pt[n].ginv, j.dd) + dot(C.div_coef[n], j.d);
    }
    return out;
}

}  // namespace shlab
