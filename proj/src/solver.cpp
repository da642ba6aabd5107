#include "shlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "shlab/errors.hpp"
#include "shlab/kernels.hpp"
#include "shlab/krylov.hpp"

namespace shlab {

void validate(const SolverParams& p) {
    if (p.grad_floor && !(*p.grad_floor > 0)) throw InvalidSpec("solver.grad_floor must be > 0");
    if (!(p.picard_tol > 0)) throw InvalidSpec("solver.picard_tol must be > 0");
    if (p.picard_max < 1) throw InvalidSpec("solver.picard_max must be >= 1");
    if (!(p.linear_tol > 0)) throw InvalidSpec("solver.linear_tol must be > 0");
    if (p.linear_max < 1) throw InvalidSpec("solver.linear_max must be >= 1");
    if (!(p.damping > 0 && p.damping <= 1)) throw InvalidSpec("solver.damping must lie in (0, 1]");
}

double resolved_grad_floor(const SolverParams& p, const Grid& g) {
    return p.grad_floor ? *p.grad_floor : 1e-8 * (g.r_max - g.r_min);
}

double BoundaryNormalField::min_upsilon() const { return argmin_upsilon().d_upsilon; }

double BoundaryNormalField::max_upsilon() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) m = std::max(m, s.d_upsilon);
    return m;
}

double BoundaryNormalField::min_n() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) m = std::min(m, s.n_u);
    return m;
}

double BoundaryNormalField::max_n() const {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& s : samples) m = std::max(m, s.n_u);
    return m;
}

const NormalSample& BoundaryNormalField::argmin_upsilon() const {
    if (samples.empty()) throw UnknownComponent("boundary component has no samples");
    const NormalSample* best = &samples.front();
    for (const auto& s : samples)
        if (s.d_upsilon < best->d_upsilon) best = &s;
    return *best;
}

namespace {

// Floored magnitude used by the drift linearization.
struct Drift {
    Vec3 grad_up{};  // g^{ij} d_j u
    double norm = 0;
};

Drift drift(const PointGeometry& pg, const Vec3& du) {
    Drift d;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) d.grad_up[a] += pg.ginv(a, b) * du[b];
    d.norm = std::sqrt(std::max(dot(d.grad_up, du), 0.0));
    return d;
}

void check_values(const InitialDataSet& data, const BoundaryValues& values) {
    const int nc = data.grid->component_count();
    for (const auto& [id, v] : values) {
        if (id < 0 || id >= nc) throw UnknownComponent("boundary value given for unknown component " + std::to_string(id));
        if (!std::isfinite(v)) throw InvalidSpec("boundary value for component " + std::to_string(id) + " is not finite");
    }
    for (int id = 0; id < nc; ++id)
        if (!values.count(id)) throw InvalidSpec("no boundary value for component " + std::to_string(id));
}

// Imposes the Dirichlet constants; excised interiors take their box constant.
void impose(const InitialDataSet& data, const BoundaryValues& values, ScalarField& u) {
    const Grid& G = *data.grid;
    const auto& topo = data.topology();
    for (std::size_t n = 0; n < u.size(); ++n)
        if (topo.kind[n] == NodeKind::Boundary) u[n] = values.at(topo.component[n]);
    for (std::size_t b = 0; b < G.excisions.size(); ++b) {
        const auto& e = G.excisions[b];
        const double c = values.at(kFirstBox + int(b));
        for (int i = e.r_lo + 1; i < e.r_hi; ++i)
            for (int j = e.xi_lo + 1; j < e.xi_hi; ++j)
                for (int l = e.th_lo + 1; l < e.th_hi; ++l) u[G.index(i, j, l)] = c;
    }
}

ScalarField default_guess(const InitialDataSet& data, const BoundaryValues& values) {
    const Grid& G = *data.grid;
    ScalarField u(data.grid);
    const double a = values.at(kInnerTorus), b = values.at(kOuterTorus);
    for (std::size_t n = 0; n < u.size(); ++n) {
        int i, j, l;
        G.unpack(n, i, j, l);
        u[n] = a + (b - a) * (G.r(i) - G.r_min) / (G.r_max - G.r_min);
    }
    return u;
}

struct NonlinearState {
    std::vector<double> F;  // floored residual on interior rows, 0 elsewhere
    std::vector<Vec3> coef; // first-order coefficient of the linearization
};

NonlinearState linearize(const InitialDataSet& data, const Differentiator& D, const ScalarField& u, double eps) {
    const auto& C = data.geometry();
    const auto& topo = data.topology();
    const std::size_t N = u.size();
    NonlinearState s;
    s.F.assign(N, 0.0);
    s.coef.assign(N, Vec3{});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t q = 0; q < std::ptrdiff_t(N); ++q) {
        const std::size_t n = std::size_t(q);
        if (topo.kind[n] != NodeKind::Interior) continue;
        const auto& pg = C.pt[n];
        const Jet j = D.jet(u.v.data(), n);
        const Drift d = drift(pg, j.d);
        const double scale = pg.trk / std::max(d.norm, eps);
        s.F[n] = trace(pg.ginv, j.dd) + dot(C.div_coef[n], j.d) + scale * dot(d.grad_up, j.d);
        for (int a = 0; a < 3; ++a) s.coef[n][a] = C.div_coef[n][a] + scale * d.grad_up[a];
    }
    return s;
}

std::vector<double> radial_step(const InitialDataSet& data, const NonlinearState& s) {
    const Grid& G = *data.grid;
    const auto& C = data.geometry();
    const int n = G.n_r;
    const double h = G.h_r();
    std::vector<double> lo(n, 0.0), mid(n, 1.0), up(n, 0.0), rhs(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        const double a = C.pt[i].ginv(0, 0) / (h * h);
        const double b = s.coef[i][0] / (2 * h);
        lo[i] = a - b;
        mid[i] = -2 * a;
        up[i] = a + b;
        rhs[i] = -s.F[i];
    }
    if (!kernels::thomas(lo, mid, up, rhs)) throw LinearSolveFailure("tridiagonal solve hit a zero pivot");
    return rhs;
}

kernels::EllMatrix assemble(const InitialDataSet& data, const Differentiator& D, const NonlinearState& s) {
    const auto& C = data.geometry();
    const auto& topo = data.topology();
    const std::size_t N = s.F.size();
    std::vector<Differentiator::Weights> rows(N);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t q = 0; q < std::ptrdiff_t(N); ++q) {
        const std::size_t n = std::size_t(q);
        auto& w = rows[n];
        if (topo.kind[n] != NodeKind::Interior) {
            w.emplace_back(n, 1.0);
            continue;
        }
        const Sym3& gi = C.pt[n].ginv;
        for (int a = 0; a < 3; ++a) {
            D.d2_weights(n, a, gi(a, a), w);
            D.d1_weights(n, a, s.coef[n][a], w);
            for (int b = a + 1; b < 3; ++b) {
                D.mixed_weights(n, a, b, gi(a, b), w);
                D.mixed_weights(n, b, a, gi(a, b), w);
            }
        }
        std::sort(w.begin(), w.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        std::size_t k = 0;
        for (std::size_t m = 0; m < w.size(); ++m) {
            if (k > 0 && w[k - 1].first == w[m].first) w[k - 1].second += w[m].second;
            else w[k++] = w[m];
        }
        w.resize(k);
    }
    kernels::EllMatrix A;
    A.rows = N;
    for (const auto& w : rows) A.width = std::max(A.width, int(w.size()));
    A.col.assign(N * A.width, 0);
    A.val.assign(N * A.width, 0.0);
    A.diag.assign(N, 0.0);
    for (std::size_t n = 0; n < N; ++n) {
        const std::size_t base = n * A.width;
        for (int k = 0; k < A.width; ++k) A.col[base + k] = std::uint32_t(n);
        for (std::size_t k = 0; k < rows[n].size(); ++k) {
            A.col[base + k] = std::uint32_t(rows[n][k].first);
            A.val[base + k] = rows[n][k].second;
            if (rows[n][k].first == n) A.diag[n] = rows[n][k].second;
        }
        if (A.diag[n] == 0.0) throw LinearSolveFailure("zero diagonal in the linearized operator");
    }
    return A;
}

}  // namespace

SpacetimeHarmonicSolution solve_dirichlet(const InitialDataSet& data, const BoundaryValues& values,
                                          const SolverParams& params, const ScalarField* initial_guess) {
    validate(params);
    check_values(data, values);
    const Grid& G = *data.grid;
    const auto& topo = data.topology();
    Differentiator D(G, topo, function_accuracy(G));
    const double eps = resolved_grad_floor(params, G);

    SpacetimeHarmonicSolution sol;
    sol.boundary_values = values;
    sol.grad_floor = eps;
    if (initial_guess) {
        if (initial_guess->size() != G.size()) throw InvalidSpec("initial guess has the wrong size");
        sol.u = *initial_guess;
        sol.u.grid = data.grid;
    } else {
        sol.u = default_guess(data, values);
    }
    impose(data, values, sol.u);

    double damping = params.damping;
    double prev_change = std::numeric_limits<double>::infinity();
    std::vector<double> delta(G.size(), 0.0);
    bool converged = false;
    for (int it = 1; it <= params.picard_max && !converged; ++it) {
        const NonlinearState s = linearize(data, D, sol.u, eps);
        if (!G.is3d()) {
            delta = radial_step(data, s);
        } else {
            const auto A = assemble(data, D, s);
            std::vector<double> rhs(s.F.size());
            for (std::size_t n = 0; n < rhs.size(); ++n) rhs[n] = -s.F[n];
            std::fill(delta.begin(), delta.end(), 0.0);
            const KrylovResult kr = bicgstab(A, rhs, delta, params.linear_tol, params.linear_max);
            sol.linear_iters += kr.iterations;
            if (!kr.converged)
                throw LinearSolveFailure("BiCGStab stopped at relative residual " + std::to_string(kr.relative_residual));
        }
        const double step = kernels::max_abs(delta.data(), delta.size());
        if (!std::isfinite(step)) throw NoConvergence("Picard step is not finite");
        // A growing step signals oscillation: halve the relaxation.
        if (step > prev_change && damping > 1.0 / 1024) damping *= 0.5;
        prev_change = step;
        kernels::axpy_serial(damping, delta.data(), sol.u.v.data(), delta.size());
        sol.picard_iters = it;
        if (damping * step < params.picard_tol) converged = true;
    }
    sol.damping = damping;
    if (!converged)
        throw NoConvergence("Picard iteration did not converge within " + std::to_string(params.picard_max) +
                            " steps (last change " + std::to_string(prev_change * damping) + ")");
    sol.residual_norm = interior_residual_norm(data, sol.u);
    for (int c = 0; c < G.component_count(); ++c)
        sol.normal_derivatives[c] = boundary_normal_derivative(data, sol.u, c);
    return sol;
}

ScalarField residual(const InitialDataSet& data, const ScalarField& u) {
    const auto& C = data.geometry();
    const auto& topo = data.topology();
    Differentiator D(*data.grid, topo, function_accuracy(*data.grid));
    ScalarField out(data.grid);
    const std::size_t N = u.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t q = 0; q < std::ptrdiff_t(N); ++q) {
        const std::size_t n = std::size_t(q);
        if (!topo.usable(n)) continue;
        const auto& pg = C.pt[n];
        const Jet j = D.jet(u.v.data(), n);
        out[n] = trace(pg.ginv, j.dd) + dot(C.div_coef[n], j.d) + pg.trk * gradient_norm(pg, j.d);
    }
    return out;
}

double interior_residual_norm(const InitialDataSet& data, const ScalarField& u) {
    const ScalarField r = residual(data, u);
    const auto& topo = data.topology();
    double m = 0;
    for (std::size_t n = 0; n < r.size(); ++n)
        if (topo.kind[n] == NodeKind::Interior) m = std::max(m, std::abs(r[n]));
    return m;
}

TensorField spacetime_hessian(const InitialDataSet& data, const ScalarField& u) {
    const auto& C = data.geometry();
    const auto& topo = data.topology();
    Differentiator D(*data.grid, topo, function_accuracy(*data.grid));
    TensorField out(data.grid);
    const std::size_t N = u.size();
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t q = 0; q < std::ptrdiff_t(N); ++q) {
        const std::size_t n = std::size_t(q);
        if (!topo.usable(n)) continue;
        const auto& pg = C.pt[n];
        const Jet j = D.jet(u.v.data(), n);
        out[n] = covariant_hessian(pg, j) + data.k[n] * gradient_norm(pg, j.d);
    }
    return out;
}

namespace {

// sqrt of the determinant of g restricted to the two axes other than `axis`.
double face_density(const Sym3& g, int axis) {
    const int b = (axis + 1) % 3, c = (axis + 2) % 3;
    return std::sqrt(std::max(g(b, b) * g(c, c) - g(b, c) * g(b, c), 0.0));
}

double one_sided(const Grid& G, const ScalarField& u, int i, int j, int l, int axis, int dir) {
    auto at = [&](int k) {
        int ii = i, jj = j, ll = l;
        if (axis == 0) ii += dir * k;
        else if (axis == 1) jj = G.wrap(1, j + dir * k);
        else ll = G.wrap(2, l + dir * k);
        return u[G.index(ii, jj, ll)];
    };
    return dir * (-3 * at(0) + 4 * at(1) - at(2)) / (2 * G.h(axis));
}

}  // namespace

BoundaryNormalField boundary_normal_derivative(const InitialDataSet& data, const ScalarField& u, int component) {
    const Grid& G = *data.grid;
    if (component < 0 || component >= G.component_count())
        throw UnknownComponent("no boundary component with id " + std::to_string(component));
    const auto& C = data.geometry();
    BoundaryNormalField F;
    F.component = component;

    if (component == kInnerTorus || component == kOuterTorus) {
        const int i = component == kInnerTorus ? 0 : G.n_r - 1;
        const int outward = component == kInnerTorus ? -1 : 1;
        const Differentiator D(G, data.topology(), function_accuracy(G));
        const double cell = G.is3d() ? G.h_xi() * G.h_theta() : G.torus_area();
        for (int j = 0; j < G.nxi(); ++j)
            for (int l = 0; l < G.nth(); ++l) {
                const std::size_t n = G.index(i, j, l);
                NormalSample s;
                s.node = n;
                s.axis = 0;
                s.outward = outward;
                const double dr = std::sqrt(C.pt[n].ginv(0, 0)) * D.d1(u.v.data(), n, 0);
                s.d_upsilon = dr;  // upsilon = +r on both tori
                s.n_u = outward * dr;
                s.area = face_density(data.g[n], 0) * cell;
                F.samples.push_back(s);
            }
        return F;
    }

    const auto& e = G.excisions[component - kFirstBox];
    const int sgn = e.kind == ComponentKind::InnerMinus ? -1 : 1;
    const int lo[3] = {e.r_lo, e.xi_lo, e.th_lo}, hi[3] = {e.r_hi, e.xi_hi, e.th_hi};
    for (int axis = 0; axis < 3; ++axis) {
        const int b = (axis + 1) % 3, c = (axis + 2) % 3;
        for (int side = 0; side < 2; ++side) {
            // Low face: domain below, outer normal +e_axis, backward difference.
            const int outward = side == 0 ? 1 : -1;
            const int at = side == 0 ? lo[axis] : hi[axis];
            for (int p = lo[b]; p <= hi[b]; ++p)
                for (int q = lo[c]; q <= hi[c]; ++q) {
                    int idx[3];
                    idx[axis] = at;
                    idx[b] = p;
                    idx[c] = q;
                    const std::size_t n = G.index(idx[0], idx[1], idx[2]);
                    const double wb = (p == lo[b] || p == hi[b]) ? 0.5 : 1.0;
                    const double wc = (q == lo[c] || q == hi[c]) ? 0.5 : 1.0;
                    NormalSample s;
                    s.node = n;
                    s.axis = axis;
                    s.outward = outward;
                    // d_axis u from samples on the domain side
                    const double d = one_sided(G, u, idx[0], idx[1], idx[2], axis, -outward);
                    s.n_u = outward * std::sqrt(C.pt[n].ginv(axis, axis)) * d;
                    s.d_upsilon = sgn * s.n_u;
                    s.area = face_density(data.g[n], axis) * wb * wc * G.h(b) * G.h(c);
                    F.samples.push_back(s);
                }
        }
    }
    return F;
}

const BoundaryNormalField& boundary_normal_derivative(const SpacetimeHarmonicSolution& sol, int component) {
    const auto it = sol.normal_derivatives.find(component);
    if (it == sol.normal_derivatives.end())
        throw UnknownComponent("no boundary component with id " + std::to_string(component));
    return it->second;
}

}  // namespace shlab
