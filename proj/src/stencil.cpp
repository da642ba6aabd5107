#include "shlab/stencil.hpp"

#include <algorithm>
#include <cassert>

namespace shlab {

std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m) {
    const int n = int(x.size()) - 1;
    std::vector<std::vector<double>> c(n + 1, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0, c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i <= n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n + 1);
    for (int i = 0; i <= n; ++i) w[i] = c[i][m];
    return w;
}

namespace {

Stencil make(int offset, int width, double h, int m) {
    std::vector<double> x(width);
    for (int k = 0; k < width; ++k) x[k] = (offset + k) * h;
    return {offset, fd_weights(0.0, x, m)};
}

}  // namespace

Stencil axis_stencil(int i, int n, double h, int m, int p) {
    const int half = p / 2;
    if (i - half >= 0 && i + half <= n - 1) return make(-half, 2 * half + 1, h, m);
    const int width = std::min(m + p, n);
    const int start = std::clamp(i - half, 0, n - width);
    return make(start - i, width, h, m);
}

Stencil periodic_stencil(double h, int m, int p) {
    const int half = p / 2;
    return make(-half, 2 * half + 1, h, m);
}

AxisStencils::AxisStencils(int n, double h, int m, int p) {
    s_.reserve(n);
    for (int i = 0; i < n; ++i) s_.push_back(axis_stencil(i, n, h, m, p));
}

// ---------------------------------------------------------------------------

Differentiator::Differentiator(const Grid& g, const Topology& topo, int accuracy)
    : g_(g), topo_(topo), p_(accuracy) {
    r1_ = AxisStencils(g.n_r, g.h_r(), 1, p_);
    r2_ = AxisStencils(g.n_r, g.h_r(), 2, p_);
}

std::size_t Differentiator::step(std::size_t n, int axis, int k) const {
    int i, j, l;
    g_.unpack(n, i, j, l);
    if (axis == 0) return g_.index(i + k, j, l);
    if (axis == 1) return g_.index(i, g_.wrap(1, j + k), l);
    return g_.index(i, j, g_.wrap(2, l + k));
}

bool Differentiator::usable(std::size_t n, int axis, int k) const {
    if (axis == 0) {
        int i, j, l;
        g_.unpack(n, i, j, l);
        if (i + k < 0 || i + k >= g_.n_r) return false;
    }
    return topo_.usable(step(n, axis, k));
}

double Differentiator::d1(const double* u, std::size_t n, int axis) const {
    const double h = g_.h(axis);
    if (!g_.is3d()) {
        if (axis != 0) return 0.0;
        const auto& s = r1_.at(int(n));
        double acc = 0;
        for (std::size_t k = 0; k < s.w.size(); ++k) acc += s.w[k] * u[n + s.offset + k];
        return acc;
    }
    const bool fwd = usable(n, axis, 1), bwd = usable(n, axis, -1);
    if (fwd && bwd) return (u[step(n, axis, 1)] - u[step(n, axis, -1)]) / (2 * h);
    const int dir = fwd ? 1 : -1;
    return dir * (-3 * u[n] + 4 * u[step(n, axis, dir)] - u[step(n, axis, 2 * dir)]) / (2 * h);
}

double Differentiator::d2(const double* u, std::size_t n, int axis) const {
    const double h = g_.h(axis);
    if (!g_.is3d()) {
        if (axis != 0) return 0.0;
        const auto& s = r2_.at(int(n));
        double acc = 0;
        for (std::size_t k = 0; k < s.w.size(); ++k) acc += s.w[k] * u[n + s.offset + k];
        return acc;
    }
    const bool fwd = usable(n, axis, 1), bwd = usable(n, axis, -1);
    if (fwd && bwd) return (u[step(n, axis, 1)] - 2 * u[n] + u[step(n, axis, -1)]) / (h * h);
    const int dir = fwd ? 1 : -1;
    return (2 * u[n] - 5 * u[step(n, axis, dir)] + 4 * u[step(n, axis, 2 * dir)] -
            u[step(n, axis, 3 * dir)]) / (h * h);
}

double Differentiator::mixed(const double* u, std::size_t n, int a, int b) const {
    if (!g_.is3d()) return 0.0;
    const double h = g_.h(b);
    const bool fwd = usable(n, b, 1), bwd = usable(n, b, -1);
    if (fwd && bwd) return (d1(u, step(n, b, 1), a) - d1(u, step(n, b, -1), a)) / (2 * h);
    const int dir = fwd ? 1 : -1;
    return dir * (-3 * d1(u, n, a) + 4 * d1(u, step(n, b, dir), a) - d1(u, step(n, b, 2 * dir), a)) /
           (2 * h);
}

Jet Differentiator::jet(const double* u, std::size_t n) const {
    Jet J;
    const int dims = g_.is3d() ? 3 : 1;
    for (int a = 0; a < dims; ++a) {
        J.d[a] = d1(u, n, a);
        J.dd(a, a) = d2(u, n, a);
    }
    if (dims == 3) {
        J.dd(0, 1) = 0.5 * (mixed(u, n, 0, 1) + mixed(u, n, 1, 0));
        J.dd(0, 2) = 0.5 * (mixed(u, n, 0, 2) + mixed(u, n, 2, 0));
        J.dd(1, 2) = 0.5 * (mixed(u, n, 1, 2) + mixed(u, n, 2, 1));
    }
    return J;
}

void Differentiator::d1_weights(std::size_t n, int axis, double scale, Weights& out) const {
    const double h = g_.h(axis);
    if (!g_.is3d()) {
        if (axis != 0) return;
        const auto& s = r1_.at(int(n));
        for (std::size_t k = 0; k < s.w.size(); ++k) out.emplace_back(n + s.offset + k, scale * s.w[k]);
        return;
    }
    const bool fwd = usable(n, axis, 1), bwd = usable(n, axis, -1);
    if (fwd && bwd) {
        out.emplace_back(step(n, axis, 1), scale / (2 * h));
        out.emplace_back(step(n, axis, -1), -scale / (2 * h));
        return;
    }
    const int dir = fwd ? 1 : -1;
    const double c = dir * scale / (2 * h);
    out.emplace_back(n, -3 * c);
    out.emplace_back(step(n, axis, dir), 4 * c);
    out.emplace_back(step(n, axis, 2 * dir), -c);
}

void Differentiator::d2_weights(std::size_t n, int axis, double scale, Weights& out) const {
    const double h = g_.h(axis);
    if (!g_.is3d()) {
        if (axis != 0) return;
        const auto& s = r2_.at(int(n));
        for (std::size_t k = 0; k < s.w.size(); ++k) out.emplace_back(n + s.offset + k, scale * s.w[k]);
        return;
    }
    const double c = scale / (h * h);
    const bool fwd = usable(n, axis, 1), bwd = usable(n, axis, -1);
    if (fwd && bwd) {
        out.emplace_back(step(n, axis, 1), c);
        out.emplace_back(n, -2 * c);
        out.emplace_back(step(n, axis, -1), c);
        return;
    }
    const int dir = fwd ? 1 : -1;
    out.emplace_back(n, 2 * c);
    out.emplace_back(step(n, axis, dir), -5 * c);
    out.emplace_back(step(n, axis, 2 * dir), 4 * c);
    out.emplace_back(step(n, axis, 3 * dir), -c);
}

void Differentiator::mixed_weights(std::size_t n, int a, int b, double scale, Weights& out) const {
    if (!g_.is3d()) return;
    const double h = g_.h(b);
    const bool fwd = usable(n, b, 1), bwd = usable(n, b, -1);
    if (fwd && bwd) {
        d1_weights(step(n, b, 1), a, scale / (2 * h), out);
        d1_weights(step(n, b, -1), a, -scale / (2 * h), out);
        return;
    }
    const int dir = fwd ? 1 : -1;
    const double c = dir * scale / (2 * h);
    d1_weights(n, a, -3 * c, out);
    d1_weights(step(n, b, dir), a, 4 * c, out);
    d1_weights(step(n, b, 2 * dir), a, -c, out);
}

// ---------------------------------------------------------------------------

GeometryStencils::GeometryStencils(const Grid& g, int p) : g_(g) {
    r1_ = AxisStencils(g.n_r, g.h_r(), 1, p);
    r2_ = AxisStencils(g.n_r, g.h_r(), 2, p);
    xi1_ = periodic_stencil(g.h_xi(), 1, p);
    xi2_ = periodic_stencil(g.h_xi(), 2, p);
    th1_ = periodic_stencil(g.h_theta(), 1, p);
    th2_ = periodic_stencil(g.h_theta(), 2, p);
}

const Stencil& GeometryStencils::pick(int axis, int m, int i) const {
    if (axis == 0) return m == 1 ? r1_.at(i) : r2_.at(i);
    if (axis == 1) return m == 1 ? xi1_ : xi2_;
    return m == 1 ? th1_ : th2_;
}

std::size_t GeometryStencils::node(int i, int j, int l, int axis, int k) const {
    if (axis == 0) return g_.index(i + k, j, l);
    if (axis == 1) return g_.index(i, g_.wrap(1, j + k), l);
    return g_.index(i, j, g_.wrap(2, l + k));
}

double GeometryStencils::d1(const double* f, std::size_t stride, int i, int j, int l, int axis) const {
    if (axis != 0 && !g_.is3d()) return 0.0;
    const auto& s = pick(axis, 1, i);
    double acc = 0;
    for (std::size_t k = 0; k < s.w.size(); ++k) acc += s.w[k] * f[node(i, j, l, axis, s.offset + int(k)) * stride];
    return acc;
}

double GeometryStencils::d2(const double* f, std::size_t stride, int i, int j, int l, int axis) const {
    if (axis != 0 && !g_.is3d()) return 0.0;
    const auto& s = pick(axis, 2, i);
    double acc = 0;
    for (std::size_t k = 0; k < s.w.size(); ++k) acc += s.w[k] * f[node(i, j, l, axis, s.offset + int(k)) * stride];
    return acc;
}

double GeometryStencils::mixed(const double* f, std::size_t stride, int i, int j, int l, int a, int b) const {
    if (!g_.is3d()) return 0.0;
    // Tensor product of first-derivative stencils in a and b.
    const auto& sb = pick(b, 1, i);
    double acc = 0;
    for (std::size_t k = 0; k < sb.w.size(); ++k) {
        int ii = i, jj = j, ll = l;
        const int off = sb.offset + int(k);
        if (b == 0) ii += off;
        else if (b == 1) jj = g_.wrap(1, j + off);
        else ll = g_.wrap(2, l + off);
        acc += sb.w[k] * d1(f, stride, ii, jj, ll, a);
    }
    return acc;
}

}  // namespace shlab
