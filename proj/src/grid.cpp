#include "shlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shlab/errors.hpp"

namespace shlab {

Grid Grid::radial(double r_min, double r_max, int n_r, double p_xi, double p_th) {
    Grid g;
    g.backend = Backend::Radial1D;
    g.r_min = r_min;
    g.r_max = r_max;
    g.n_r = n_r;
    g.period_xi = p_xi;
    g.period_theta = p_th;
    return g;
}

Grid Grid::torus(double r_min, double r_max, int n_r, int n_xi, int n_theta, double p_xi,
                 double p_th) {
    Grid g;
    g.backend = Backend::Torus3D;
    g.r_min = r_min;
    g.r_max = r_max;
    g.n_r = n_r;
    g.n_xi = n_xi;
    g.n_theta = n_theta;
    g.period_xi = p_xi;
    g.period_theta = p_th;
    return g;
}

double Grid::spacing() const {
    double h = h_r();
    if (is3d()) h = std::max({h, h_xi(), h_theta()});
    return h;
}

namespace {

// Boxes need two clean domain layers around them for one-sided stencils.
constexpr int kGap = 3;

bool separated(const ExcisionBox& a, const ExcisionBox& b, const Grid& g) {
    if (a.r_hi + kGap <= b.r_lo || b.r_hi + kGap <= a.r_lo) return true;
    auto sep_periodic = [](int lo1, int hi1, int lo2, int hi2, int n) {
        const int d1 = lo2 - hi1, d2 = lo1 - hi2;
        const int fwd = ((d1 % n) + n) % n, bwd = ((d2 % n) + n) % n;
        return (hi1 < lo2 || hi2 < lo1) && std::min(fwd, bwd) >= kGap;
    };
    return sep_periodic(a.xi_lo, a.xi_hi, b.xi_lo, b.xi_hi, g.n_xi) ||
           sep_periodic(a.th_lo, a.th_hi, b.th_lo, b.th_hi, g.n_theta);
}

}  // namespace

void Grid::validate() const {
    if (!(r_min >= 1.0)) throw InvalidGrid("grid.r_min must be >= 1");
    if (!(r_max > r_min)) throw InvalidGrid("grid.r_max must exceed grid.r_min");
    if (n_r < 8) throw GridTooCoarse("grid.n_r must be >= 8 (got " + std::to_string(n_r) + ")");
    if (!(period_xi > 0) || !(period_theta > 0)) throw InvalidGrid("grid periods must be positive");
    if (backend == Backend::Radial1D) {
        if (!excisions.empty()) throw InvalidGrid("excisions require the Torus3D backend");
        return;
    }
    if (n_xi < 8 || n_theta < 8) throw GridTooCoarse("grid.n_xi and grid.n_theta must be >= 8");
    for (std::size_t b = 0; b < excisions.size(); ++b) {
        const auto& e = excisions[b];
        const std::string tag = "grid.excisions[" + std::to_string(b) + "]";
        if (e.r_lo < kGap || e.r_hi > n_r - 1 - kGap || e.r_hi - e.r_lo < 1)
            throw InvalidGrid(tag + ": radial extent must be strictly interior");
        if (e.xi_lo < 0 || e.xi_hi >= n_xi || e.xi_hi - e.xi_lo < 1 ||
            n_xi - (e.xi_hi - e.xi_lo) < 2 * kGap)
            throw InvalidGrid(tag + ": xi extent invalid");
        if (e.th_lo < 0 || e.th_hi >= n_theta || e.th_hi - e.th_lo < 1 ||
            n_theta - (e.th_hi - e.th_lo) < 2 * kGap)
            throw InvalidGrid(tag + ": theta extent invalid");
        for (std::size_t c = 0; c < b; ++c)
            if (!separated(e, excisions[c], *this))
                throw InvalidGrid(tag + ": overlaps or touches another excision");
    }
}

Topology Topology::build(const Grid& g) {
    Topology t;
    const std::size_t n = g.size();
    t.kind.assign(n, NodeKind::Interior);
    t.component.assign(n, -1);
    for (int i = 0; i < g.n_r; ++i)
        for (int j = 0; j < g.nxi(); ++j)
            for (int l = 0; l < g.nth(); ++l) {
                const std::size_t id = g.index(i, j, l);
                if (i == 0 || i == g.n_r - 1) {
                    t.kind[id] = NodeKind::Boundary;
                    t.component[id] = i == 0 ? kInnerTorus : kOuterTorus;
                    continue;
                }
                for (std::size_t b = 0; b < g.excisions.size(); ++b) {
                    const auto& e = g.excisions[b];
                    if (!e.contains(i, j, l)) continue;
                    if (e.strictly_contains(i, j, l)) {
                        t.kind[id] = NodeKind::Void;
                    } else {
                        t.kind[id] = NodeKind::Boundary;
                        t.component[id] = kFirstBox + int(b);
                    }
                }
            }
    return t;
}

ExcisionBox box_from_coords(const Grid& g, double r_lo, double r_hi, double xi_lo, double xi_hi,
                            double th_lo, double th_hi, ComponentKind kind) {
    ExcisionBox b;
    b.r_lo = int(std::lround((r_lo - g.r_min) / g.h_r()));
    b.r_hi = int(std::lround((r_hi - g.r_min) / g.h_r()));
    b.xi_lo = int(std::lround(xi_lo / g.h_xi()));
    b.xi_hi = int(std::lround(xi_hi / g.h_xi()));
    b.th_lo = int(std::lround(th_lo / g.h_theta()));
    b.th_hi = int(std::lround(th_hi / g.h_theta()));
    b.kind = kind;
    return b;
}

}  // namespace shlab
