#pragma once

#include <utility>
#include <vector>

#include "shlab/grid.hpp"
#include "shlab/tensor.hpp"

namespace shlab {

// Finite-difference weights for the m-th derivative at x0 on arbitrary
// nodes (Fornberg's recursion).
std::vector<double> fd_weights(double x0, const std::vector<double>& x, int m);

// Weights on nodes offset, offset+1, ... relative to the evaluation node.
struct Stencil {
    int offset = 0;
    std::vector<double> w;
};

// Stencil of accuracy p for derivative m at node i of a uniform,
// non-periodic axis with n nodes. Centered where it fits, otherwise a
// one-sided window of m + p nodes.
Stencil axis_stencil(int i, int n, double h, int m, int p);

// Centered stencil for a periodic axis.
Stencil periodic_stencil(double h, int m, int p);

class AxisStencils {
public:
    AxisStencils() = default;
    AxisStencils(int n, double h, int m, int p);
    const Stencil& at(int i) const { return s_[i]; }

private:
    std::vector<Stencil> s_;
};

struct Jet {
    Vec3 d{};   // first partials
    Sym3 dd{};  // second partials
};

// Derivatives of sampled scalars. Radial1D uses accuracy-4 stencils;
// Torus3D uses accuracy-2 stencils that go one-sided next to excised nodes
// and at the radial ends.
class Differentiator {
public:
    Differentiator(const Grid& g, const Topology& topo, int accuracy);

    double d1(const double* u, std::size_t n, int axis) const;
    double d2(const double* u, std::size_t n, int axis) const;
    double mixed(const double* u, std::size_t n, int a, int b) const;
    Jet jet(const double* u, std::size_t n) const;

    // The same derivatives as linear combinations of nodal values; weights
    // are scaled and appended to out (duplicates are not merged).
    using Weights = std::vector<std::pair<std::size_t, double>>;
    void d1_weights(std::size_t n, int axis, double scale, Weights& out) const;
    void d2_weights(std::size_t n, int axis, double scale, Weights& out) const;
    void mixed_weights(std::size_t n, int a, int b, double scale, Weights& out) const;

private:
    std::size_t step(std::size_t n, int axis, int k) const;
    bool usable(std::size_t n, int axis, int k) const;

    const Grid& g_;
    const Topology& topo_;
    int p_;
    AxisStencils r1_, r2_;
};

// Stencils for metric-derived quantities: accuracy p in every direction,
// biased near the radial ends, periodic in the angles. Excisions are
// ignored because metric samples exist at every node.
class GeometryStencils {
public:
    GeometryStencils(const Grid& g, int accuracy);

    // d/dx^axis of the sampled array f at node (i, j, l).
    double d1(const double* f, std::size_t stride, int i, int j, int l, int axis) const;
    double d2(const double* f, std::size_t stride, int i, int j, int l, int axis) const;
    double mixed(const double* f, std::size_t stride, int i, int j, int l, int a, int b) const;

private:
    const Stencil& pick(int axis, int m, int i) const;
    std::size_t node(int i, int j, int l, int axis, int k) const;

    const Grid& g_;
    AxisStencils r1_, r2_;
    Stencil xi1_, xi2_, th1_, th2_;
};

}  // namespace shlab
