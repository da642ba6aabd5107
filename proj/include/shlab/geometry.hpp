#pragma once

#include <array>
#include <vector>

#include "shlab/data.hpp"
#include "shlab/field.hpp"
#include "shlab/stencil.hpp"
#include "shlab/tensor.hpp"

namespace shlab {

// Metric and extrinsic curvature together with the partial derivatives
// needed for connection, curvature and constraints at one point.
struct MetricJet {
    Sym3 g;
    std::array<Sym3, 3> dg{};
    std::array<std::array<Sym3, 3>, 3> ddg{};  // ddg[a][b] = d_a d_b g
    Sym3 k;
    std::array<Sym3, 3> dk{};
};

struct PointGeometry {
    Sym3 ginv;
    double sqrt_det = 0;
    std::array<Sym3, 3> gamma{};  // gamma[c](a, b) = Gamma^c_ab
    Sym3 ricci;
    double R = 0;
    double trk = 0;
    double k2 = 0;  // |k|^2_g
    double mu = 0;
    Vec3 J{};       // covector
    double J_norm = 0;
};

// Throws SingularMetric when g is not invertible.
PointGeometry evaluate_point(const MetricJet& jet);

struct GeometryCache {
    std::vector<PointGeometry> pt;
    // (det g)^{-1/2} d_i((det g)^{1/2} g^{ij}): first-order coefficient of the
    // divergence-form Laplacian.
    std::vector<Vec3> div_coef;
};

// Accuracy of metric-derived derivatives (both backends).
inline constexpr int kGeometryAccuracy = 4;

GeometryCache build_geometry_cache(const InitialDataSet& data);
MetricJet metric_jet(const InitialDataSet& data, const GeometryStencils& st, std::size_t n);

struct ConstraintFields {
    ScalarField mu;
    CovectorField J;
    ScalarField J_norm;
    ScalarField dec_margin;  // mu - |J|_g
};

ScalarField scalar_curvature(const InitialDataSet& data);
ConstraintFields compute_constraints(const InitialDataSet& data);

// Derivative accuracy used for sampled functions u (4 on Radial1D, 2 on Torus3D).
int function_accuracy(const Grid& g);

ScalarField laplace_beltrami(const InitialDataSet& data, const ScalarField& u);

// Covariant Hessian d^2u - Gamma du from a jet of u.
Sym3 covariant_hessian(const PointGeometry& pg, const Jet& j);
double gradient_norm(const PointGeometry& pg, const Vec3& du);

}  // namespace shlab
