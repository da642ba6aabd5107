#pragma once

#include <memory>
#include <vector>

#include "shlab/data.hpp"
#include "shlab/geometry.hpp"
#include "shlab/surface.hpp"

namespace shlab {

// Level set {u = t}. Radial1D yields the exact coordinate torus u^{-1}(t);
// Torus3D yields a marching-tetrahedra mesh split into connected pieces.
// Throws NearCriticalLevel if |grad u| < eps at a sample within one cell of
// the surface, DomainError if t lies outside the open range of u.
LevelSurface extract_level_set(const InitialDataSet& data, std::shared_ptr<const ScalarField> u, double t,
                               double eps);

// Per piece; 0 for each coordinate torus.
std::vector<long> euler_characteristic(const LevelSurface& s);

struct EulerIntegral {
    double value = 0;  // 2 pi * integral of chi(Sigma_t) dt
    double t_min = 0, t_max = 0;
    std::vector<double> levels;
    std::vector<long> chi;       // total chi per level, 0 where skipped
    std::vector<bool> skipped;
    double skipped_measure = 0;  // length of t-range excluded as near-critical
};

// Midpoint samples of (min u, max u); near-critical levels are excluded
// together with their share of the range. Throws TooManySkipped above 10%.
EulerIntegral euler_integral(const InitialDataSet& data, std::shared_ptr<const ScalarField> u, int n_samples,
                             double eps);

// Quadrature weight of each node for volume integrals over the domain
// (coordinate measure; excised boxes excluded). Multiply by sqrt(det g).
std::vector<double> node_weights(const Grid& g);

struct BulkIntegrals {
    double hessian_term = 0;   // integral of |spacetime Hessian|^2 / max(|grad u|, eps)
    double hessian_floored = 0;  // part of hessian_term from samples with |grad u| < eps
    long floored_samples = 0;
    double energy_term = 0;    // integral of mu |grad u| + J(grad u)
    double volume = 0;
};

BulkIntegrals bulk_integrals(const InitialDataSet& data, const ScalarField& u, const ConstraintFields& cf,
                             double eps);

}  // namespace shlab
