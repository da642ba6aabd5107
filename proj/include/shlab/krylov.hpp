#pragma once

#include <vector>

#include "shlab/kernels.hpp"

namespace shlab {

struct KrylovResult {
    int iterations = 0;
    double relative_residual = 0;
    bool converged = false;
};

// Right-preconditioned BiCGStab with the Jacobi (diagonal) preconditioner.
// x holds the initial guess on entry. Stops when |b - A x| <= tol |b|.
KrylovResult bicgstab(const kernels::EllMatrix& A, const std::vector<double>& b, std::vector<double>& x,
                      double tol, int max_iter);

}  // namespace shlab
