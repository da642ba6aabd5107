#include "shlab/krylov.hpp"

#include <cmath>

namespace shlab {

using namespace kernels;

namespace {

void precondition(const EllMatrix& A, const std::vector<double>& in, std::vector<double>& out) {
    const std::size_t n = in.size();
#pragma omp parallel for schedule(static) if (n > kBlock)
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] / A.diag[i];
}

}  // namespace

KrylovResult bicgstab(const EllMatrix& A, const std::vector<double>& b, std::vector<double>& x, double tol,
                      int max_iter) {
    const std::size_t n = b.size();
    KrylovResult res;
    const double bnorm = std::sqrt(dot(b.data(), b.data(), n));
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        res.converged = true;
        return res;
    }
    std::vector<double> r(n), r0(n), p(n, 0.0), v(n, 0.0), s(n), t(n), ph(n), sh(n);
    spmv(A, x.data(), r.data());
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    r0 = r;
    double rho = 1, alpha = 1, omega = 1;
    double rnorm = std::sqrt(dot(r.data(), r.data(), n));
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it;
        res.relative_residual = rnorm / bnorm;
        if (rnorm <= tol * bnorm) {
            res.converged = true;
            return res;
        }
        const double rho_new = dot(r0.data(), r.data(), n);
        if (rho_new == 0.0 || !std::isfinite(rho_new)) break;
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        precondition(A, p, ph);
        spmv(A, ph.data(), v.data());
        const double r0v = dot(r0.data(), v.data(), n);
        if (r0v == 0.0) break;
        alpha = rho / r0v;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        const double snorm = std::sqrt(dot(s.data(), s.data(), n));
        if (snorm <= tol * bnorm) {
            axpy(alpha, ph.data(), x.data(), n);
            res.iterations = it + 1;
            res.relative_residual = snorm / bnorm;
            res.converged = true;
            return res;
        }
        precondition(A, s, sh);
        spmv(A, sh.data(), t.data());
        const double tt = dot(t.data(), t.data(), n);
        if (tt == 0.0) break;
        omega = dot(t.data(), s.data(), n) / tt;
        axpy(alpha, ph.data(), x.data(), n);
        axpy(omega, sh.data(), x.data(), n);
        for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        rnorm = std::sqrt(dot(r.data(), r.data(), n));
        if (omega == 0.0) break;
    }
    // Recompute the true residual for the report.
    spmv(A, x.data(), r.data());
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    res.relative_residual = std::sqrt(dot(r.data(), r.data(), n)) / bnorm;
    res.converged = res.relative_residual <= tol;
    return res;
}

}  // namespace shlab
