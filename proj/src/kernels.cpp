#include "shlab/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace shlab::kernels {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

double block_dot(const double* x, const double* y, std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
    return s;
}

bool threaded() { return omp_get_max_threads() > 1; }

}  // namespace

double dot_serial(const double* x, const double* y, std::size_t n) {
    double total = 0;
    for (std::size_t b = 0; b < block_count(n); ++b)
        total += block_dot(x, y, b * kBlock, std::min(n, (b + 1) * kBlock));
    return total;
}

double dot_omp(const double* x, const double* y, std::size_t n) {
    const std::size_t nb = block_count(n);
    std::vector<double> part(nb);
#pragma omp parallel for schedule(static)
    for (std::size_t b = 0; b < nb; ++b) part[b] = block_dot(x, y, b * kBlock, std::min(n, (b + 1) * kBlock));
    double total = 0;
    for (double p : part) total += p;
    return total;
}

void axpy_serial(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void axpy_omp(double a, const double* x, double* y, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void spmv_serial(const EllMatrix& A, const double* x, double* y) {
    const std::size_t w = A.width;
    for (std::size_t i = 0; i < A.rows; ++i) {
        double s = 0;
        for (std::size_t k = i * w; k < (i + 1) * w; ++k) s += A.val[k] * x[A.col[k]];
        y[i] = s;
    }
}

void spmv_omp(const EllMatrix& A, const double* x, double* y) {
    const std::size_t w = A.width;
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < A.rows; ++i) {
        double s = 0;
        for (std::size_t k = i * w; k < (i + 1) * w; ++k) s += A.val[k] * x[A.col[k]];
        y[i] = s;
    }
}

double max_abs(const double* x, std::size_t n) {
    double m = 0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

double dot(const double* x, const double* y, std::size_t n) {
    return threaded() && n > kBlock ? dot_omp(x, y, n) : dot_serial(x, y, n);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
    if (threaded() && n > kBlock) axpy_omp(a, x, y, n);
    else axpy_serial(a, x, y, n);
}

void spmv(const EllMatrix& A, const double* x, double* y) {
    if (threaded() && A.rows > kBlock) spmv_omp(A, x, y);
    else spmv_serial(A, x, y);
}

bool thomas(std::vector<double> lower, std::vector<double> mid, std::vector<double> upper,
            std::vector<double>& rhs) {
    const std::size_t n = mid.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (mid[i - 1] == 0.0) return false;
        const double f = lower[i] / mid[i - 1];
        mid[i] -= f * upper[i - 1];
        rhs[i] -= f * rhs[i - 1];
    }
    if (mid[n - 1] == 0.0) return false;
    rhs[n - 1] /= mid[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / mid[i];
    return true;
}

}  // namespace shlab::kernels
