#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace shlab::kernels {

// Reductions sum fixed-size blocks first and then the block partials in
// index order, so serial and threaded results agree bit for bit for any
// thread count.
inline constexpr std::size_t kBlock = 2048;

// Row-major ELLPACK storage: row i owns slots [i*width, (i+1)*width).
// Padding slots carry weight 0 and point at the row itself.
struct EllMatrix {
    std::size_t rows = 0;
    int width = 0;
    std::vector<std::uint32_t> col;
    std::vector<double> val;
    std::vector<double> diag;
};

double dot_serial(const double* x, const double* y, std::size_t n);
double dot_omp(const double* x, const double* y, std::size_t n);

// y += a x
void axpy_serial(double a, const double* x, double* y, std::size_t n);
void axpy_omp(double a, const double* x, double* y, std::size_t n);

// y = A x
void spmv_serial(const EllMatrix& A, const double* x, double* y);
void spmv_omp(const EllMatrix& A, const double* x, double* y);

double max_abs(const double* x, std::size_t n);

// Threaded versions are used when more than one OpenMP thread is available.
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void spmv(const EllMatrix& A, const double* x, double* y);

// Solves a tridiagonal system in place: lower[i] x[i-1] + mid[i] x[i] +
// upper[i] x[i+1] = rhs[i]. Returns false on a zero pivot.
bool thomas(std::vector<double> lower, std::vector<double> mid, std::vector<double> upper,
            std::vector<double>& rhs);

}  // namespace shlab::kernels
