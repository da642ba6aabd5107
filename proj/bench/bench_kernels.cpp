// Serial reference kernels against their OpenMP versions.
#include <omp.h>

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "shlab/kernels.hpp"
#include "shlab/krylov.hpp"

namespace {

using shlab::kernels::EllMatrix;

std::vector<double> ramp(std::size_t n, double phase) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(0.001 * double(i) + phase);
    return v;
}

// 7-point shifted Laplacian on an m^3 periodic lattice (diagonally dominant).
EllMatrix lattice_matrix(int m) {
    EllMatrix A;
    A.rows = std::size_t(m) * m * m;
    A.width = 7;
    A.col.resize(A.rows * 7);
    A.val.resize(A.rows * 7);
    A.diag.assign(A.rows, 6.5);
    auto id = [m](int i, int j, int k) {
        return std::uint32_t(((i + m) % m * m + (j + m) % m) * m + (k + m) % m);
    };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const std::size_t r = id(i, j, k), s = r * 7;
                const std::uint32_t nb[7] = {id(i, j, k),     id(i - 1, j, k), id(i + 1, j, k), id(i, j - 1, k),
                                             id(i, j + 1, k), id(i, j, k - 1), id(i, j, k + 1)};
                for (int q = 0; q < 7; ++q) {
                    A.col[s + q] = nb[q];
                    A.val[s + q] = q == 0 ? 6.5 : -1.0;
                }
            }
    return A;
}

void BM_dot_serial(benchmark::State& st) {
    const auto x = ramp(st.range(0), 0.1), y = ramp(st.range(0), 0.7);
    for (auto _ : st) benchmark::DoNotOptimize(shlab::kernels::dot_serial(x.data(), y.data(), x.size()));
    st.SetBytesProcessed(st.iterations() * 16 * st.range(0));
}
void BM_dot_omp(benchmark::State& st) {
    const auto x = ramp(st.range(0), 0.1), y = ramp(st.range(0), 0.7);
    for (auto _ : st) benchmark::DoNotOptimize(shlab::kernels::dot_omp(x.data(), y.data(), x.size()));
    st.SetBytesProcessed(st.iterations() * 16 * st.range(0));
}
void BM_axpy_serial(benchmark::State& st) {
    const auto x = ramp(st.range(0), 0.1);
    auto y = ramp(st.range(0), 0.7);
    for (auto _ : st) {
        shlab::kernels::axpy_serial(1e-9, x.data(), y.data(), x.size());
        benchmark::ClobberMemory();
    }
    st.SetBytesProcessed(st.iterations() * 24 * st.range(0));
}
void BM_axpy_omp(benchmark::State& st) {
    const auto x = ramp(st.range(0), 0.1);
    auto y = ramp(st.range(0), 0.7);
    for (auto _ : st) {
        shlab::kernels::axpy_omp(1e-9, x.data(), y.data(), x.size());
        benchmark::ClobberMemory();
    }
    st.SetBytesProcessed(st.iterations() * 24 * st.range(0));
}
void BM_spmv_serial(benchmark::State& st) {
    const auto A = lattice_matrix(int(st.range(0)));
    const auto x = ramp(A.rows, 0.3);
    std::vector<double> y(A.rows);
    for (auto _ : st) {
        shlab::kernels::spmv_serial(A, x.data(), y.data());
        benchmark::ClobberMemory();
    }
}
void BM_spmv_omp(benchmark::State& st) {
    const auto A = lattice_matrix(int(st.range(0)));
    const auto x = ramp(A.rows, 0.3);
    std::vector<double> y(A.rows);
    for (auto _ : st) {
        shlab::kernels::spmv_omp(A, x.data(), y.data());
        benchmark::ClobberMemory();
    }
}
// Full solve through the dispatchers; range(1) is the thread count (0 = all).
void BM_bicgstab(benchmark::State& st) {
    const auto A = lattice_matrix(int(st.range(0)));
    const auto b = ramp(A.rows, 0.5);
    const int saved = omp_get_max_threads();
    if (st.range(1) > 0) omp_set_num_threads(int(st.range(1)));
    for (auto _ : st) {
        std::vector<double> x(A.rows, 0.0);
        benchmark::DoNotOptimize(shlab::bicgstab(A, b, x, 1e-10, 1000).iterations);
    }
    omp_set_num_threads(saved);
}

}  // namespace

BENCHMARK(BM_dot_serial)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_dot_omp)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_axpy_serial)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_axpy_omp)->RangeMultiplier(8)->Range(1 << 12, 1 << 21);
BENCHMARK(BM_spmv_serial)->Arg(32)->Arg(64)->Arg(96);
BENCHMARK(BM_spmv_omp)->Arg(32)->Arg(64)->Arg(96);
BENCHMARK(BM_bicgstab)->Args({48, 1})->Args({48, 0})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
