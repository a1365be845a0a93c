#include "dsm/kernels.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

// Parallel flavor. Worksharing is always over independent output rows, so
// the arithmetic inside each row matches the serial kernel exactly and
// results are bit-identical for any thread count.

namespace dsm::kernels::par {

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
    // Delegate without touching the OpenMP runtime: even an if(false)
    // parallel region costs microseconds, which the flow's inner loop
    // cannot afford at small n.
    if (rows * cols < kMatvecCutoff) {
        serial::matvec(a, rows, cols, x, y);
        return;
    }
    const std::int64_t m = static_cast<std::int64_t>(rows);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) {
        const double* row = a + static_cast<std::size_t>(i) * cols;
        double sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) sum += row[j] * x[j];
        y[i] = sum;
    }
}

void gram(const double* a, std::size_t rows, std::size_t cols, double* b) {
    if (rows * cols < kGramCutoff) {
        serial::gram(a, rows, cols, b);
        return;
    }
    const std::int64_t n = static_cast<std::int64_t>(cols);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        for (std::size_t j = static_cast<std::size_t>(i); j < cols; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < rows; ++k)
                sum += a[k * cols + i] * a[k * cols + j];
            b[i * cols + j] = sum;
            b[j * cols + static_cast<std::size_t>(i)] = sum;
        }
    }
}

bool lu_factor(double* a, std::size_t n, std::size_t* piv) {
    if (n < kLuCutoff) return serial::lu_factor(a, n, piv);

    double amax = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) amax = std::fmax(amax, std::fabs(a[i]));
    const double floor = std::fmax(
        static_cast<double>(n) * std::numeric_limits<double>::epsilon() * amax,
        std::numeric_limits<double>::min());

    bool ok = true;
#pragma omp parallel
    {
#ifdef _OPENMP
        const std::size_t nthreads =
            static_cast<std::size_t>(omp_get_num_threads());
        const std::size_t tid = static_cast<std::size_t>(omp_get_thread_num());
#else
        const std::size_t nthreads = 1, tid = 0;
#endif
        for (std::size_t k = 0; k < n && ok; ++k) {
#pragma omp single
            {
                std::size_t p = k;
                double pmax = std::fabs(a[k * n + k]);
                for (std::size_t i = k + 1; i < n; ++i) {
                    const double v = std::fabs(a[i * n + k]);
                    if (v > pmax) { pmax = v; p = i; }
                }
                if (pmax < floor) {
                    ok = false;
                } else {
                    piv[k] = p;
                    if (p != k)
                        for (std::size_t j = 0; j < n; ++j)
                            std::swap(a[k * n + j], a[p * n + j]);
                }
            }
            if (!ok) break;
            const double diag = a[k * n + k];
            const double* rk = a + k * n;
            // Fixed row ownership (i mod nthreads) keeps each row in the
            // same thread's cache for the whole factorization.
            const std::size_t phase =
                (tid + nthreads - (k + 1) % nthreads) % nthreads;
            for (std::size_t i = k + 1 + phase; i < n; i += nthreads) {
                double* ri = a + i * n;
                const double m = ri[k] / diag;
                ri[k] = m;
                for (std::size_t j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
            }
#pragma omp barrier
        }
    }
    return ok;
}

void lu_solve(const double* lu, const std::size_t* piv, std::size_t n,
              const double* b, double* x) {
    // Triangular solves are inherently sequential; O(n^2) is negligible
    // next to the factorization.
    serial::lu_solve(lu, piv, n, b, x);
}

}  // namespace dsm::kernels::par
