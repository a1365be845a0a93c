#include "dsm/kernels.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace dsm::kernels::serial {

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y) {
    for (std::size_t i = 0; i < rows; ++i) {
        const double* row = a + i * cols;
        double sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) sum += row[j] * x[j];
        y[i] = sum;
    }
}

void gram(const double* a, std::size_t rows, std::size_t cols, double* b) {
    for (std::size_t i = 0; i < cols; ++i) {
        for (std::size_t j = i; j < cols; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < rows; ++k)
                sum += a[k * cols + i] * a[k * cols + j];
            b[i * cols + j] = sum;
            b[j * cols + i] = sum;
        }
    }
}

namespace {

// Pivot threshold relative to the largest initial entry; entries below it
// are treated as exact zeros of a rank-deficient matrix.
double pivot_floor(const double* a, std::size_t n) {
    double amax = 0.0;
    for (std::size_t i = 0; i < n * n; ++i) amax = std::fmax(amax, std::fabs(a[i]));
    const double eps = std::numeric_limits<double>::epsilon();
    return std::fmax(static_cast<double>(n) * eps * amax,
                     std::numeric_limits<double>::min());
}

}  // namespace

bool lu_factor(double* a, std::size_t n, std::size_t* piv) {
    const double floor = pivot_floor(a, n);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double pmax = std::fabs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(a[i * n + k]);
            if (v > pmax) { pmax = v; p = i; }
        }
        if (pmax < floor) return false;
        piv[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a[k * n + j], a[p * n + j]);
        const double diag = a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = a[i * n + k] / diag;
            a[i * n + k] = m;
            const double* rk = a + k * n;
            double* ri = a + i * n;
            for (std::size_t j = k + 1; j < n; ++j) ri[j] -= m * rk[j];
        }
    }
    return true;
}

void lu_solve(const double* lu, const std::size_t* piv, std::size_t n,
              const double* b, double* x) {
    if (x != b)
        for (std::size_t i = 0; i < n; ++i) x[i] = b[i];
    for (std::size_t k = 0; k < n; ++k)
        if (piv[k] != k) std::swap(x[k], x[piv[k]]);
    // Ly = Pb
    for (std::size_t i = 1; i < n; ++i) {
        double sum = x[i];
        const double* row = lu + i * n;
        for (std::size_t j = 0; j < i; ++j) sum -= row[j] * x[j];
        x[i] = sum;
    }
    // Ux = y
    for (std::size_t i = n; i-- > 0;) {
        double sum = x[i];
        const double* row = lu + i * n;
        for (std::size_t j = i + 1; j < n; ++j) sum -= row[j] * x[j];
        x[i] = sum / row[i];
    }
}

}  // namespace dsm::kernels::serial
