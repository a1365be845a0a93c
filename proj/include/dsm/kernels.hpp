#ifndef DSM_KERNELS_HPP
#define DSM_KERNELS_HPP

#include <cstddef>

// Dense kernels in two interchangeable flavors. `serial` is the reference
// implementation; `par` adds OpenMP worksharing over independent output
// rows, so for a fixed input both flavors produce bit-identical results.
// The parallel versions fall back to the serial loop below the cutoffs.

namespace dsm::kernels {

// Problem sizes below these delegate to the serial kernels before any
// OpenMP construct is entered; even an empty parallel region costs
// microseconds, which the ODE right-hand side cannot afford at small n.
// The LU crossover is high because its per-step barriers only amortize
// on large trailing submatrices.
inline constexpr std::size_t kMatvecCutoff = 1u << 17;  // rows*cols
inline constexpr std::size_t kGramCutoff = 1u << 13;    // rows*cols
inline constexpr std::size_t kLuCutoff = 512;           // n

namespace serial {

/// y = A x for row-major A (rows x cols).
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);

/// b = A^T A (cols x cols, row-major) for row-major A (rows x cols).
void gram(const double* a, std::size_t rows, std::size_t cols, double* b);

/// In-place LU factorization with partial pivoting, L unit lower.
/// piv[k] records the row swapped into position k at step k.
/// Returns false if a pivot is negligible relative to the matrix scale.
bool lu_factor(double* a, std::size_t n, std::size_t* piv);

/// Solve LU x = P b given factors from lu_factor. x may alias b.
void lu_solve(const double* lu, const std::size_t* piv, std::size_t n,
              const double* b, double* x);

}  // namespace serial

namespace par {

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* y);
void gram(const double* a, std::size_t rows, std::size_t cols, double* b);
bool lu_factor(double* a, std::size_t n, std::size_t* piv);
void lu_solve(const double* lu, const std::size_t* piv, std::size_t n,
              const double* b, double* x);

}  // namespace par

}  // namespace dsm::kernels

#endif  // DSM_KERNELS_HPP
