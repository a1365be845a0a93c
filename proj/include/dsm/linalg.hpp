#ifndef DSM_LINALG_HPP
#define DSM_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "dsm/errors.hpp"

// Minimal dense real linear algebra: the coordinate representation of the
// discretized Hilbert space, plus the direct solves every other module
// builds on. Values are immutable in spirit: operations return fresh
// objects and never mutate their inputs.

namespace dsm {

class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim, double value = 0.0)
        : entries_(dim, value) {}
    Vector(std::initializer_list<double> init) : entries_(init) {}
    explicit Vector(std::vector<double> entries)
        : entries_(std::move(entries)) {}

    std::size_t dim() const { return entries_.size(); }
    double& operator[](std::size_t i) { return entries_[i]; }
    const double& operator[](std::size_t i) const { return entries_[i]; }
    double* data() { return entries_.data(); }
    const double* data() const { return entries_.data(); }
    const std::vector<double>& entries() const { return entries_; }

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double scalar);

    /// True if every entry is finite.
    bool finite() const;

private:
    std::vector<double> entries_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double scalar, Vector a);

/// Euclidean inner product; throws DimensionMismatch.
double inner(const Vector& a, const Vector& b);

/// Euclidean norm, sqrt(inner(a, a)).
double norm(const Vector& a);

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), entries_(rows * cols, value) {}

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(const std::vector<double>& diag);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) {
        return entries_[i * cols_ + j];
    }
    const double& operator()(std::size_t i, std::size_t j) const {
        return entries_[i * cols_ + j];
    }
    double* data() { return entries_.data(); }
    const double* data() const { return entries_.data(); }

    Vector matvec(const Vector& x) const;
    DenseMatrix transpose() const;
    /// A^T A of this matrix.
    DenseMatrix gram() const;
    /// this += scalar * I (square only).
    void add_scaled_identity(double scalar);

    double frobenius_norm() const;
    double max_abs() const;
    bool finite() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> entries_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);

/// Direct solve M x = rhs by LU with partial pivoting.
/// Throws SingularMatrix when M is singular to working precision.
Vector solve(const DenseMatrix& m, const Vector& rhs);

/// As `solve`, but destroys `m` (used as factorization scratch) and writes
/// the solution over `x`, which carries the right-hand side on entry.
/// `piv` must have at least m.rows() entries. Allocation-free.
void solve_in_place(DenseMatrix& m, Vector& x, std::vector<std::size_t>& piv);

/// All eigenvalues of a symmetric matrix by the cyclic Jacobi method,
/// ascending. The input is symmetrized as (A + A^T)/2 first.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& a);

/// Extremes of symmetric_eigenvalues.
double symmetric_min_eigenvalue(const DenseMatrix& a);
double symmetric_max_eigenvalue(const DenseMatrix& a);

/// Spectral condition number sqrt(lmax/lmin) of A via the eigenvalues of
/// A^T A, with the smallest singular value floored at machine precision
/// relative to the largest.
double condition_number(const DenseMatrix& a);

}  // namespace dsm

#endif  // DSM_LINALG_HPP
