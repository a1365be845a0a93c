#include "dsm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsm/kernels.hpp"

namespace dsm {

namespace {

void require_same_dim(const Vector& a, const Vector& b, const char* what) {
    if (a.dim() != b.dim())
        throw DimensionMismatch(std::string(what) + ": dims " +
                                std::to_string(a.dim()) + " vs " +
                                std::to_string(b.dim()));
}

}  // namespace

Vector& Vector::operator+=(const Vector& other) {
    require_same_dim(*this, other, "Vector::operator+=");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] += other.entries_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require_same_dim(*this, other, "Vector::operator-=");
    for (std::size_t i = 0; i < entries_.size(); ++i)
        entries_[i] -= other.entries_[i];
    return *this;
}

Vector& Vector::operator*=(double scalar) {
    for (double& e : entries_) e *= scalar;
    return *this;
}

bool Vector::finite() const {
    for (double e : entries_)
        if (!std::isfinite(e)) return false;
    return true;
}

Vector operator+(Vector a, const Vector& b) { a += b; return a; }
Vector operator-(Vector a, const Vector& b) { a -= b; return a; }
Vector operator*(double scalar, Vector a) { a *= scalar; return a; }

double inner(const Vector& a, const Vector& b) {
    require_same_dim(a, b, "inner");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) sum += a[i] * b[i];
    return sum;
}

double norm(const Vector& a) { return std::sqrt(inner(a, a)); }

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(const std::vector<double>& diag) {
    DenseMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

Vector DenseMatrix::matvec(const Vector& x) const {
    if (x.dim() != cols_)
        throw DimensionMismatch("matvec: " + std::to_string(cols_) +
                                " cols vs vector dim " +
                                std::to_string(x.dim()));
    Vector y(rows_);
    kernels::par::matvec(data(), rows_, cols_, x.data(), y.data());
    return y;
}

DenseMatrix DenseMatrix::transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

DenseMatrix DenseMatrix::gram() const {
    DenseMatrix g(cols_, cols_);
    kernels::par::gram(data(), rows_, cols_, g.data());
    return g;
}

void DenseMatrix::add_scaled_identity(double scalar) {
    if (rows_ != cols_)
        throw DimensionMismatch("add_scaled_identity on non-square matrix");
    for (std::size_t i = 0; i < rows_; ++i) entries_[i * cols_ + i] += scalar;
}

double DenseMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (double e : entries_) sum += e * e;
    return std::sqrt(sum);
}

double DenseMatrix::max_abs() const {
    double m = 0.0;
    for (double e : entries_) m = std::fmax(m, std::fabs(e));
    return m;
}

bool DenseMatrix::finite() const {
    for (double e : entries_)
        if (!std::isfinite(e)) return false;
    return true;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("matrix addition shape mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) += b(i, j);
    return a;
}

DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("matrix subtraction shape mismatch");
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= b(i, j);
    return a;
}

Vector solve(const DenseMatrix& m, const Vector& rhs) {
    DenseMatrix scratch = m;
    Vector x = rhs;
    std::vector<std::size_t> piv(m.rows());
    solve_in_place(scratch, x, piv);
    return x;
}

void solve_in_place(DenseMatrix& m, Vector& x, std::vector<std::size_t>& piv) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("solve: matrix not square");
    if (m.rows() != x.dim())
        throw DimensionMismatch("solve: rhs dim " + std::to_string(x.dim()) +
                                " vs matrix " + std::to_string(m.rows()));
    const std::size_t n = m.rows();
    if (piv.size() < n) piv.resize(n);
    if (!kernels::par::lu_factor(m.data(), n, piv.data()))
        throw SingularMatrix("matrix singular to working precision (n=" +
                             std::to_string(n) + ")");
    kernels::par::lu_solve(m.data(), piv.data(), n, x.data(), x.data());
    if (!x.finite())
        throw SingularMatrix("solve produced non-finite entries");
}

namespace {

// One cyclic Jacobi sweep; returns the off-diagonal Frobenius mass after.
double jacobi_sweep(DenseMatrix& a) {
    const std::size_t n = a.rows();
    for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const double apq = a(p, q);
            if (apq == 0.0) continue;
            const double app = a(p, p);
            const double aqq = a(q, q);
            const double theta = (aqq - app) / (2.0 * apq);
            const double t = (theta >= 0.0)
                ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            for (std::size_t k = 0; k < n; ++k) {
                const double akp = a(k, p);
                const double akq = a(k, q);
                a(k, p) = c * akp - s * akq;
                a(k, q) = s * akp + c * akq;
            }
            for (std::size_t k = 0; k < n; ++k) {
                const double apk = a(p, k);
                const double aqk = a(q, k);
                a(p, k) = c * apk - s * aqk;
                a(q, k) = s * apk + c * aqk;
            }
        }
    }
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) off += a(i, j) * a(i, j);
    return std::sqrt(off);
}

}  // namespace

std::vector<double> symmetric_eigenvalues(const DenseMatrix& a) {
    if (a.rows() != a.cols())
        throw DimensionMismatch("symmetric_eigenvalues: matrix not square");
    const std::size_t n = a.rows();
    DenseMatrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            w(i, j) = 0.5 * (a(i, j) + a(j, i));
    const double scale = w.frobenius_norm();
    const double tol = 1e-14 * std::max(scale, 1e-300);
    for (int sweep = 0; sweep < 50; ++sweep)
        if (jacobi_sweep(w) <= tol) break;
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = w(i, i);
    std::sort(eig.begin(), eig.end());
    return eig;
}

double symmetric_min_eigenvalue(const DenseMatrix& a) {
    return symmetric_eigenvalues(a).front();
}

double symmetric_max_eigenvalue(const DenseMatrix& a) {
    return symmetric_eigenvalues(a).back();
}

double condition_number(const DenseMatrix& a) {
    std::vector<double> eig = symmetric_eigenvalues(a.gram());
    const double smax = std::sqrt(std::fmax(eig.back(), 0.0));
    if (smax == 0.0) return std::numeric_limits<double>::infinity();
    const double floor = smax * std::numeric_limits<double>::epsilon();
    const double smin = std::fmax(std::sqrt(std::fmax(eig.front(), 0.0)), floor);
    return smax / smin;
}

}  // namespace dsm
