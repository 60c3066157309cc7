#ifndef HERMITEGF_LINALG_HPP
#define HERMITEGF_LINALG_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "hermitegf/errors.hpp"

namespace hermitegf {

/// Dense real vector, 64-bit entries.
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t n, double fill = 0.0) : data_(n, fill) {}
    Vector(std::initializer_list<double> init) : data_(init) {}
    explicit Vector(std::vector<double> data) : data_(std::move(data)) {}

    std::size_t size() const { return data_.size(); }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> span() const { return {data_.data(), data_.size()}; }

    bool operator==(const Vector&) const = default;

private:
    std::vector<double> data_;
};

/// Dense real matrix, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> init);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix identity(std::size_t n);
Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
Vector multiply(const Matrix& a, const Vector& x);

struct QrResult {
    Matrix q;       // m x n, orthonormal columns
    Matrix r;       // n x n, upper-triangular, nonnegative diagonal
    bool full_rank; // false when some |r_ii| < 1e-300
};

/// Householder QR of an m x n matrix with m >= n. The diagonal of R is made
/// nonnegative so the factorization is unique and reproducible.
QrResult qr_thin(const Matrix& a);

/// Solve A X = B by row-pivoted Gaussian elimination. Pivot ties break to the
/// smallest row index; pivot magnitudes below 1e-300 raise SingularMatrix.
Matrix solve(const Matrix& a, const Matrix& b);
Vector solve(const Matrix& a, const Vector& b);

/// Compute B A^{-1} without forming the inverse, via A^T X^T = B^T.
Matrix solve_right(const Matrix& b, const Matrix& a);

/// Back-substitution for R1 X = R2 with R1 upper-triangular.
Matrix upper_tri_solve_right(const Matrix& r1, const Matrix& r2);

/// Two-norm condition number via one-sided Jacobi SVD. Returns +inf when the
/// smallest singular value underflows.
double condition_number_2(const Matrix& a);

} // namespace hermitegf

#endif
