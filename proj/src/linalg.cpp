#include "hermitegf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hermitegf {

namespace {
constexpr double kPivotFloor = 1e-300;
} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_)
        throw DomainError("Matrix: storage size does not match rows*cols");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : init) {
        if (r.size() != cols_) throw DomainError("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DomainError("multiply: inner dimensions differ");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Vector multiply(const Matrix& a, const Vector& x) {
    if (a.cols() != x.size()) throw DomainError("multiply: dimensions differ");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

QrResult qr_thin(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m < n) throw DomainError("qr_thin: requires rows >= cols");

    Matrix work = a;
    // Householder vectors, one per column, stored dense.
    std::vector<std::vector<double>> vs(n);

    for (std::size_t k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) norm2 += work(i, k) * work(i, k);
        const double alpha = std::sqrt(norm2);
        std::vector<double>& v = vs[k];
        v.assign(m - k, 0.0);
        if (alpha > 0.0) {
            const double beta = work(k, k) >= 0.0 ? alpha : -alpha;
            for (std::size_t i = k; i < m; ++i) v[i - k] = work(i, k);
            v[0] += beta;
            double vnorm2 = 0.0;
            for (double t : v) vnorm2 += t * t;
            if (vnorm2 > 0.0) {
                for (std::size_t j = k; j < n; ++j) {
                    double dot = 0.0;
                    for (std::size_t i = k; i < m; ++i) dot += v[i - k] * work(i, j);
                    const double f = 2.0 * dot / vnorm2;
                    for (std::size_t i = k; i < m; ++i) work(i, j) -= f * v[i - k];
                }
                work(k, k) = -beta; // exact value; clears roundoff below the diagonal
                for (std::size_t i = k + 1; i < m; ++i) work(i, k) = 0.0;
            }
        }
    }

    Matrix r(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) r(i, j) = work(i, j);

    // Q = H_0 ... H_{n-1} applied to the first n columns of the identity.
    Matrix q(m, n);
    for (std::size_t j = 0; j < n; ++j) q(j, j) = 1.0;
    for (std::size_t k = n; k-- > 0;) {
        const std::vector<double>& v = vs[k];
        double vnorm2 = 0.0;
        for (double t : v) vnorm2 += t * t;
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i - k] * q(i, j);
            const double f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) q(i, j) -= f * v[i - k];
        }
    }

    // Fix the sign convention: diagonal of R nonnegative.
    bool full_rank = true;
    for (std::size_t k = 0; k < n; ++k) {
        if (r(k, k) < 0.0) {
            for (std::size_t j = k; j < n; ++j) r(k, j) = -r(k, j);
            for (std::size_t i = 0; i < m; ++i) q(i, k) = -q(i, k);
        }
        if (std::abs(r(k, k)) < kPivotFloor) full_rank = false;
    }
    return {std::move(q), std::move(r), full_rank};
}

namespace {

struct LuFactors {
    Matrix lu;
    std::vector<std::size_t> perm;
};

LuFactors lu_factor(const Matrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw DomainError("solve: matrix must be square");
    LuFactors f{a, std::vector<std::size_t>(n)};
    std::iota(f.perm.begin(), f.perm.end(), std::size_t{0});
    Matrix& lu = f.lu;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu(i, k));
            if (v > best) { best = v; piv = i; } // strict '>' keeps the smallest index on ties
        }
        if (best < kPivotFloor)
            throw SingularMatrix("solve: pivot " + std::to_string(k) + " below 1e-300");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        const double inv = 1.0 / lu(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = lu(i, k) * inv;
            lu(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= l * lu(k, j);
        }
    }
    return f;
}

void lu_solve_inplace(const LuFactors& f, const Matrix& b, Matrix& x) {
    const std::size_t n = f.lu.rows(), k = b.cols();
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t i = 0; i < n; ++i) x(i, c) = b(f.perm[i], c);
        for (std::size_t i = 1; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x(j, c);
            x(i, c) = s;
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x(i, c);
            for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x(j, c);
            x(i, c) = s / f.lu(i, i);
        }
    }
}

} // namespace

Matrix solve(const Matrix& a, const Matrix& b) {
    if (b.rows() != a.rows()) throw DomainError("solve: rhs row count differs");
    LuFactors f = lu_factor(a);
    Matrix x(b.rows(), b.cols());
    lu_solve_inplace(f, b, x);
    return x;
}

Vector solve(const Matrix& a, const Vector& b) {
    Matrix rhs(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
    Matrix x = solve(a, rhs);
    Vector out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = x(i, 0);
    return out;
}

Matrix solve_right(const Matrix& b, const Matrix& a) {
    if (b.cols() != a.rows()) throw DomainError("solve_right: dimensions differ");
    Matrix xt = solve(transpose(a), transpose(b));
    return transpose(xt);
}

Matrix upper_tri_solve_right(const Matrix& r1, const Matrix& r2) {
    const std::size_t n = r1.rows();
    if (r1.cols() != n) throw DomainError("upper_tri_solve_right: R1 must be square");
    if (r2.rows() != n) throw DomainError("upper_tri_solve_right: R2 row count differs");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(r1(i, i)) < kPivotFloor)
            throw SingularMatrix("upper_tri_solve_right: zero diagonal at " + std::to_string(i));
    Matrix x(n, r2.cols());
    for (std::size_t c = 0; c < r2.cols(); ++c) {
        for (std::size_t i = n; i-- > 0;) {
            double s = r2(i, c);
            for (std::size_t j = i + 1; j < n; ++j) s -= r1(i, j) * x(j, c);
            x(i, c) = s / r1(i, i);
        }
    }
    return x;
}

double condition_number_2(const Matrix& a) {
    // One-sided Jacobi: orthogonalize columns, singular values are the final
    // column norms. Small singular values come out with good relative accuracy,
    // which the flat-limit condition reporting relies on.
    Matrix w = a.rows() >= a.cols() ? a : transpose(a);
    const std::size_t m = w.rows(), n = w.cols();
    if (n == 0) return 1.0;

    std::vector<double> sq(n);
    auto colsq = [&](std::size_t j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += w(i, j) * w(i, j);
        return s;
    };
    for (std::size_t j = 0; j < n; ++j) sq[j] = colsq(j);

    const double tol = 1e-14;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double dot = 0.0;
                for (std::size_t i = 0; i < m; ++i) dot += w(i, p) * w(i, q);
                if (std::abs(dot) <= tol * std::sqrt(sq[p] * sq[q])) continue;
                rotated = true;
                const double tau = (sq[q] - sq[p]) / (2.0 * dot);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double wp = w(i, p), wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                sq[p] = colsq(p);
                sq[q] = colsq(q);
            }
        }
        if (!rotated) break;
    }

    double smax = 0.0, smin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        const double s = std::sqrt(sq[j]);
        smax = std::max(smax, s);
        smin = std::min(smin, s);
    }
    if (smin < kPivotFloor || !(smin > 0.0))
        return std::numeric_limits<double>::infinity();
    return smax / smin;
}

} // namespace hermitegf
