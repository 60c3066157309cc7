#include "hermitegf/gaussian.hpp"

#include <cmath>
#include <string>

namespace hermitegf {

namespace {

void check_invertible(const Matrix& m, const char* what) {
    // LU with partial pivoting; only the pivot magnitudes matter here.
    const std::size_t n = m.rows();
    Matrix w = m;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(w(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(w(i, k)) > best) { best = std::abs(w(i, k)); piv = i; }
        if (best < 1e-300)
            throw SingularMatrix(std::string(what) + ": matrix is numerically singular");
        if (piv != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(w(k, j), w(piv, j));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = w(i, k) / w(k, k);
            for (std::size_t j = k + 1; j < n; ++j) w(i, j) -= l * w(k, j);
        }
    }
}

} // namespace

ShapeMatrix::ShapeMatrix(Matrix e, bool iso, double eps)
    : e_(std::move(e)), isotropic_(iso), eps_(eps) {
    if (e_.rows() != e_.cols() || e_.rows() == 0)
        throw DomainError("ShapeMatrix: E must be square and nonempty");
    check_invertible(e_, "ShapeMatrix");
    ete_ = multiply(transpose(e_), e_);
}

ShapeMatrix ShapeMatrix::isotropic(int dim, double eps) {
    if (!(eps > 0.0)) throw DomainError("ShapeMatrix: isotropic eps must be > 0");
    Matrix e = identity(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) e(i, i) = eps;
    return ShapeMatrix(std::move(e), true, eps);
}

ShapeMatrix ShapeMatrix::general(Matrix e) {
    return ShapeMatrix(std::move(e), false, 0.0);
}

Matrix gaussian_matrix(const PointSet& xs, const PointSet& centers, const ShapeMatrix& e) {
    if (xs.dim != centers.dim || xs.dim != e.dim())
        throw DomainError("gaussian_matrix: dimension mismatch");
    const std::size_t d = static_cast<std::size_t>(xs.dim);
    const Matrix& gram = e.gram();
    Matrix phi(xs.size(), centers.size());
    std::vector<double> r(d);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto x = xs.point(i);
        for (std::size_t k = 0; k < centers.size(); ++k) {
            auto c = centers.point(k);
            for (std::size_t a = 0; a < d; ++a) r[a] = x[a] - c[a];
            double q = 0.0;
            for (std::size_t a = 0; a < d; ++a) {
                double s = 0.0;
                for (std::size_t b = 0; b < d; ++b) s += gram(a, b) * r[b];
                q += r[a] * s;
            }
            phi(i, k) = std::exp(-q);
        }
    }
    return phi;
}

DirectFit rbf_direct_fit(const PointSet& colloc, const Vector& f, const ShapeMatrix& e) {
    if (colloc.size() != f.size())
        throw DomainError("rbf_direct_fit: data length differs from point count");
    Matrix phi = gaussian_matrix(colloc, colloc, e);
    const double cond = condition_number_2(phi);
    Vector alpha = solve(phi, f);
    return {std::move(alpha), cond};
}

Vector rbf_direct_eval(const Vector& coeffs, const PointSet& evalpts,
                       const PointSet& centers, const ShapeMatrix& e) {
    if (coeffs.size() != centers.size())
        throw DomainError("rbf_direct_eval: coefficient count differs from center count");
    Matrix phi = gaussian_matrix(evalpts, centers, e);
    return multiply(phi, coeffs);
}

} // namespace hermitegf
