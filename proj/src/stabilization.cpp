#include "hermitegf/stabilization.hpp"

#include <cmath>
#include <string>

namespace hermitegf {

namespace {

/// Hadamard product of a correction factor with the D-quotients
/// Dtilde[i][j] = D_{N+j} / D_i, formed in log space.
Matrix apply_dtilde(const Matrix& base, const CDFactorization& cd, std::size_t n) {
    const std::size_t m = cd.d_log.size();
    Matrix k(n, m - n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j + n < m; ++j) {
            const double mag = std::exp(cd.d_log[n + j] - cd.d_log[i]);
            const double sgn = static_cast<double>(cd.d_sign[n + j] * cd.d_sign[i]);
            k(i, j) = base(i, j) * sgn * mag;
        }
    return k;
}

} // namespace

StableBasis build_stable_basis(const PointSet& centers, const BasisSpec& spec) {
    const std::size_t n = centers.size();
    const std::size_t m = spec.basis_count();
    if (m < n)
        throw InsufficientBasis("build_stable_basis: M = " + std::to_string(m) +
                                " basis functions for N = " + std::to_string(n) + " points");

    ExpansionFactors factors = expansion_factors(centers, spec);
    CDFactorization cd = build_cd(centers, spec, factors);

    Matrix c1(n, n), c2(n, m - n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c1(i, j) = cd.c(i, j);
        for (std::size_t j = n; j < m; ++j) c2(i, j - n) = cd.c(i, j);
    }

    QrResult qr = qr_thin(c1);
    if (!qr.full_rank)
        throw RankDeficientC("build_stable_basis: R1 has a vanishing diagonal entry "
                             "(degenerate node layout)");
    Matrix r2 = multiply(transpose(qr.q), c2);
    Matrix rtilde = upper_tri_solve_right(qr.r, r2);
    Matrix k = apply_dtilde(rtilde, cd, n);
    const double cond_r1 = condition_number_2(qr.r);
    return {spec, centers, std::move(k), cond_r1};
}

Matrix psi_matrix(const PointSet& points, const StableBasis& basis) {
    const std::size_t n = basis.centers.size();
    const std::size_t m = basis.spec.basis_count();
    Matrix h = hermitegf_eval(points, basis.spec);
    Matrix psi(points.size(), n);
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = h(p, i);
            for (std::size_t j = 0; j + n < m; ++j) s += basis.k(i, j) * h(p, n + j);
            psi(p, i) = s;
        }
    }
    return psi;
}

Matrix vandermonde_correction(const PointSet& centers, const BasisSpec& spec) {
    const std::size_t n = centers.size();
    const std::size_t m = spec.basis_count();
    if (m < n)
        throw InsufficientBasis("vandermonde_correction: fewer basis functions than points");
    ExpansionFactors factors = expansion_factors(centers, spec);
    CDFactorization cd = build_cd(centers, spec, factors);
    VandermondeSplit vs = vandermonde_split(centers, spec, factors);

    Matrix w1(n, n), w2(n, m - n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) w1(i, j) = vs.w(i, j);
        for (std::size_t j = n; j < m; ++j) w2(i, j - n) = vs.w(i, j);
    }
    Matrix base;
    try {
        base = solve(w1, w2);
    } catch (const SingularMatrix& e) {
        throw SingularVandermonde(std::string("vandermonde_correction: ") + e.what());
    }
    return apply_dtilde(base, cd, n);
}

Matrix psi_matrix_vandermonde(const PointSet& points, const PointSet& centers,
                              const BasisSpec& spec) {
    const std::size_t n = centers.size();
    const std::size_t m = spec.basis_count();
    Matrix k = vandermonde_correction(centers, spec);
    Matrix h = hermitegf_eval(points, spec);
    Matrix psi(points.size(), n);
    for (std::size_t p = 0; p < points.size(); ++p)
        for (std::size_t i = 0; i < n; ++i) {
            double s = h(p, i);
            for (std::size_t j = 0; j + n < m; ++j) s += k(i, j) * h(p, n + j);
            psi(p, i) = s;
        }
    return psi;
}

double dtilde_closed_form_1d(int i, int j, int n, double eps, double gamma, double t,
                             double l_scale) {
    const double base = eps * eps * l_scale / gamma * std::sqrt(2.0 / t);
    const int power = n + j - i;
    const double log_mag = power * std::log(base) +
                           0.5 * (std::lgamma(i + 1.0) - std::lgamma(n + j + 1.0));
    return std::exp(log_mag);
}

Interpolant fit(const PointSet& colloc, const Vector& f, const StableBasis& basis) {
    if (!(colloc == basis.centers))
        throw DomainError("fit: collocation points must coincide with the basis centers");
    if (f.size() != colloc.size())
        throw DomainError("fit: data length differs from point count");
    Matrix psi_col = psi_matrix(colloc, basis);
    return {basis, colloc, f, std::move(psi_col)};
}

Vector evaluate(const Interpolant& ip, const PointSet& evalpts) {
    Matrix psi_eval = psi_matrix(evalpts, ip.basis);
    Matrix quotient;
    try {
        quotient = solve_right(psi_eval, ip.psi_col);
    } catch (const SingularMatrix&) {
        throw SingularMatrix("evaluate: collocation Psi is numerically singular, kappa_2 = " +
                             std::to_string(condition_number_2(ip.psi_col)));
    }
    return multiply(quotient, ip.fvals);
}

} // namespace hermitegf
