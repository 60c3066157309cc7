#ifndef HERMITEGF_STABILIZATION_HPP
#define HERMITEGF_STABILIZATION_HPP

#include "hermitegf/basis.hpp"

namespace hermitegf {

/// The stabilized basis Psi in factored form: Psi(x)^T = [Id | K] H(x - x0)^T
/// with K = (R1^{-1} R2) .* Dtilde. Column j of K belongs to multi-index
/// idx[N + j] of the spec's graded list.
struct StableBasis {
    BasisSpec spec;
    PointSet centers;
    Matrix k;       // N x (M - N)
    double cond_r1; // conditioning of the triangular factor, for diagnostics
};

/// Assemble the stable basis from the C/D splitting: QR of C, triangular
/// right-solve for R1^{-1} R2, and the Hadamard product with the log-space
/// D-quotients.
StableBasis build_stable_basis(const PointSet& centers, const BasisSpec& spec);

/// Psi values, one row per point, one column per stable basis function.
Matrix psi_matrix(const PointSet& points, const StableBasis& basis);

/// Same basis through the Vandermonde splitting C = Ebar W instead of QR;
/// identical in exact arithmetic, used by the truncation analysis.
Matrix psi_matrix_vandermonde(const PointSet& points, const PointSet& centers,
                              const BasisSpec& spec);

/// Correction block of the Vandermonde path, K_V = (W1^{-1} W2) .* Dtilde.
Matrix vandermonde_correction(const PointSet& centers, const BasisSpec& spec);

/// The 1D closed form of the D-quotient matrix,
/// (eps^2 L / gamma * sqrt(2/t))^{N+j-i} * sqrt(i! / (N+j)!).
/// With 0-based i and j this equals the production log-space quotient.
double dtilde_closed_form_1d(int i, int j, int n, double eps, double gamma, double t,
                             double l_scale);

/// Fitted interpolation model. The coefficient solve is deferred: evaluation
/// always forms Psi(eval) Psi(col)^{-1} first and touches f last.
struct Interpolant {
    StableBasis basis;
    PointSet colloc;
    Vector fvals;
    Matrix psi_col; // N x N
};

Interpolant fit(const PointSet& colloc, const Vector& f, const StableBasis& basis);

Vector evaluate(const Interpolant& ip, const PointSet& evalpts);

} // namespace hermitegf

#endif
