#ifndef HERMITEGF_CUTOFF_HPP
#define HERMITEGF_CUTOFF_HPP

#include <utility>
#include <vector>

#include "hermitegf/basis.hpp"
#include "hermitegf/stabilization.hpp"

namespace hermitegf {

struct CutoffConfig {
    double tol = 1e-6;
    int j_start = 0;
    int j_cap = 0;              // 0 = automatic: 60 for d <= 2, else capped so M <= 1e5
    std::vector<double> t_grid; // empty = default 10 uniform values on [0.3, 0.99]
};

std::vector<double> default_t_grid();
int default_j_cap(int d);

struct CutoffResult {
    int j_max = 0;
    std::size_t m = 0;
    double t = 0.0;
    Vector bound_values; // delta-Psi bounds per collocation point at acceptance
    Vector ratios;       // bound / ||Psi-hat row||
    int legacy_j_max = 0;
    bool converged = false;
};

/// Legacy machine-precision criterion: smallest degree such that every
/// D-quotient entry in all later degree blocks (up to j_cap + 1) falls below
/// 2.22e-16. Evaluated entirely in log space.
int legacy_jmax(const ExpansionFactors& factors, double t, std::size_t n, int j_cap);

/// omega_k = sum_i (W1^{-1})^2_{ki}, via pivoted-LU solves of identity columns.
Vector omega_weights(const Matrix& w1);

/// The rescaled truncation constant of the delta-Psi estimate. The first N
/// entries of idx are the row multi-indices; all powers and factorials are
/// accumulated in log space and only the final value is exponentiated.
double truncation_const(int j_max, const Vector& omega, const ExpansionFactors& factors,
                        double t, const GradedIndexList& idx);

/// sqrt(const * max(0, hlim(x - x0) - sum_{|l| <= j_max} H_l(x - x0)^2)).
/// The spec's index list must cover degree j_max; the inner difference is
/// clamped at zero against cancellation.
double delta_psi_bound(std::span<const double> x, int j_max, double const_jmax,
                       const BasisSpec& spec);

/// Smallest degree <= j_cap with max_k ||delta Psi(x_k)|| / ||Psi-hat(x_k)||
/// below tol; M >= N is enforced first. Returns a best-effort result flagged
/// not converged when the cap is reached.
CutoffResult choose_jmax(const PointSet& colloc, const ShapeMatrix& e, const Matrix& g,
                         const Vector& x0, double t, const CutoffConfig& cfg);

/// Scan the t grid and keep the t with the fewest basis functions; ties go to
/// the largest t. Throws CriterionNotMet only when every grid value fails.
std::pair<double, CutoffResult> auto_t(const PointSet& colloc, const ShapeMatrix& e,
                                       const Matrix& g, const Vector& x0,
                                       const CutoffConfig& cfg);

} // namespace hermitegf

#endif
