#ifndef HERMITEGF_BASIS_HPP
#define HERMITEGF_BASIS_HPP

#include <cstdint>
#include <span>

#include "hermitegf/gaussian.hpp"
#include "hermitegf/hermite.hpp"
#include "hermitegf/linalg.hpp"
#include "hermitegf/multiindex.hpp"

namespace hermitegf {

/// Parameter bundle of the HermiteGF basis H_l^{G,E,t} centered at x0,
/// truncated at total degree j_max. Construction validates t in (0,1) and the
/// invertibility of G, and enumerates the graded index list.
class BasisSpec {
public:
    BasisSpec(ShapeMatrix e, Matrix g, double t, Vector x0, int j_max);

    const ShapeMatrix& e() const { return e_; }
    const Matrix& g() const { return g_; }
    double t() const { return t_; }
    const Vector& x0() const { return x0_; }
    int j_max() const { return j_max_; }
    const GradedIndexList& idx() const { return idx_; }
    int dim() const { return e_.dim(); }
    std::size_t basis_count() const { return idx_.size(); }

private:
    ShapeMatrix e_;
    Matrix g_;
    double t_;
    Vector x0_;
    int j_max_;
    GradedIndexList idx_;
};

/// Component-wise midpoint of the bounding box of a point set; the default
/// expansion center.
Vector default_center(const PointSet& pts);

/// Per-center geometry of the expansion after splitting G^{-1} E^T E into its
/// diagonal and off-diagonal parts. l_scale carries the 1D domain-radius
/// scaling (1 in higher dimensions): C takes powers of v_k / l_scale and D
/// compensates with d_vec * l_scale.
struct ExpansionFactors {
    Vector d_vec;      // diagonal of G^{-1} E^T E
    Matrix rem_factor; // Id + Diag^{-1} Rem
    Matrix g_tilde;    // E^T E G^{-T} G^{-1} E^T E
    Matrix v;          // #centers x d, rows v_k = rem_factor * (x_k - x0)
    Vector expfac;     // exp(-Delta^T E^T E Delta + Delta^T Gtilde Delta)
    double l_scale = 1.0;
};

ExpansionFactors expansion_factors(const PointSet& centers, const BasisSpec& spec);
ExpansionFactors expansion_factors(const PointSet& centers, const ShapeMatrix& e,
                                   const Matrix& g, const Vector& x0);

/// The B^T = C D splitting. D is diagonal and carries all the flat-limit
/// blow-up, so it is stored as sign and log magnitude; every later quotient of
/// D entries is formed by log subtraction.
struct CDFactorization {
    Matrix c;                   // N x M
    Vector d_log;               // M, ln |D_ll|
    std::vector<std::int8_t> d_sign; // M, sign of D_ll
    double l_scale = 1.0;

    double d_entry(std::size_t l) const; // the linear value, may under/overflow
};

CDFactorization build_cd(const PointSet& centers, const BasisSpec& spec,
                         const ExpansionFactors& factors);

/// Values of the stabilizing basis, one point per row, one multi-index per
/// column: H_l(x - x0) evaluated through tensor-product Hermite functions so
/// no intermediate overflows for any degree.
Matrix hermitegf_eval(const PointSet& points, const BasisSpec& spec);

/// The C = diag(Ebar) W splitting of the polynomial factor.
struct VandermondeSplit {
    Vector ebar; // N
    Matrix w;    // N x M, entries v_k^l (with the 1D scaling folded in)
};

VandermondeSplit vandermonde_split(const PointSet& centers, const BasisSpec& spec,
                                   const ExpansionFactors& factors);

/// Truncated expansion of one Gaussian phi_center(x) in the HermiteGF basis;
/// the convergence oracle for the whole machinery.
double expansion_reconstruct(std::span<const double> x, std::span<const double> center,
                             const BasisSpec& spec);

/// hlim at the shifted argument conventions of BasisSpec (no x0 shift applied).
double hlim(std::span<const double> x, const BasisSpec& spec);

} // namespace hermitegf

#endif
