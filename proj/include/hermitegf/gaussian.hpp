#ifndef HERMITEGF_GAUSSIAN_HPP
#define HERMITEGF_GAUSSIAN_HPP

#include <span>

#include "hermitegf/linalg.hpp"

namespace hermitegf {

/// Invertible shape matrix E of the kernel exp(-(x-q)^T E^T E (x-q)).
/// Invertibility is checked at construction; the isotropic kind remembers its
/// epsilon for reporting.
class ShapeMatrix {
public:
    static ShapeMatrix isotropic(int dim, double eps);
    static ShapeMatrix general(Matrix e);

    const Matrix& matrix() const { return e_; }
    const Matrix& gram() const { return ete_; } // E^T E
    int dim() const { return static_cast<int>(e_.rows()); }
    bool is_isotropic() const { return isotropic_; }
    double eps() const { return eps_; }

private:
    ShapeMatrix(Matrix e, bool iso, double eps);
    Matrix e_;
    Matrix ete_;
    bool isotropic_;
    double eps_;
};

/// A set of d-dimensional points, one per row.
struct PointSet {
    int dim = 0;
    Matrix pts; // #points x dim

    std::size_t size() const { return pts.rows(); }
    std::span<const double> point(std::size_t i) const { return pts.row(i); }

    bool operator==(const PointSet&) const = default;
};

/// Kernel matrix with entry (i,k) = exp(-(x_i - c_k)^T E^T E (x_i - c_k)).
Matrix gaussian_matrix(const PointSet& xs, const PointSet& centers, const ShapeMatrix& e);

struct DirectFit {
    Vector coeffs;
    double cond_phi; // kappa_2 of the collocation matrix, for reporting
};

/// RBF-Direct: solve the collocation system Phi alpha = f. Deliberately does
/// nothing about ill-conditioning; its failures in the flat limit are data.
DirectFit rbf_direct_fit(const PointSet& colloc, const Vector& f, const ShapeMatrix& e);

/// Evaluate s(x) = sum_k alpha_k phi_k(x) at the given points.
Vector rbf_direct_eval(const Vector& coeffs, const PointSet& evalpts,
                       const PointSet& centers, const ShapeMatrix& e);

} // namespace hermitegf

#endif
