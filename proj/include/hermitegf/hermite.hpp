#ifndef HERMITEGF_HERMITE_HPP
#define HERMITEGF_HERMITE_HPP

#include <span>
#include <utility>

#include "hermitegf/linalg.hpp"
#include "hermitegf/multiindex.hpp"

namespace hermitegf {

enum class HermiteKind { scaled_polynomial, hermite_function };

/// Table of scaled Hermite polynomial values h_l(x)/sqrt(2^l l!) or Hermite
/// function values psi_l(x), one row per abscissa, one column per degree.
struct HermiteTable1D {
    Vector points;
    int j_max = 0;
    Matrix values; // #points x (j_max + 1)
    HermiteKind kind = HermiteKind::scaled_polynomial;
};

/// Scaled recurrence: h~_{l+1} = sqrt(2/(l+1)) x h~_l - sqrt(l/(l+1)) h~_{l-1},
/// h~_0 = 1. Equivalent to the classic h_{l+1} = 2x h_l - 2l h_{l-1} after
/// dividing by sqrt(2^l l!), but free of the combinatorial overflow.
HermiteTable1D hermite_scaled_1d(const Vector& xs, int j_max);

/// Hermite functions psi_l(y) = pi^{-1/4} h~_l(y) e^{-y^2/2} by the same
/// weighted recurrence; bounded for every y and degree.
HermiteTable1D hermite_function_1d(const Vector& ys, int j_max);

/// Partial sum of sum_l a^l / l! h_l(b) over |l| <= j_max together with the
/// closed form exp(2 b.a - a.a). Test oracle for the expansion machinery;
/// unscaled h_l values are reconstructed from the scaled table in log space.
std::pair<double, double> generating_oracle(std::span<const double> a,
                                            std::span<const double> b, int j_max);

/// Partial sum of the bilinear series sum_l t^{|l|} h_l(x) h_l(y) / (2^{|l|} l!)
/// over |l| <= j_max, evaluated with scaled polynomials.
double mehler_partial(std::span<const double> x, std::span<const double> y,
                      double t, int j_max);

/// Closed form of the bilinear series; requires t in (0,1).
double mehler_closed(std::span<const double> x, std::span<const double> y, double t);

/// Closed-form limit of sum_l H_l^{G,E,t}(x)^2:
/// exp(-2 x^T E^T E x + 2t ||G^T x||^2 / (1+t)) / (1-t^2)^{d/2}.
/// The argument is used as given; callers shift by x0 themselves.
double hlim(std::span<const double> x, const Matrix& e, const Matrix& g, double t);

} // namespace hermitegf

#endif
