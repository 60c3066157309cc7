#include "hermitegf/hermite.hpp"

#include <cmath>
#include <numbers>

namespace hermitegf {

namespace {

void recurrence(Matrix& vals, const Vector& xs, int j_max) {
    for (std::size_t p = 0; p < xs.size(); ++p) {
        const double x = xs[p];
        for (int l = 0; l < j_max; ++l) {
            const double next = std::sqrt(2.0 / (l + 1)) * x * vals(p, l) -
                                (l > 0 ? std::sqrt(static_cast<double>(l) / (l + 1)) * vals(p, l - 1)
                                       : 0.0);
            vals(p, l + 1) = next;
        }
    }
}

} // namespace

HermiteTable1D hermite_scaled_1d(const Vector& xs, int j_max) {
    if (j_max < 0) throw DomainError("hermite_scaled_1d: j_max must be >= 0");
    Matrix vals(xs.size(), static_cast<std::size_t>(j_max) + 1);
    for (std::size_t p = 0; p < xs.size(); ++p) vals(p, 0) = 1.0;
    recurrence(vals, xs, j_max);
    return {xs, j_max, std::move(vals), HermiteKind::scaled_polynomial};
}

HermiteTable1D hermite_function_1d(const Vector& ys, int j_max) {
    if (j_max < 0) throw DomainError("hermite_function_1d: j_max must be >= 0");
    const double pi_quarter = std::pow(std::numbers::pi, -0.25);
    Matrix vals(ys.size(), static_cast<std::size_t>(j_max) + 1);
    for (std::size_t p = 0; p < ys.size(); ++p)
        vals(p, 0) = pi_quarter * std::exp(-0.5 * ys[p] * ys[p]);
    recurrence(vals, ys, j_max);
    return {ys, j_max, std::move(vals), HermiteKind::hermite_function};
}

std::pair<double, double> generating_oracle(std::span<const double> a,
                                            std::span<const double> b, int j_max) {
    const int d = static_cast<int>(a.size());
    GradedIndexList idx = enumerate_graded(d, j_max);

    // Scaled values per dimension; the unscaled h_l = h~_l * exp(l/2 ln 2 + 1/2 ln l!)
    // is folded into the coefficient a^l / l! in log space so no factor overflows.
    std::vector<HermiteTable1D> tables;
    tables.reserve(d);
    for (int c = 0; c < d; ++c)
        tables.push_back(hermite_scaled_1d(Vector{b[c]}, j_max));

    constexpr double ln2 = 0.6931471805599453;
    double partial = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        MultiIndex l = idx[i];
        double term = 1.0;
        for (int c = 0; c < d; ++c) {
            const int lc = l[c];
            const double lgf = std::lgamma(static_cast<double>(lc) + 1.0);
            double f = tables[c].values(0, lc) * std::exp(0.5 * (lc * ln2 + lgf) - lgf);
            for (int e = 0; e < lc; ++e) f *= a[c];
            term *= f;
        }
        partial += term;
    }

    double dot = 0.0, an = 0.0;
    for (int c = 0; c < d; ++c) {
        dot += b[c] * a[c];
        an += a[c] * a[c];
    }
    return {partial, std::exp(2.0 * dot - an)};
}

double mehler_partial(std::span<const double> x, std::span<const double> y,
                      double t, int j_max) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("mehler_partial: t must lie in (0,1)");
    const int d = static_cast<int>(x.size());
    GradedIndexList idx = enumerate_graded(d, j_max);
    std::vector<HermiteTable1D> tx, ty;
    for (int c = 0; c < d; ++c) {
        tx.push_back(hermite_scaled_1d(Vector{x[c]}, j_max));
        ty.push_back(hermite_scaled_1d(Vector{y[c]}, j_max));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        MultiIndex l = idx[i];
        double term = std::pow(t, idx.total_degree(i));
        for (int c = 0; c < d; ++c) term *= tx[c].values(0, l[c]) * ty[c].values(0, l[c]);
        sum += term;
    }
    return sum;
}

double mehler_closed(std::span<const double> x, std::span<const double> y, double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("mehler_closed: t must lie in (0,1)");
    const double d = static_cast<double>(x.size());
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
        xy += x[c] * y[c];
        xx += x[c] * x[c];
        yy += y[c] * y[c];
    }
    const double den = 1.0 - t * t;
    return std::exp((2.0 * t * xy - t * t * (xx + yy)) / den) / std::pow(den, d / 2.0);
}

double hlim(std::span<const double> x, const Matrix& e, const Matrix& g, double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("hlim: t must lie in (0,1)");
    const std::size_t d = x.size();
    double quad = 0.0; // x^T E^T E x
    double gx = 0.0;   // ||G^T x||^2
    for (std::size_t i = 0; i < d; ++i) {
        double ex = 0.0, gtx = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            ex += e(i, j) * x[j];
            gtx += g(j, i) * x[j];
        }
        quad += ex * ex;
        gx += gtx * gtx;
    }
    return std::exp(-2.0 * quad + 2.0 * t * gx / (1.0 + t)) /
           std::pow(1.0 - t * t, static_cast<double>(d) / 2.0);
}

} // namespace hermitegf
