#include "hermitegf/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace hermitegf {

namespace {
constexpr double ln2 = 0.6931471805599453;
constexpr double kExpLimit = 709.0; // ln(DBL_MAX) minus a little headroom
} // namespace

BasisSpec::BasisSpec(ShapeMatrix e, Matrix g, double t, Vector x0, int j_max)
    : e_(std::move(e)), g_(std::move(g)), t_(t), x0_(std::move(x0)), j_max_(j_max) {
    if (!(t_ > 0.0 && t_ < 1.0)) throw DomainError("BasisSpec: t must lie in (0,1)");
    if (g_.rows() != g_.cols() || static_cast<int>(g_.rows()) != e_.dim())
        throw DomainError("BasisSpec: G must be d x d");
    if (x0_.size() != static_cast<std::size_t>(e_.dim()))
        throw DomainError("BasisSpec: x0 dimension mismatch");
    // reuse the LU probe in solve(): G^{-1} is needed throughout anyway
    solve(g_, identity(g_.rows()));
    idx_ = enumerate_graded(e_.dim(), j_max_);
}

Vector default_center(const PointSet& pts) {
    const std::size_t d = static_cast<std::size_t>(pts.dim);
    Vector lo(d), hi(d);
    for (std::size_t c = 0; c < d; ++c) {
        lo[c] = pts.pts(0, c);
        hi[c] = pts.pts(0, c);
    }
    for (std::size_t i = 1; i < pts.size(); ++i)
        for (std::size_t c = 0; c < d; ++c) {
            lo[c] = std::min(lo[c], pts.pts(i, c));
            hi[c] = std::max(hi[c], pts.pts(i, c));
        }
    Vector mid(d);
    for (std::size_t c = 0; c < d; ++c) mid[c] = 0.5 * (lo[c] + hi[c]);
    return mid;
}

ExpansionFactors expansion_factors(const PointSet& centers, const ShapeMatrix& e,
                                   const Matrix& g, const Vector& x0) {
    const std::size_t d = static_cast<std::size_t>(e.dim());
    if (centers.dim != e.dim()) throw DomainError("expansion_factors: dimension mismatch");

    const Matrix& gram = e.gram();           // E^T E
    Matrix m = solve(g, gram);               // G^{-1} E^T E
    Vector d_vec(d);
    for (std::size_t i = 0; i < d; ++i) {
        d_vec[i] = m(i, i);
        if (std::abs(d_vec[i]) < 1e-300)
            throw DegenerateDiagonal("expansion_factors: diagonal entry " +
                                     std::to_string(i) + " of G^-1 E^T E vanishes");
    }
    Matrix rem_factor(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            rem_factor(i, j) = i == j ? 1.0 : m(i, j) / d_vec[i];

    Matrix g_tilde = multiply(transpose(m), m);

    const std::size_t n = centers.size();
    Matrix v(n, d);
    Vector expfac(n);
    std::vector<double> delta(d);
    double max_abs_delta = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < d; ++c) {
            delta[c] = centers.pts(k, c) - x0[c];
            max_abs_delta = std::max(max_abs_delta, std::abs(delta[c]));
        }
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += rem_factor(i, j) * delta[j];
            v(k, i) = s;
        }
        double q = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double se = 0.0, sg = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                se += gram(i, j) * delta[j];
                sg += g_tilde(i, j) * delta[j];
            }
            q += delta[i] * (sg - se);
        }
        if (q > kExpLimit)
            throw ExponentOverflow("expansion_factors: exponential factor overflows at center " +
                                   std::to_string(k));
        expfac[k] = std::exp(q);
    }

    ExpansionFactors f{std::move(d_vec), std::move(rem_factor), std::move(g_tilde),
                       std::move(v), std::move(expfac), 1.0};
    if (d == 1 && max_abs_delta > 0.0) f.l_scale = max_abs_delta;
    return f;
}

ExpansionFactors expansion_factors(const PointSet& centers, const BasisSpec& spec) {
    return expansion_factors(centers, spec.e(), spec.g(), spec.x0());
}

double CDFactorization::d_entry(std::size_t l) const {
    return static_cast<double>(d_sign[l]) * std::exp(d_log[l]);
}

CDFactorization build_cd(const PointSet& centers, const BasisSpec& spec,
                         const ExpansionFactors& factors) {
    const std::size_t n = centers.size();
    const std::size_t d = static_cast<std::size_t>(spec.dim());
    const GradedIndexList& idx = spec.idx();
    const std::size_t m = idx.size();
    const double l_scale = factors.l_scale;

    CDFactorization cd;
    cd.l_scale = l_scale;
    cd.c = Matrix(n, m);
    cd.d_log = Vector(m);
    cd.d_sign.assign(m, 1);

    std::vector<double> v_eff(d);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < d; ++c) v_eff[c] = factors.v(k, c) / l_scale;
        for (std::size_t l = 0; l < m; ++l)
            cd.c(k, l) = factors.expfac[k] * pow_multi(v_eff, idx[l]);
    }

    // D_ll = (d_vec * L)^l sqrt(2^{|l|}) / sqrt(t^{|l|} l!), kept in log form
    std::vector<double> log_abs_d(d);
    std::vector<int> sgn_d(d);
    for (std::size_t c = 0; c < d; ++c) {
        const double de = factors.d_vec[c] * l_scale;
        log_abs_d[c] = std::log(std::abs(de));
        sgn_d[c] = de < 0.0 ? -1 : 1;
    }
    const double log_t = std::log(spec.t());
    for (std::size_t l = 0; l < m; ++l) {
        MultiIndex mi = idx[l];
        const int total = idx.total_degree(l);
        double lg = 0.5 * (total * ln2 - total * log_t) - 0.5 * log_factorial_multi(mi);
        int sign = 1;
        for (std::size_t c = 0; c < d; ++c) {
            lg += mi[c] * log_abs_d[c];
            if (sgn_d[c] < 0 && (mi[c] & 1)) sign = -sign;
        }
        cd.d_log[l] = lg;
        cd.d_sign[l] = static_cast<std::int8_t>(sign);
    }
    return cd;
}

Matrix hermitegf_eval(const PointSet& points, const BasisSpec& spec) {
    const std::size_t d = static_cast<std::size_t>(spec.dim());
    if (points.dim != spec.dim()) throw DomainError("hermitegf_eval: dimension mismatch");
    const GradedIndexList& idx = spec.idx();
    const std::size_t m = idx.size();
    const int j_max = spec.j_max();

    // x^T (GG^T/2 - E^T E) x. The Hermite-function identity
    // h~_l(G^T x) = pi^{d/4} psi_l(G^T x) e^{+||G^T x||^2 / 2} forces this sign.
    const Matrix& g = spec.g();
    Matrix a = multiply(g, transpose(g));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) = 0.5 * a(i, j) - spec.e().gram()(i, j);

    const double log_t = std::log(spec.t());
    const double log_pi_term = 0.25 * d * std::log(std::numbers::pi);

    Matrix out(points.size(), m);
    std::vector<double> dx(d);
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t c = 0; c < d; ++c) dx[c] = points.pts(p, c) - spec.x0()[c];
        Vector y(d);
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += g(j, i) * dx[j];
            y[i] = s;
        }
        double q = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += a(i, j) * dx[j];
            q += dx[i] * s;
        }
        if (q + log_pi_term > kExpLimit)
            throw ExponentOverflow("hermitegf_eval: scalar exponential overflows at point " +
                                   std::to_string(p));
        HermiteTable1D psi = hermite_function_1d(y, j_max);
        std::vector<double> degree_scale(static_cast<std::size_t>(j_max) + 1);
        for (int s = 0; s <= j_max; ++s)
            degree_scale[static_cast<std::size_t>(s)] =
                std::exp(q + log_pi_term + 0.5 * s * log_t);
        for (std::size_t l = 0; l < m; ++l) {
            MultiIndex mi = idx[l];
            double prod = 1.0;
            for (std::size_t c = 0; c < d; ++c) prod *= psi.values(c, mi[c]);
            out(p, l) = prod * degree_scale[static_cast<std::size_t>(idx.total_degree(l))];
        }
    }
    return out;
}

VandermondeSplit vandermonde_split(const PointSet& centers, const BasisSpec& spec,
                                   const ExpansionFactors& factors) {
    const std::size_t n = centers.size();
    const std::size_t d = static_cast<std::size_t>(spec.dim());
    const GradedIndexList& idx = spec.idx();
    VandermondeSplit vs;
    vs.ebar = factors.expfac;
    vs.w = Matrix(n, idx.size());
    std::vector<double> v_eff(d);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < d; ++c) v_eff[c] = factors.v(k, c) / factors.l_scale;
        for (std::size_t l = 0; l < idx.size(); ++l)
            vs.w(k, l) = pow_multi(v_eff, idx[l]);
    }
    return vs;
}

double expansion_reconstruct(std::span<const double> x, std::span<const double> center,
                             const BasisSpec& spec) {
    const std::size_t d = static_cast<std::size_t>(spec.dim());
    PointSet single{spec.dim(), Matrix(1, d)};
    for (std::size_t c = 0; c < d; ++c) single.pts(0, c) = center[c];
    ExpansionFactors f = expansion_factors(single, spec);

    PointSet xp{spec.dim(), Matrix(1, d)};
    for (std::size_t c = 0; c < d; ++c) xp.pts(0, c) = x[c];
    Matrix h = hermitegf_eval(xp, spec);

    // coefficient of H_l: (G^-1 E^T E Delta)^l sqrt(2^{|l|}) / sqrt(t^{|l|} l!)
    // with (G^-1 E^T E Delta)^l = d_vec^l v^l
    std::vector<double> w(d);
    for (std::size_t c = 0; c < d; ++c) w[c] = f.d_vec[c] * f.v(0, c);
    const GradedIndexList& idx = spec.idx();
    const double log_t = std::log(spec.t());
    double sum = 0.0;
    for (std::size_t l = 0; l < idx.size(); ++l) {
        MultiIndex mi = idx[l];
        const int total = idx.total_degree(l);
        double log_mag = 0.5 * (total * ln2 - total * log_t) - 0.5 * log_factorial_multi(mi);
        double sign = 1.0;
        for (std::size_t c = 0; c < d; ++c) {
            if (mi[c] == 0) continue;
            const double a = std::abs(w[c]);
            if (a == 0.0) { sign = 0.0; break; }
            log_mag += mi[c] * std::log(a);
            if (w[c] < 0.0 && (mi[c] & 1)) sign = -sign;
        }
        if (sign == 0.0) continue;
        sum += sign * std::exp(log_mag) * h(0, l);
    }
    return f.expfac[0] * sum;
}

double hlim(std::span<const double> x, const BasisSpec& spec) {
    return hlim(x, spec.e().matrix(), spec.g(), spec.t());
}

} // namespace hermitegf
