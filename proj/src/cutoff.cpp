#include "hermitegf/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace hermitegf {

namespace {

constexpr double ln2 = 0.6931471805599453;
constexpr double kLogEpsMach = -36.0436533891171535; // ln(2.22e-16)
constexpr double kExpLimit = 709.0;

double logsumexp(const std::vector<double>& terms) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double t : terms) mx = std::max(mx, t);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
}

/// ln |D_ll| without the t part: sum_c l_c ln|d_eff_c| + |l| ln(2)/2 - ln(l!)/2.
/// The full value is this minus |l| ln(t)/2.
double d_log_base(MultiIndex l, int total, std::span<const double> log_abs_d) {
    double lg = 0.5 * total * ln2 - 0.5 * log_factorial_multi(l);
    for (std::size_t c = 0; c < l.size(); ++c) lg += l[c] * log_abs_d[c];
    return lg;
}

} // namespace

std::vector<double> default_t_grid() {
    std::vector<double> grid(10);
    for (int i = 0; i < 10; ++i) grid[i] = 0.3 + (0.99 - 0.3) * i / 9.0;
    return grid;
}

int default_j_cap(int d) {
    if (d <= 2) return 60;
    int j = 0;
    while (graded_count(d, j + 1) <= 100'000ull) ++j;
    return j;
}

int legacy_jmax(const ExpansionFactors& factors, double t, std::size_t n, int j_cap) {
    const int d = static_cast<int>(factors.d_vec.size());
    if (graded_count(d, j_cap + 1) < n)
        throw CapacityExceeded("legacy_jmax: fewer than N indices below the degree cap");
    GradedIndexList idx = enumerate_graded(d, j_cap + 1);

    std::vector<double> log_abs_d(d);
    for (int c = 0; c < d; ++c)
        log_abs_d[c] = std::log(std::abs(factors.d_vec[c] * factors.l_scale));
    const double log_t = std::log(t);

    double min_row = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const int s = idx.total_degree(i);
        min_row = std::min(min_row, d_log_base(idx[i], s, log_abs_d) - 0.5 * s * log_t);
    }

    // per-degree maxima of ln D, then suffix maxima from the cap downward
    std::vector<double> block_max(static_cast<std::size_t>(j_cap) + 2,
                                  -std::numeric_limits<double>::infinity());
    for (std::size_t l = 0; l < idx.size(); ++l) {
        const int s = idx.total_degree(l);
        const double v = d_log_base(idx[l], s, log_abs_d) - 0.5 * s * log_t;
        block_max[static_cast<std::size_t>(s)] = std::max(block_max[static_cast<std::size_t>(s)], v);
    }
    std::vector<double> suffix(block_max.size() + 1,
                               -std::numeric_limits<double>::infinity());
    for (std::size_t s = block_max.size(); s-- > 0;)
        suffix[s] = std::max(block_max[s], suffix[s + 1]);

    int j_floor = 0;
    while (graded_count(d, j_floor) < n) ++j_floor;
    for (int j = j_floor; j <= j_cap; ++j)
        if (suffix[static_cast<std::size_t>(j) + 1] - min_row < kLogEpsMach) return j;
    throw CapacityExceeded("legacy_jmax: criterion not met below the degree cap");
}

Vector omega_weights(const Matrix& w1) {
    const std::size_t n = w1.rows();
    Matrix inv;
    try {
        inv = solve(w1, identity(n));
    } catch (const SingularMatrix& e) {
        throw SingularVandermonde(std::string("omega_weights: ") + e.what() +
                                  " (perturb the nodes or change the ordering)");
    }
    Vector omega(n);
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += inv(k, i) * inv(k, i);
        omega[k] = s;
    }
    return omega;
}

double truncation_const(int j_max, const Vector& omega, const ExpansionFactors& factors,
                        double t, const GradedIndexList& idx) {
    const std::size_t n = omega.size();
    const int d = static_cast<int>(factors.d_vec.size());
    if (idx.size() < n) throw DomainError("truncation_const: index list shorter than N");

    const double log_2t = std::log(2.0 / t);
    std::vector<double> log_d_sq(d);
    double log_gm_sq = 0.0; // ln of (geometric mean of d_eff)^2
    for (int c = 0; c < d; ++c) {
        const double de = factors.d_vec[c] * factors.l_scale;
        log_d_sq[c] = std::log(de * de);
        log_gm_sq += log_d_sq[c] / d;
    }

    // first factor: sum over the row multi-indices
    std::vector<double> terms;
    terms.reserve(n);
    const double log_fact_next = std::lgamma(static_cast<double>(j_max) + 2.0);
    for (std::size_t k = 0; k < n; ++k) {
        MultiIndex mk = idx[k];
        double term = std::log(omega[k]) + log_factorial_multi(mk) - log_fact_next;
        for (int c = 0; c < d; ++c) {
            const double expo = static_cast<double>(j_max + 1) / d - mk[c];
            term += expo * (log_2t + log_d_sq[c]);
        }
        terms.push_back(term);
    }
    const double lf1 = logsumexp(terms);

    // second factor: sum over the nodes, y_i = d_vec .* v_i
    terms.clear();
    for (std::size_t i = 0; i < factors.v.rows(); ++i) {
        double ynorm_sq = 0.0;
        for (int c = 0; c < d; ++c) {
            const double y = factors.d_vec[c] * factors.v(i, c);
            ynorm_sq += y * y;
        }
        if (ynorm_sq == 0.0) continue;
        const double expo = (2.0 / t) * ynorm_sq;
        if (expo > kExpLimit)
            throw ExponentOverflow("truncation_const: exp((2/t)||y||^2) overflows at node " +
                                   std::to_string(i) + "; increase G");
        terms.push_back(expo + (j_max + 1) * (std::log(ynorm_sq) - log_gm_sq));
    }
    if (terms.empty()) return 0.0; // all nodes at x0: the tail collapses
    const double lf2 = logsumexp(terms);
    return std::exp(lf1 + lf2);
}

double delta_psi_bound(std::span<const double> x, int j_max, double const_jmax,
                       const BasisSpec& spec) {
    if (spec.j_max() < j_max)
        throw DomainError("delta_psi_bound: spec does not cover the requested degree");
    const std::size_t d = static_cast<std::size_t>(spec.dim());
    std::vector<double> shifted(d);
    for (std::size_t c = 0; c < d; ++c) shifted[c] = x[c] - spec.x0()[c];
    const double lim = hlim(shifted, spec);

    PointSet p{spec.dim(), Matrix(1, d)};
    for (std::size_t c = 0; c < d; ++c) p.pts(0, c) = x[c];
    Matrix h = hermitegf_eval(p, spec);
    double partial = 0.0;
    for (std::size_t l = 0; l < spec.idx().size(); ++l)
        if (spec.idx().total_degree(l) <= j_max) partial += h(0, l) * h(0, l);

    return std::sqrt(const_jmax * std::max(0.0, lim - partial));
}

namespace {

/// Degree-search workspace shared across candidate degrees and t values.
/// Everything cached here is independent of t: the QR of the leading C block,
/// the R1^{-1}R2 columns, the t-free basis values, and the Vandermonde weights.
/// The t-powers of the D-quotients cancel against the t-powers of the basis
/// values, so Psi-hat(t) row entries are t^{deg/2} times a t-free matrix.
class CutoffEngine {
public:
    CutoffEngine(const PointSet& colloc, const ShapeMatrix& e, const Matrix& g,
                 const Vector& x0, int j_cap)
        : colloc_(colloc), e_(e), g_(g), x0_(x0), j_cap_(j_cap),
          n_(colloc.size()), d_(e.dim()) {
        factors_ = expansion_factors(colloc_, e_, g_, x0_);
        j_rows_ = 0;
        while (graded_count(d_, j_rows_) < n_) ++j_rows_;
        if (graded_count(d_, j_cap_) < n_)
            throw InsufficientBasis("choose_jmax: degree cap admits fewer basis functions "
                                    "than collocation points");

        log_abs_d_.resize(d_);
        for (int c = 0; c < d_; ++c)
            log_abs_d_[c] = std::log(std::abs(factors_.d_vec[c] * factors_.l_scale));

        v_eff_ = Matrix(n_, static_cast<std::size_t>(d_));
        for (std::size_t k = 0; k < n_; ++k)
            for (int c = 0; c < d_; ++c)
                v_eff_(k, c) = factors_.v(k, c) / factors_.l_scale;

        grow(j_rows_);

        Matrix c1(n_, n_), w1(n_, n_);
        for (std::size_t k = 0; k < n_; ++k)
            for (std::size_t l = 0; l < n_; ++l) {
                w1(k, l) = pow_multi(v_eff_.row(k), idx_[l]);
                c1(k, l) = factors_.expfac[k] * w1(k, l);
            }
        omega_ = omega_weights(w1);
        QrResult qr = qr_thin(c1);
        if (!qr.full_rank)
            throw RankDeficientC("choose_jmax: leading C block is rank deficient");
        q_ = std::move(qr.q);
        r1_ = std::move(qr.r);

        psi_base_ = Matrix(n_, n_);
        for (std::size_t p = 0; p < n_; ++p)
            for (std::size_t i = 0; i < n_; ++i) psi_base_(p, i) = a_col(i)[p];
    }

    CutoffResult run(double t, double tol, int j_start) {
        int j = std::max(j_rows_, j_start);
        ensure_columns(j);

        Vector hlim_pt(n_);
        std::vector<double> shifted(static_cast<std::size_t>(d_));
        for (std::size_t p = 0; p < n_; ++p) {
            for (int c = 0; c < d_; ++c) shifted[static_cast<std::size_t>(c)] =
                colloc_.pts(p, static_cast<std::size_t>(c)) - x0_[static_cast<std::size_t>(c)];
            hlim_pt[p] = hlim(shifted, e_.matrix(), g_, t);
        }

        // t-free Psi-hat at the starting degree
        Matrix psi0 = psi_base_;
        for (int s = 0; s <= j; ++s) add_block(psi0, s);
        // partial sums of H^2 per point: sum over degrees of t^s * asq
        Vector rowsq(n_);
        for (std::size_t p = 0; p < n_; ++p) {
            double acc = 0.0;
            for (int s = 0; s <= j; ++s) acc += std::pow(t, s) * asq_[static_cast<std::size_t>(s)][p];
            rowsq[p] = acc;
        }

        // t^degree weights for the first N (row) indices
        std::vector<double> tpow_row(n_);
        for (std::size_t i = 0; i < n_; ++i)
            tpow_row[i] = std::pow(t, idx_.total_degree(i));

        CutoffResult res;
        res.t = t;
        while (true) {
            const double c = truncation_const(j, omega_, factors_, t, idx_);
            Vector bounds(n_), ratios(n_);
            double max_ratio = 0.0;
            for (std::size_t p = 0; p < n_; ++p) {
                bounds[p] = std::sqrt(c * std::max(0.0, hlim_pt[p] - rowsq[p]));
                double nrm = 0.0;
                for (std::size_t i = 0; i < n_; ++i) {
                    const double w = tpow_row[i];
                    nrm += w * psi0(p, i) * psi0(p, i);
                }
                nrm = std::sqrt(nrm);
                ratios[p] = nrm > 0.0 ? bounds[p] / nrm
                                      : std::numeric_limits<double>::infinity();
                max_ratio = std::max(max_ratio, ratios[p]);
            }
            if (max_ratio <= tol || j >= j_cap_) {
                res.j_max = j;
                res.m = static_cast<std::size_t>(graded_count(d_, j));
                res.bound_values = std::move(bounds);
                res.ratios = std::move(ratios);
                res.converged = max_ratio <= tol;
                res.legacy_j_max = -1;
                try {
                    res.legacy_j_max = legacy_jmax(factors_, t, n_, j_cap_);
                } catch (const CapacityExceeded&) {
                    // reported as -1; the legacy criterion is informational here
                }
                return res;
            }
            ++j;
            ensure_columns(j);
            add_block(psi0, j);
            for (std::size_t p = 0; p < n_; ++p)
                rowsq[p] += std::pow(t, j) * asq_[static_cast<std::size_t>(j)][p];
        }
    }

private:
    std::span<const double> a_col(std::size_t l) const {
        return {a_cols_[l].data(), n_};
    }

    /// Extend the index list and the t-free per-column caches to degree j.
    void grow(int j) {
        if (j <= grown_j_) return;
        idx_ = enumerate_graded(d_, j);
        const std::size_t m = idx_.size();

        // Hermite-function tables are cheap; rebuild them outright.
        const Matrix& g = g_;
        Matrix a = multiply(g, transpose(g));
        for (int i = 0; i < d_; ++i)
            for (int c = 0; c < d_; ++c)
                a(i, c) = 0.5 * a(i, c) - e_.gram()(i, c);
        const double log_pi_term = 0.25 * d_ * std::log(std::numbers::pi);
        psi_tables_.clear();
        point_scale_.resize(n_);
        std::vector<double> dx(static_cast<std::size_t>(d_));
        for (std::size_t p = 0; p < n_; ++p) {
            for (int c = 0; c < d_; ++c)
                dx[static_cast<std::size_t>(c)] =
                    colloc_.pts(p, static_cast<std::size_t>(c)) - x0_[static_cast<std::size_t>(c)];
            Vector y(static_cast<std::size_t>(d_));
            for (int i = 0; i < d_; ++i) {
                double s = 0.0;
                for (int c = 0; c < d_; ++c) s += g(c, i) * dx[static_cast<std::size_t>(c)];
                y[static_cast<std::size_t>(i)] = s;
            }
            double q = 0.0;
            for (int i = 0; i < d_; ++i) {
                double s = 0.0;
                for (int c = 0; c < d_; ++c) s += a(i, c) * dx[static_cast<std::size_t>(c)];
                q += dx[static_cast<std::size_t>(i)] * s;
            }
            if (q + log_pi_term > kExpLimit)
                throw ExponentOverflow("choose_jmax: scalar exponential overflows at point " +
                                       std::to_string(p));
            point_scale_[p] = std::exp(q + log_pi_term);
            psi_tables_.push_back(hermite_function_1d(y, j));
        }

        a_cols_.resize(m);
        base_log_.resize(m);
        sign_.resize(m);
        asq_.resize(static_cast<std::size_t>(j) + 1);
        delta_.resize(static_cast<std::size_t>(j) + 1);
        for (std::size_t l = first_new_; l < m; ++l) {
            MultiIndex mi = idx_[l];
            const int s = idx_.total_degree(l);
            base_log_[l] = d_log_base(mi, s, log_abs_d_);
            int sg = 1;
            for (int c = 0; c < d_; ++c)
                if (factors_.d_vec[c] * factors_.l_scale < 0.0 && (mi[c] & 1)) sg = -sg;
            sign_[l] = sg;

            std::vector<double>& col = a_cols_[l];
            col.resize(n_);
            for (std::size_t p = 0; p < n_; ++p) {
                double prod = 1.0;
                for (int c = 0; c < d_; ++c) prod *= psi_tables_[p].values(c, mi[c]);
                col[p] = prod * point_scale_[p];
            }
            auto& sq = asq_[static_cast<std::size_t>(s)];
            if (sq.size() != n_) sq.assign(n_, 0.0);
            for (std::size_t p = 0; p < n_; ++p) sq[p] += col[p] * col[p];
        }
        for (int s = 0; s <= j; ++s)
            if (asq_[static_cast<std::size_t>(s)].size() != n_)
                asq_[static_cast<std::size_t>(s)].assign(n_, 0.0);
        first_new_ = m;
        grown_j_ = j;
    }

    /// Make sure the columns of degree <= j beyond position N carry their
    /// R1^{-1} R2 data and the t-free K0 = Rtilde .* exp(base-quotient) block
    /// contributions to Psi-hat.
    void ensure_columns(int j) {
        grow(j);
        const std::size_t m = idx_.size();
        if (k_cols_done_ >= m) return;
        for (std::size_t l = std::max(k_cols_done_, n_); l < m; ++l) {
            std::vector<double> c_col(n_);
            for (std::size_t k = 0; k < n_; ++k)
                c_col[k] = factors_.expfac[k] * pow_multi(v_eff_.row(k), idx_[l]);
            // r2 = Q^T c, then back-substitution for R1 x = r2
            std::vector<double> x(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                double s = 0.0;
                for (std::size_t k = 0; k < n_; ++k) s += q_(k, i) * c_col[k];
                x[i] = s;
            }
            for (std::size_t i = n_; i-- > 0;) {
                double s = x[i];
                for (std::size_t c = i + 1; c < n_; ++c) s -= r1_(i, c) * x[c];
                x[i] = s / r1_(i, i);
            }
            // fold in the t-free part of the D quotient
            std::vector<double> k0(n_);
            for (std::size_t i = 0; i < n_; ++i) {
                const double mag = std::exp(base_log_[l] - base_log_[i]);
                k0[i] = x[i] * mag * sign_[l] * sign_[i];
                if (!std::isfinite(k0[i]))
                    throw ExponentOverflow("choose_jmax: D quotient overflows at column " +
                                           std::to_string(l));
            }
            // accumulate the outer product a_l k0^T into the per-degree cache,
            // so each t value only pays one N x N add per degree
            const int s = idx_.total_degree(l);
            Matrix& delta = delta_[static_cast<std::size_t>(s)];
            if (delta.rows() == 0) delta = Matrix(n_, n_);
            std::span<const double> al = a_col(l);
            for (std::size_t p = 0; p < n_; ++p) {
                const double ap = al[p];
                if (ap == 0.0) continue;
                double* row = &delta(p, 0);
                for (std::size_t i = 0; i < n_; ++i) row[i] += k0[i] * ap;
            }
        }
        k_cols_done_ = m;
    }

    /// Add the cached degree-s contribution of the correction columns.
    void add_block(Matrix& psi0, int s) const {
        const Matrix& delta = delta_[static_cast<std::size_t>(s)];
        if (delta.rows() == 0) return;
        for (std::size_t p = 0; p < n_; ++p) {
            std::span<const double> src = delta.row(p);
            std::span<double> dst = psi0.row(p);
            for (std::size_t i = 0; i < n_; ++i) dst[i] += src[i];
        }
    }

    PointSet colloc_;
    ShapeMatrix e_;
    Matrix g_;
    Vector x0_;
    int j_cap_;
    std::size_t n_;
    int d_;
    int j_rows_ = 0;

    ExpansionFactors factors_;
    GradedIndexList idx_;
    int grown_j_ = -1;
    std::size_t first_new_ = 0;

    std::vector<double> log_abs_d_;
    Matrix v_eff_;
    Vector omega_;
    Matrix q_, r1_;
    Matrix psi_base_;

    std::vector<HermiteTable1D> psi_tables_;
    std::vector<double> point_scale_;
    std::vector<std::vector<double>> a_cols_; // t-free H columns
    std::vector<std::vector<double>> asq_;    // per-degree sums of squared t-free H
    std::vector<double> base_log_;
    std::vector<int> sign_;
    std::vector<Matrix> delta_; // per-degree t-free correction contributions
    std::size_t k_cols_done_ = 0;
};

} // namespace

CutoffResult choose_jmax(const PointSet& colloc, const ShapeMatrix& e, const Matrix& g,
                         const Vector& x0, double t, const CutoffConfig& cfg) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("choose_jmax: t must lie in (0,1)");
    if (!(cfg.tol > 0.0)) throw DomainError("choose_jmax: tol must be positive");
    const int j_cap = cfg.j_cap > 0 ? cfg.j_cap : default_j_cap(e.dim());
    CutoffEngine engine(colloc, e, g, x0, j_cap);
    return engine.run(t, cfg.tol, cfg.j_start);
}

std::pair<double, CutoffResult> auto_t(const PointSet& colloc, const ShapeMatrix& e,
                                       const Matrix& g, const Vector& x0,
                                       const CutoffConfig& cfg) {
    std::vector<double> grid = cfg.t_grid.empty() ? default_t_grid() : cfg.t_grid;
    if (grid.empty()) throw DomainError("auto_t: empty t grid");
    for (double t : grid)
        if (!(t > 0.0 && t < 1.0)) throw DomainError("auto_t: grid values must lie in (0,1)");
    const int j_cap = cfg.j_cap > 0 ? cfg.j_cap : default_j_cap(e.dim());
    CutoffEngine engine(colloc, e, g, x0, j_cap);

    bool have = false;
    double best_t = 0.0;
    CutoffResult best;
    for (double t : grid) {
        CutoffResult res = engine.run(t, cfg.tol, cfg.j_start);
        if (!res.converged) continue;
        if (!have || res.j_max < best.j_max ||
            (res.j_max == best.j_max && t > best_t)) {
            have = true;
            best_t = t;
            best = std::move(res);
        }
    }
    if (!have)
        throw CriterionNotMet("auto_t: no grid value meets the tolerance below the degree cap");
    return {best_t, std::move(best)};
}

} // namespace hermitegf
