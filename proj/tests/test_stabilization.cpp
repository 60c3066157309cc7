#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hermitegf/pointsets.hpp"
#include "hermitegf/stabilization.hpp"
#include "test_support.hpp"

using namespace hermitegf;

namespace {

PointSet halton_box(std::size_t n, int d, std::size_t skip = 0) {
    std::vector<double> lo(static_cast<std::size_t>(d), -1.0);
    std::vector<double> hi(static_cast<std::size_t>(d), 1.0);
    return box_scale(halton(n, d, skip), lo, hi);
}

} // namespace

TEST_CASE("M = N leaves the stable basis equal to the truncated H basis") {
    PointSet centers{1, Matrix{{-0.5}, {-0.1}, {0.2}, {0.6}, {0.9}}};
    ShapeMatrix e = ShapeMatrix::isotropic(1, 0.8);
    BasisSpec spec(e, identity(1), 0.5, default_center(centers), 4); // M = 5 = N
    StableBasis basis = build_stable_basis(centers, spec);
    CHECK(basis.k.cols() == 0);

    PointSet pts{1, Matrix{{-0.8}, {0.0}, {0.77}}};
    Matrix psi = psi_matrix(pts, basis);
    Matrix h = hermitegf_eval(pts, spec);
    CHECK(testsup::max_abs_diff(psi, h) == 0.0);
}

TEST_CASE("M < N is rejected") {
    PointSet centers{1, Matrix{{-0.5}, {0.0}, {0.5}}};
    ShapeMatrix e = ShapeMatrix::isotropic(1, 0.8);
    BasisSpec spec(e, identity(1), 0.5, Vector{0.0}, 1);
    CHECK_THROWS_AS(build_stable_basis(centers, spec), InsufficientBasis);
}

TEST_CASE("coincident centers surface as rank deficiency") {
    PointSet centers{1, Matrix{{0.4}, {0.4}, {-0.2}}};
    ShapeMatrix e = ShapeMatrix::isotropic(1, 0.8);
    BasisSpec spec(e, identity(1), 0.5, Vector{0.0}, 5);
    CHECK_THROWS_AS(build_stable_basis(centers, spec), RankDeficientC);
}

TEST_CASE("1D D-quotients match the closed form") {
    SUBCASE("pinned value of the closed-form formula") {
        // N=5, eps=0.5, gamma=1, t=0.5, L=1, entry (i=5, j=1):
        // (eps^2 sqrt(2/t))^1 sqrt(5!/6!) = 0.5 / sqrt(6)
        CHECK(dtilde_closed_form_1d(5, 1, 5, 0.5, 1.0, 0.5, 1.0) ==
              doctest::Approx(0.2041241452).epsilon(1e-9));
        CHECK(dtilde_closed_form_1d(5, 1, 5, 0.5, 1.0, 0.5, 1.0) ==
              doctest::Approx(0.25 * 2.0 / std::sqrt(6.0)).epsilon(1e-13));
    }
    SUBCASE("production quotients equal the closed form with 0-based indices") {
        PointSet centers{1, Matrix{{-1.0}, {-0.3}, {0.1}, {0.5}, {0.8}}};
        const double eps = 0.5, gamma = 1.3, t = 0.45;
        ShapeMatrix e = ShapeMatrix::isotropic(1, eps);
        BasisSpec spec(e, Matrix{{gamma}}, t, Vector{0.0}, 9);
        ExpansionFactors f = expansion_factors(centers, spec);
        CDFactorization cd = build_cd(centers, spec, f);
        const std::size_t n = centers.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j + n < spec.basis_count(); ++j) {
                const double quotient = cd.d_entry(n + j) / cd.d_entry(i);
                const double closed = dtilde_closed_form_1d(
                    static_cast<int>(i), static_cast<int>(j), static_cast<int>(n),
                    eps, gamma, t, f.l_scale);
                CHECK(quotient == doctest::Approx(closed).epsilon(1e-12));
            }
    }
}

TEST_CASE("stable basis agrees with the explicit preconditioner X = Q R1 D1") {
    // Valid only while X is well-conditioned and the truncation floor is below
    // the tolerance; j_max = 18 puts it near 1e-10 for these parameters.
    const std::size_t n = 21;
    PointSet colloc = halton_box(n, 2);
    ShapeMatrix e = ShapeMatrix::isotropic(2, 1.0);
    Matrix g = identity(2);
    g(0, 0) = g(1, 1) = 3.5;
    BasisSpec spec(e, g, 0.5, default_center(colloc), 18);
    StableBasis basis = build_stable_basis(colloc, spec);
    CHECK(std::isfinite(basis.cond_r1));

    ExpansionFactors f = expansion_factors(colloc, spec);
    CDFactorization cd = build_cd(colloc, spec, f);
    Matrix c1(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) c1(i, k) = cd.c(i, k);
    QrResult qr = qr_thin(c1);
    Matrix x = multiply(qr.q, qr.r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) x(i, k) *= cd.d_entry(k);

    PointSet pts = halton_box(50, 2, 200);
    Matrix phi = gaussian_matrix(pts, colloc, e);
    Matrix psi = psi_matrix(pts, basis);
    double max_diff = 0.0, max_val = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
        Vector rhs(n);
        for (std::size_t k = 0; k < n; ++k) rhs[k] = phi(p, k);
        Vector z = solve(x, rhs);
        for (std::size_t k = 0; k < n; ++k) {
            max_diff = std::max(max_diff, std::abs(z[k] - psi(p, k)));
            max_val = std::max(max_val, std::abs(z[k]));
        }
    }
    CHECK(max_diff <= 1e-8 * max_val);
}

TEST_CASE("QR and Vandermonde paths agree at moderate conditioning") {
    PointSet colloc = halton_box(15, 2);
    ShapeMatrix e = ShapeMatrix::isotropic(2, 0.8);
    Matrix g = identity(2);
    g(0, 0) = g(1, 1) = 2.0;
    BasisSpec spec(e, g, 0.5, default_center(colloc), 10);
    StableBasis basis = build_stable_basis(colloc, spec);
    PointSet pts = halton_box(20, 2, 50);
    Matrix a = psi_matrix(pts, basis);
    Matrix b = psi_matrix_vandermonde(pts, colloc, spec);
    CHECK(testsup::max_abs_diff(a, b) < 1e-8);
}

TEST_CASE("single point, degree zero") {
    PointSet centers{2, Matrix{{0.3, -0.2}}};
    ShapeMatrix e = ShapeMatrix::isotropic(2, 0.7);
    BasisSpec spec(e, identity(2), 0.5, Vector{0.3, -0.2}, 0);
    StableBasis basis = build_stable_basis(centers, spec);
    Matrix psi = psi_matrix(centers, basis);
    CHECK(psi.rows() == 1);
    CHECK(psi.cols() == 1);
    CHECK(psi(0, 0) == doctest::Approx(1.0).epsilon(1e-13));

    // s(x) = f1 psi1(x) / psi1(x1)
    Interpolant ip = fit(centers, Vector{2.5}, basis);
    PointSet q{2, Matrix{{0.5, 0.1}}};
    Vector s = evaluate(ip, q);
    Matrix psi_q = psi_matrix(q, basis);
    CHECK(s[0] == doctest::Approx(2.5 * psi_q(0, 0) / psi(0, 0)).epsilon(1e-12));
}

TEST_CASE("fit guards its preconditions") {
    PointSet centers = halton_box(6, 2);
    ShapeMatrix e = ShapeMatrix::isotropic(2, 0.9);
    BasisSpec spec(e, identity(2), 0.5, default_center(centers), 6);
    StableBasis basis = build_stable_basis(centers, spec);
    PointSet other = halton_box(6, 2, 10);
    CHECK_THROWS_AS(fit(other, Vector(6, 1.0), basis), DomainError);
    CHECK_THROWS_AS(fit(centers, Vector(5, 1.0), basis), DomainError);
}

TEST_CASE("interpolation basics at moderate eps") {
    const std::size_t n = 20;
    PointSet colloc = halton_box(n, 2);
    ShapeMatrix e = ShapeMatrix::isotropic(2, 1.0);
    Matrix g = identity(2);
    g(0, 0) = g(1, 1) = 3.5;
    BasisSpec spec(e, g, 0.5, default_center(colloc), 18);
    StableBasis basis = build_stable_basis(colloc, spec);

    SUBCASE("zero data evaluates to zero") {
        Interpolant ip = fit(colloc, Vector(n, 0.0), basis);
        Vector s = evaluate(ip, halton_box(13, 2, 40));
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == 0.0);
    }
    SUBCASE("indicator data has the cardinal property") {
        Vector f(n, 0.0);
        f[3] = 1.0;
        Interpolant ip = fit(colloc, f, basis);
        Vector s = evaluate(ip, colloc);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(s[i] == doctest::Approx(f[i]).epsilon(1e-8).scale(1.0));
    }
    SUBCASE("a Gaussian centered on a node is reproduced everywhere") {
        PointSet c3{2, Matrix(1, 2)};
        c3.pts(0, 0) = colloc.pts(3, 0);
        c3.pts(0, 1) = colloc.pts(3, 1);
        Vector f(n);
        Matrix phi_col = gaussian_matrix(colloc, c3, e);
        for (std::size_t i = 0; i < n; ++i) f[i] = phi_col(i, 0);
        Interpolant ip = fit(colloc, f, basis);
        PointSet evalpts = halton_box(30, 2, 77);
        Vector s = evaluate(ip, evalpts);
        Matrix phi_eval = gaussian_matrix(evalpts, c3, e);
        for (std::size_t i = 0; i < s.size(); ++i)
            CHECK(s[i] == doctest::Approx(phi_eval(i, 0)).epsilon(1e-7).scale(1.0));
    }
    SUBCASE("evaluation at the collocation points returns the data") {
        Vector f = testsup::random_vector(n, 17);
        Interpolant ip = fit(colloc, f, basis);
        Vector s = evaluate(ip, colloc);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(s[i] == doctest::Approx(f[i]).epsilon(1e-8));
    }
}

TEST_CASE("agreement with RBF-Direct at moderate eps") {
    const std::size_t n = 25;
    PointSet colloc = halton_box(n, 2);
    PointSet evalpts = halton_box(60, 2, 500);
    ShapeMatrix e = ShapeMatrix::isotropic(2, 1.0);
    Matrix g = identity(2);
    g(0, 0) = g(1, 1) = 3.5;
    Vector f(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = colloc.point(i);
        f[i] = std::sin(p[0] + 0.5 * p[1]);
    }
    BasisSpec spec(e, g, 0.5, default_center(colloc), 20);
    StableBasis basis = build_stable_basis(colloc, spec);
    Vector s_qr = evaluate(fit(colloc, f, basis), evalpts);

    DirectFit direct = rbf_direct_fit(colloc, f, e);
    Vector s_direct = rbf_direct_eval(direct.coeffs, evalpts, colloc, e);
    double scale = 0.0;
    for (std::size_t i = 0; i < s_direct.size(); ++i)
        scale = std::max(scale, std::abs(s_direct[i]));
    for (std::size_t i = 0; i < s_qr.size(); ++i)
        CHECK(std::abs(s_qr[i] - s_direct[i]) <= 1e-8 * scale);
}

TEST_CASE("exactness on span members in the flat regime") {
    // f = sum of three Gaussians on a center subset stays in the span, so the
    // interpolant must reproduce it off the collocation set as well
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> dis(-0.5, 0.5);
    const std::size_t n = 16;
    PointSet colloc = halton_box(n, 2);
    PointSet sub{2, Matrix(3, 2)};
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t c = 0; c < 2; ++c) sub.pts(k, c) = colloc.pts(2 * k + 1, c);
    Vector beta{dis(gen), dis(gen), dis(gen)};

    for (double eps : {0.05, 0.5}) {
        ShapeMatrix e = ShapeMatrix::isotropic(2, eps);
        Matrix g = identity(2);
        g(0, 0) = g(1, 1) = 2.0;
        Vector f(n);
        Matrix phi_col = gaussian_matrix(colloc, sub, e);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < 3; ++k) s += beta[k] * phi_col(i, k);
            f[i] = s;
        }
        BasisSpec spec(e, g, 0.5, default_center(colloc), 20);
        StableBasis basis = build_stable_basis(colloc, spec);
        Interpolant ip = fit(colloc, f, basis);
        PointSet evalpts = halton_box(25, 2, 300);
        Vector s = evaluate(ip, evalpts);
        Matrix phi_eval = gaussian_matrix(evalpts, sub, e);
        double scale = 0.0;
        for (std::size_t i = 0; i < evalpts.size(); ++i) {
            double exact = 0.0;
            for (std::size_t k = 0; k < 3; ++k) exact += beta[k] * phi_eval(i, k);
            scale = std::max(scale, std::abs(exact));
            CHECK(std::abs(s[i] - exact) <= 1e-7 * std::max(1.0, std::abs(exact)));
        }
        CHECK(scale > 0.0);
    }
}
