#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "hermitegf/experiments.hpp"
#include "hermitegf/stabilization.hpp"

using namespace hermitegf;

TEST_CASE("error metric") {
    CHECK(error_metric(Vector{1.0, 2.0, -3.0}, Vector{1.0, 2.0, -3.0}) == 0.0);
    CHECK(error_metric(Vector{2.0}, Vector{1.0}) == doctest::Approx(0.5).epsilon(1e-15));

    // four terms of uniform relative error r give r/2
    const double r = 0.125;
    Vector f{1.0, 2.0, 4.0, -8.0};
    Vector s(4);
    for (std::size_t i = 0; i < 4; ++i) s[i] = f[i] * (1.0 - r);
    CHECK(error_metric(f, s) == doctest::Approx(r / 2.0).epsilon(1e-14));

    CHECK_THROWS_AS(error_metric(Vector{0.0}, Vector{1.0}), DivisionByZero);
    CHECK_THROWS_AS(error_metric(Vector{1.0, 1.0}, Vector{1.0}), DomainError);
}

TEST_CASE("test functions") {
    const double origin2[] = {0.0, 0.0};
    CHECK(test_function("fh", origin2) ==
          doctest::Approx(std::sin(0.0) - std::sin(0.25)).epsilon(1e-15));
    CHECK(test_function("fh", origin2) == doctest::Approx(-0.2474039593).epsilon(1e-9));

    const double e1[] = {1.0, 0.0};
    CHECK(test_function("fa", e1) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(test_function("fa", origin2), DivisionByZero);

    const double z4[] = {0.0, 0.0, 0.0, 0.0};
    CHECK(test_function("fcos", z4) == 1.0);

    CHECK_THROWS_AS(test_function("nope", origin2), UnknownFunction);
}

TEST_CASE("csv emission") {
    SUBCASE("empty row list produces only the pinned header") {
        const std::string s = csv_string({});
        CHECK(s ==
              "experiment,N,d,eps,gamma_tag,p,t,jmax,M,error,cond_psi,cond_phi,"
              "runtime_ms,flags\n");
    }
    SUBCASE("one row gives two lines and parses back bit-exactly") {
        ResultRow row;
        row.experiment = "iso2d-hyperbolic";
        row.n = 66;
        row.d = 2;
        row.eps = 0.05;
        row.gamma_tag = "3.5";
        row.p = 0.0;
        row.t = 1.0 / 3.0;
        row.jmax = 13;
        row.m = 105;
        row.error = 1.2345678901234567e-7;
        row.cond_psi = 987.654321;
        row.cond_phi = std::numeric_limits<double>::quiet_NaN();
        row.runtime_ms = 0.0;
        row.flags = "";
        const std::string s = csv_string({row});
        CHECK(std::count(s.begin(), s.end(), '\n') == 2);

        std::istringstream in(s);
        std::string header, line;
        std::getline(in, header);
        std::getline(in, line);
        std::vector<std::string> fields;
        std::string cur;
        std::istringstream ls(line);
        while (std::getline(ls, cur, ',')) fields.push_back(cur);
        REQUIRE(fields.size() == 13); // trailing empty flags field is dropped by getline
        CHECK(fields[0] == "iso2d-hyperbolic");
        CHECK(std::strtod(fields[6].c_str(), nullptr) == row.t);
        CHECK(std::strtod(fields[9].c_str(), nullptr) == row.error);
        CHECK(std::strtod(fields[10].c_str(), nullptr) == row.cond_psi);
        CHECK(fields[11] == "nan");
    }
    SUBCASE("emit_csv writes the same bytes") {
        ResultRow row;
        row.experiment = "multidim";
        row.gamma_tag = "5*Id";
        const std::string path = "/tmp/hgf_csv_test.csv";
        emit_csv({row}, path);
        std::ifstream f(path, std::ios::binary);
        std::stringstream buf;
        buf << f.rdbuf();
        CHECK(buf.str() == csv_string({row}));
        std::remove(path.c_str());
        CHECK_THROWS_AS(emit_csv({row}, "/nonexistent-dir/x.csv"), IoError);
    }
}

TEST_CASE("mehler-check experiment reaches the analytic limit") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::mehler_check;
    cfg.n_list = {100};
    cfg.eps_list = {0.01, 1.0};
    cfg.t_grid = {0.4};
    cfg.gamma = 1.0;
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.flags.find("err-") == std::string::npos);
        CHECK(row.error < 1e-10);
        CHECK(row.jmax == 60);
    }
}

TEST_CASE("experiment reruns are byte-identical") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::multidim;
    cfg.dim = 2;
    cfg.n_list = {12};
    cfg.eps_list = {0.5};
    cfg.gamma = 3.5;
    cfg.tol = 1e-6;
    auto a = run_experiment(cfg);
    auto b = run_experiment(cfg);
    CHECK(csv_string(a) == csv_string(b));
    REQUIRE(a.size() == 1);
    CHECK(a[0].flags.find("err-") == std::string::npos);
    CHECK(a[0].error < 0.5); // smoke bound; N = 12 is a coarse fit

    // with two worker threads the merged output is unchanged
    cfg.threads = 2;
    cfg.eps_list = {0.5, 1.0};
    auto c = run_experiment(cfg);
    cfg.threads = 1;
    auto d = run_experiment(cfg);
    CHECK(csv_string(c) == csv_string(d));
}

TEST_CASE("rows satisfy the cut-off criterion they report") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::iso2d_hyperbolic;
    cfg.n_list = {36};
    cfg.eps_list = {0.1};
    cfg.gamma = 3.5;
    cfg.tol = 1e-6;
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 1);
    const ResultRow& row = rows[0];
    CHECK(row.flags.find("err-") == std::string::npos);
    REQUIRE(row.jmax > 0);

    // recheck post hoc: rebuild the criterion quantities at the reported (t, jmax)
    PointSet colloc = hyperbolic_nodes(36, true, false);
    ShapeMatrix e = ShapeMatrix::isotropic(2, 0.1);
    Matrix g = identity(2);
    g(0, 0) = g(1, 1) = 3.5;
    Vector x0 = default_center(colloc);
    CutoffConfig ccfg;
    ccfg.tol = cfg.tol;
    CutoffResult res = choose_jmax(colloc, e, g, x0, row.t, ccfg);
    CHECK(res.j_max == row.jmax);
    for (std::size_t i = 0; i < res.ratios.size(); ++i) CHECK(res.ratios[i] <= cfg.tol);
}

TEST_CASE("aniso2d rows avoid the f_a singularity and complete") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::aniso2d;
    cfg.n_list = {60};
    cfg.eps_list = {0.1, 0.464};
    cfg.p_list = {0.0, 0.3};
    cfg.gamma = 3.5;
    cfg.run_direct = false;
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 4); // p-major, then eps
    for (const auto& row : rows) {
        CHECK(row.flags.find("err-") == std::string::npos);
        CHECK(std::isfinite(row.error));
        CHECK(row.error >= 0.0);
    }
    // off-diagonal shape entries keep the errors in the same ballpark and help
    // for at least one eps
    bool improves = false;
    for (std::size_t i = 0; i < 2; ++i) {
        const double e0 = rows[i].error;        // p = 0
        const double e3 = rows[2 + i].error;    // p = 0.3
        CHECK(e3 <= 100.0 * e0);
        CHECK(e0 <= 100.0 * e3);
        if (e3 <= e0 * 1.0001) improves = true;
    }
    CHECK(improves);
}

TEST_CASE("anisotropic 3D scan: stable in the flat limit, matches direct at moderate eps") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::multidim;
    cfg.dim = 3;
    cfg.anisotropic = true;
    cfg.n_list = {27};
    cfg.eps_list = {1e-3, 1.0};
    cfg.gamma = 5.0;
    cfg.tol = 1e-6;
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 2);
    for (const auto& row : rows) {
        CHECK(row.flags.find("err-") == std::string::npos);
        CHECK(std::isfinite(row.error));
    }
    // the flat limit is unusable for the direct method
    CHECK(rows[0].cond_phi > 1e8);

    // at eps = 1 both methods compute the same interpolant
    const double lo[3] = {-1.0, -1.0, -1.0}, hi[3] = {1.0, 1.0, 1.0};
    PointSet colloc = box_scale(halton(27, 3), lo, hi);
    PointSet evalpts = box_scale(halton(1000, 3, 27), lo, hi);
    Vector f_col(colloc.size()), f_eval(evalpts.size());
    for (std::size_t i = 0; i < colloc.size(); ++i)
        f_col[i] = test_function("fcos", colloc.point(i));
    for (std::size_t i = 0; i < evalpts.size(); ++i)
        f_eval[i] = test_function("fcos", evalpts.point(i));
    Matrix em{{1.0, 0.2, 0.3}, {0.2, 1.0, 0.15}, {0.1, 0.3, 1.0}};
    ShapeMatrix e = ShapeMatrix::general(em);
    DirectFit direct = rbf_direct_fit(colloc, f_col, e);
    const double err_direct =
        error_metric(f_eval, rbf_direct_eval(direct.coeffs, evalpts, colloc, e));
    CHECK(std::abs(rows[1].error - err_direct) <= 1e-6 + 0.01 * err_direct);
}

TEST_CASE("QR and direct errors agree when the direct method is usable") {
    // run the multidim experiment, then recompute the direct-method error on
    // the identical node layout and compare per the documented tolerance
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::multidim;
    cfg.dim = 2;
    cfg.n_list = {25};
    cfg.eps_list = {1.0};
    cfg.gamma = 3.5;
    cfg.tol = 1e-8;
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 1);
    const ResultRow& row = rows[0];
    REQUIRE(row.flags.find("err-") == std::string::npos);
    REQUIRE(row.cond_phi <= 1e8);

    const double lo[2] = {-1.0, -1.0}, hi[2] = {1.0, 1.0};
    PointSet colloc = box_scale(halton(25, 2), lo, hi);
    PointSet evalpts = box_scale(halton(1000, 2, 25), lo, hi);
    Vector f_col(colloc.size()), f_eval(evalpts.size());
    for (std::size_t i = 0; i < colloc.size(); ++i)
        f_col[i] = test_function("fcos", colloc.point(i));
    for (std::size_t i = 0; i < evalpts.size(); ++i)
        f_eval[i] = test_function("fcos", evalpts.point(i));
    ShapeMatrix e = ShapeMatrix::isotropic(2, 1.0);
    DirectFit direct = rbf_direct_fit(colloc, f_col, e);
    const double err_direct =
        error_metric(f_eval, rbf_direct_eval(direct.coeffs, evalpts, colloc, e));
    CHECK(std::abs(row.error - err_direct) <= 1e-6 + 0.01 * err_direct);
}

TEST_CASE("criterion-compare rows carry the legacy degree in the flags") {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::criterion_compare;
    cfg.n_list = {30};
    cfg.eps_list = {0.05};
    cfg.t_grid = {0.5};
    cfg.gamma = 3.5;
    auto rows = run_experiment(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].flags.find("legacy=") != std::string::npos);
    CHECK(rows[0].flags.find("jmax_tol1e-2=") != std::string::npos);
    CHECK(rows[0].flags.find("err-") == std::string::npos);
}
