#include "hermitegf/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

namespace hermitegf {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::iso2d_hyperbolic: return "iso2d-hyperbolic";
        case ExperimentKind::aniso2d: return "aniso2d";
        case ExperimentKind::multidim: return "multidim";
        case ExperimentKind::mehler_check: return "mehler-check";
        case ExperimentKind::criterion_compare: return "criterion-compare";
    }
    return "unknown";
}

ExperimentKind experiment_from_string(const std::string& name) {
    if (name == "iso2d-hyperbolic") return ExperimentKind::iso2d_hyperbolic;
    if (name == "aniso2d") return ExperimentKind::aniso2d;
    if (name == "multidim") return ExperimentKind::multidim;
    if (name == "mehler-check") return ExperimentKind::mehler_check;
    if (name == "criterion-compare") return ExperimentKind::criterion_compare;
    throw UnknownFunction("unknown experiment: " + name);
}

double error_metric(const Vector& f_true, const Vector& s) {
    if (f_true.size() != s.size()) throw DomainError("error_metric: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < f_true.size(); ++i) {
        if (f_true[i] == 0.0)
            throw DivisionByZero("error_metric: true value is zero at index " +
                                 std::to_string(i));
        const double r = (f_true[i] - s[i]) / f_true[i];
        sum += r * r;
    }
    return std::sqrt(sum) / static_cast<double>(f_true.size());
}

double test_function(const std::string& name, std::span<const double> x) {
    if (name == "fh") {
        if (x.size() != 2) throw DomainError("fh is bivariate");
        const double a = x[0], b = x[1];
        return std::sin(a * a + 2.0 * b * b) - std::sin(2.0 * a * a + (b - 0.5) * (b - 0.5));
    }
    if (name == "fa") {
        if (x.size() != 2) throw DomainError("fa is bivariate");
        const double a = x[0], b = x[1];
        const double q = a * a + a * b + b * b;
        if (q == 0.0) throw DivisionByZero("fa: singular at the origin");
        return 1.0 / q + 2.0;
    }
    if (name == "fcos") {
        double s = 0.0;
        for (double xi : x) s += xi;
        return std::cos(s);
    }
    throw UnknownFunction("test_function: unknown name " + name);
}

namespace {

Vector sample(const std::string& fname, const PointSet& pts) {
    Vector f(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) f[i] = test_function(fname, pts.point(i));
    return f;
}

std::string fmt(double v) {
    char buf[64];
    if (std::isnan(v)) return "nan";
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void append_flag(std::string& flags, const std::string& token) {
    if (!flags.empty()) flags += ';';
    flags += token;
}

/// One fit/evaluate case shared by the interpolation experiments.
struct CasePoints {
    PointSet colloc;
    PointSet evalpts;
    Vector f_col;
    Vector f_eval;
};

void run_interpolation_case(const ExperimentConfig& cfg, const CasePoints& pts,
                            const ShapeMatrix& e, const Matrix& g, ResultRow& row) {
    const Vector x0 = default_center(pts.colloc);
    CutoffConfig ccfg;
    ccfg.tol = cfg.tol;
    ccfg.t_grid = cfg.t_grid;

    auto [t, cut] = auto_t(pts.colloc, e, g, x0, ccfg);
    row.t = t;
    row.jmax = cut.j_max;
    row.m = cut.m;

    BasisSpec spec(e, g, t, x0, cut.j_max);
    StableBasis basis = build_stable_basis(pts.colloc, spec);
    Interpolant ip = fit(pts.colloc, pts.f_col, basis);
    Vector s = evaluate(ip, pts.evalpts);
    row.error = error_metric(pts.f_eval, s);
    row.cond_psi = condition_number_2(ip.psi_col);

    if (cfg.run_direct) {
        try {
            DirectFit direct = rbf_direct_fit(pts.colloc, pts.f_col, e);
            row.cond_phi = direct.cond_phi;
            if (!(row.cond_phi < 1e14)) append_flag(row.flags, "direct-illcond");
        } catch (const SingularMatrix&) {
            row.cond_phi = std::numeric_limits<double>::infinity();
            append_flag(row.flags, "direct-singular");
        }
    }
}

PointSet aniso_nodes(std::size_t n) {
    // clustered Halton nodes on [-1,1]^2, keeping clear of the f_a singularity
    const double lo[2] = {-1.0, -1.0}, hi[2] = {1.0, 1.0};
    std::vector<double> flat;
    std::size_t skip = 0;
    while (flat.size() < 2 * n) {
        PointSet batch = cluster_boundary(box_scale(halton(n, 2, skip), lo, hi));
        for (std::size_t i = 0; i < batch.size() && flat.size() < 2 * n; ++i) {
            const double x = batch.pts(i, 0), y = batch.pts(i, 1);
            if (std::sqrt(x * x + y * y) < 1e-3) continue;
            flat.push_back(x);
            flat.push_back(y);
        }
        skip += n;
    }
    return {2, Matrix(n, 2, std::move(flat))};
}

PointSet grid2d_avoiding_origin(std::size_t side) {
    // uniform side x side grid on [-1,1]^2; grid points too close to the f_a
    // singularity are dropped and the error metric runs on the survivors
    std::vector<double> flat;
    for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = 0; j < side; ++j) {
            const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(side - 1);
            const double y = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(side - 1);
            if (std::sqrt(x * x + y * y) < 1e-3) continue;
            flat.push_back(x);
            flat.push_back(y);
        }
    const std::size_t n = flat.size() / 2;
    return {2, Matrix(n, 2, std::move(flat))};
}

Matrix aniso3d_pattern() {
    return Matrix{{1.0, 0.2, 0.3}, {0.2, 1.0, 0.15}, {0.1, 0.3, 1.0}};
}

struct Task {
    ResultRow seed;
    // parameters the worker needs beyond the seed row
    double eps = 0.0;
    double p = 0.0;
    int n = 0;
};

std::vector<ResultRow> run_tasks(const ExperimentConfig& cfg, const std::vector<Task>& tasks,
                                 const auto& worker) {
    std::vector<ResultRow> rows(tasks.size());
    auto run_one = [&](std::size_t i) {
        ResultRow row = tasks[i].seed;
        const auto start = std::chrono::steady_clock::now();
        try {
            worker(tasks[i], row);
        } catch (const Error& err) {
            row.error = kNaN;
            append_flag(row.flags, std::string("err-") + err.what());
        }
        const auto stop = std::chrono::steady_clock::now();
        row.runtime_ms =
            cfg.deterministic_runtime
                ? 0.0
                : std::chrono::duration<double, std::milli>(stop - start).count();
        rows[i] = std::move(row);
    };

    const int threads = std::max(1, cfg.threads);
    if (threads == 1 || tasks.size() <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size();
                     i = next.fetch_add(1))
                    run_one(i);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

} // namespace

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
    const std::string name = to_string(cfg.kind);
    std::vector<Task> tasks;

    auto seed_row = [&](int n, int d, double eps, const std::string& gamma_tag, double p) {
        Task t;
        t.seed.experiment = name;
        t.seed.n = n;
        t.seed.d = d;
        t.seed.eps = eps;
        t.seed.gamma_tag = gamma_tag;
        t.seed.p = p;
        t.seed.error = kNaN;
        t.seed.cond_psi = kNaN;
        t.seed.cond_phi = kNaN;
        t.eps = eps;
        t.p = p;
        t.n = n;
        return t;
    };

    switch (cfg.kind) {
        case ExperimentKind::iso2d_hyperbolic: {
            const std::string tag = fmt(cfg.gamma);
            for (int n : cfg.n_list)
                for (double eps : cfg.eps_list) tasks.push_back(seed_row(n, 2, eps, tag, 0.0));
            auto worker = [&](const Task& task, ResultRow& row) {
                CasePoints pts;
                pts.colloc = hyperbolic_nodes(static_cast<std::size_t>(task.n), true, false);
                pts.evalpts = hyperbolic_nodes(53 * 53, false, true);
                pts.f_col = sample("fh", pts.colloc);
                pts.f_eval = sample("fh", pts.evalpts);
                ShapeMatrix e = ShapeMatrix::isotropic(2, task.eps);
                Matrix g = identity(2);
                for (int i = 0; i < 2; ++i) g(i, i) = cfg.gamma;
                run_interpolation_case(cfg, pts, e, g, row);
            };
            return run_tasks(cfg, tasks, worker);
        }
        case ExperimentKind::aniso2d: {
            const std::string tag = fmt(cfg.gamma) + "*(1,0.3;0.1,1.3)";
            for (int n : cfg.n_list)
                for (double p : cfg.p_list)
                    for (double eps : cfg.eps_list) tasks.push_back(seed_row(n, 2, eps, tag, p));
            auto worker = [&](const Task& task, ResultRow& row) {
                CasePoints pts;
                pts.colloc = aniso_nodes(static_cast<std::size_t>(task.n));
                pts.evalpts = grid2d_avoiding_origin(53);
                pts.f_col = sample("fa", pts.colloc);
                pts.f_eval = sample("fa", pts.evalpts);
                Matrix em{{1.0, task.p}, {task.p, 1.0}};
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j) em(i, j) *= task.eps;
                ShapeMatrix e = ShapeMatrix::general(em);
                Matrix g{{1.0, 0.3}, {0.1, 1.3}};
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j) g(i, j) *= cfg.gamma;
                run_interpolation_case(cfg, pts, e, g, row);
            };
            return run_tasks(cfg, tasks, worker);
        }
        case ExperimentKind::multidim: {
            const std::string tag = fmt(cfg.gamma) + "*Id";
            for (int n : cfg.n_list)
                for (double eps : cfg.eps_list)
                    tasks.push_back(seed_row(n, cfg.dim, eps, tag, 0.0));
            auto worker = [&](const Task& task, ResultRow& row) {
                const int d = cfg.dim;
                std::vector<double> lo(d, -1.0), hi(d, 1.0);
                CasePoints pts;
                pts.colloc = box_scale(halton(static_cast<std::size_t>(task.n), d), lo, hi);
                pts.evalpts = box_scale(halton(1000, d, static_cast<std::size_t>(task.n)), lo, hi);
                pts.f_col = sample("fcos", pts.colloc);
                pts.f_eval = sample("fcos", pts.evalpts);
                ShapeMatrix e = [&] {
                    if (!cfg.anisotropic) return ShapeMatrix::isotropic(d, task.eps);
                    if (d != 3) throw DomainError("multidim: the anisotropic pattern is 3D");
                    Matrix em = aniso3d_pattern();
                    for (std::size_t i = 0; i < 3; ++i)
                        for (std::size_t j = 0; j < 3; ++j) em(i, j) *= task.eps;
                    return ShapeMatrix::general(em);
                }();
                Matrix g = identity(static_cast<std::size_t>(d));
                for (int i = 0; i < d; ++i) g(i, i) = cfg.gamma;
                run_interpolation_case(cfg, pts, e, g, row);
            };
            return run_tasks(cfg, tasks, worker);
        }
        case ExperimentKind::mehler_check: {
            const std::string tag = fmt(cfg.gamma) + "*Id";
            std::vector<double> ts = cfg.t_grid.empty() ? std::vector<double>{0.4} : cfg.t_grid;
            const int n = cfg.n_list.empty() ? 100 : cfg.n_list.front();
            for (double eps : cfg.eps_list)
                for (double t : ts) {
                    Task t0 = seed_row(n, 2, eps, tag, 0.0);
                    t0.seed.t = t;
                    tasks.push_back(t0);
                }
            auto worker = [&](const Task& task, ResultRow& row) {
                const int j_max = 60;
                const double lo[2] = {-1.0, -1.0}, hi[2] = {1.0, 1.0};
                PointSet nodes = box_scale(halton(static_cast<std::size_t>(task.n), 2), lo, hi);
                ShapeMatrix e = ShapeMatrix::isotropic(2, task.eps);
                Matrix g = identity(2);
                for (int i = 0; i < 2; ++i) g(i, i) = cfg.gamma;
                BasisSpec spec(e, g, row.t, Vector{0.0, 0.0}, j_max);
                Matrix h = hermitegf_eval(nodes, spec);
                double partial = 0.0, limit = 0.0;
                for (std::size_t p = 0; p < nodes.size(); ++p) {
                    for (std::size_t l = 0; l < spec.basis_count(); ++l)
                        partial += h(p, l) * h(p, l);
                    limit += hlim(nodes.point(p), spec);
                }
                row.jmax = j_max;
                row.m = spec.basis_count();
                row.error = std::abs(std::sqrt(partial) - std::sqrt(limit)) / std::sqrt(limit);
            };
            return run_tasks(cfg, tasks, worker);
        }
        case ExperimentKind::criterion_compare: {
            const std::string tag = fmt(cfg.gamma) + "*Id";
            const int n = cfg.n_list.empty() ? 66 : cfg.n_list.front();
            const double t = cfg.t_grid.empty() ? 0.5 : cfg.t_grid.front();
            for (double eps : cfg.eps_list) {
                Task t0 = seed_row(n, 2, eps, tag, 0.0);
                t0.seed.t = t;
                tasks.push_back(t0);
            }
            auto worker = [&](const Task& task, ResultRow& row) {
                const double lo[2] = {-1.0, -1.0}, hi[2] = {1.0, 1.0};
                PointSet colloc = box_scale(halton(static_cast<std::size_t>(task.n), 2), lo, hi);
                ShapeMatrix e = ShapeMatrix::isotropic(2, task.eps);
                Matrix g = identity(2);
                for (int i = 0; i < 2; ++i) g(i, i) = cfg.gamma;
                Vector x0 = default_center(colloc);
                CutoffConfig ccfg;
                ccfg.tol = cfg.tol;
                CutoffResult fine = choose_jmax(colloc, e, g, x0, row.t, ccfg);
                ccfg.tol = 1e-2;
                CutoffResult coarse = choose_jmax(colloc, e, g, x0, row.t, ccfg);
                row.jmax = fine.j_max;
                row.m = fine.m;
                row.error = kNaN;
                append_flag(row.flags, "jmax_tol1e-2=" + std::to_string(coarse.j_max));
                append_flag(row.flags, "legacy=" + std::to_string(fine.legacy_j_max));
                if (!fine.converged) append_flag(row.flags, "err-criterion-not-met");
            };
            return run_tasks(cfg, tasks, worker);
        }
    }
    throw DomainError("run_experiment: unhandled experiment kind");
}

std::string csv_string(const std::vector<ResultRow>& rows) {
    std::string out = "experiment,N,d,eps,gamma_tag,p,t,jmax,M,error,cond_psi,cond_phi,"
                      "runtime_ms,flags\n";
    for (const ResultRow& r : rows) {
        out += r.experiment;
        out += ',' + std::to_string(r.n);
        out += ',' + std::to_string(r.d);
        out += ',' + fmt(r.eps);
        out += ',' + r.gamma_tag;
        out += ',' + fmt(r.p);
        out += ',' + fmt(r.t);
        out += ',' + std::to_string(r.jmax);
        out += ',' + std::to_string(r.m);
        out += ',' + fmt(r.error);
        out += ',' + fmt(r.cond_psi);
        out += ',' + fmt(r.cond_phi);
        out += ',' + fmt(r.runtime_ms);
        out += ',' + r.flags;
        out += '\n';
    }
    return out;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("emit_csv: cannot open " + path);
    f << csv_string(rows);
    if (!f) throw IoError("emit_csv: write failed for " + path);
}

} // namespace hermitegf
