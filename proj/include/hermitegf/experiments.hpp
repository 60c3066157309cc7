#ifndef HERMITEGF_EXPERIMENTS_HPP
#define HERMITEGF_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "hermitegf/cutoff.hpp"
#include "hermitegf/pointsets.hpp"

namespace hermitegf {

enum class ExperimentKind {
    iso2d_hyperbolic,
    aniso2d,
    multidim,
    mehler_check,
    criterion_compare,
};

std::string to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& name);

/// Declarative description of one parameter scan. Everything is seed-free;
/// identical configs reproduce identical results byte for byte (runtimes are
/// zeroed unless deterministic_runtime is switched off).
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::iso2d_hyperbolic;
    std::vector<int> n_list{66};
    std::vector<double> eps_list{0.05};
    double gamma = 3.5;
    std::vector<double> p_list{0.0};
    double tol = 1e-6;
    std::vector<double> t_grid;  // empty = cutoff default grid
    int dim = 2;                 // multidim only
    bool anisotropic = false;    // multidim only: fixed 3D off-diagonal pattern
    bool run_direct = true;
    bool deterministic_runtime = true;
    int threads = 1;
    std::string out_path;        // empty = no CSV file
};

struct ResultRow {
    std::string experiment;
    int n = 0;
    int d = 0;
    double eps = 0.0;
    std::string gamma_tag;
    double p = 0.0;
    double t = 0.0;
    int jmax = 0;
    std::size_t m = 0;
    double error = 0.0;
    double cond_psi = 0.0;
    double cond_phi = 0.0;
    double runtime_ms = 0.0;
    std::string flags; // semicolon tokens; "err-*" marks a failed row
};

/// The average relative error (1/N_ev) sqrt(sum ((f - s)/f)^2). Every true
/// value must be nonzero.
double error_metric(const Vector& f_true, const Vector& s);

/// Named test functions: "fh" and "fa" on the plane, "fcos" in any dimension.
double test_function(const std::string& name, std::span<const double> x);

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg);

std::string csv_string(const std::vector<ResultRow>& rows);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path);

} // namespace hermitegf

#endif
