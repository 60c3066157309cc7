#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hermitegf/experiments.hpp"

namespace {

using nlohmann::json;

hermitegf::ExperimentConfig config_from_json(const json& j) {
    hermitegf::ExperimentConfig cfg;
    cfg.kind = hermitegf::experiment_from_string(j.at("experiment").get<std::string>());
    if (j.contains("N")) cfg.n_list = j.at("N").get<std::vector<int>>();
    if (j.contains("eps")) cfg.eps_list = j.at("eps").get<std::vector<double>>();
    if (j.contains("gamma")) cfg.gamma = j.at("gamma").get<double>();
    if (j.contains("p")) cfg.p_list = j.at("p").get<std::vector<double>>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("t_grid")) cfg.t_grid = j.at("t_grid").get<std::vector<double>>();
    if (j.contains("dim")) cfg.dim = j.at("dim").get<int>();
    if (j.contains("anisotropic")) cfg.anisotropic = j.at("anisotropic").get<bool>();
    if (j.contains("run_direct")) cfg.run_direct = j.at("run_direct").get<bool>();
    if (j.contains("deterministic_runtime"))
        cfg.deterministic_runtime = j.at("deterministic_runtime").get<bool>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
    return cfg;
}

int finish(const hermitegf::ExperimentConfig& cfg,
           const std::vector<hermitegf::ResultRow>& rows) {
    std::cout << hermitegf::csv_string(rows);
    if (!cfg.out_path.empty()) hermitegf::emit_csv(rows, cfg.out_path);
    for (const auto& row : rows)
        if (row.flags.find("err-") != std::string::npos) return 2;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"HermiteGF-QR: stable Gaussian interpolation in the flat limit"};
    app.require_subcommand(1);

    std::string config_path, out_override;
    double tol_override = -1.0;
    int threads_override = 0;

    CLI::App* run = app.add_subcommand("run", "run an experiment described by a JSON config");
    run->add_option("config", config_path, "path to the config JSON")->required();
    run->add_option("--out", out_override, "override the CSV output path");
    run->add_option("--tol", tol_override, "override the cut-off tolerance");
    run->add_option("--threads", threads_override, "override the worker thread count");

    std::string mehler_out, crit_out;
    CLI::App* mehler = app.add_subcommand("mehler-check",
                                          "partial basis norms against the analytic limit");
    mehler->add_option("--out", mehler_out, "CSV output path");
    CLI::App* crit = app.add_subcommand("criterion-compare",
                                        "analytic cut-off degree vs the legacy criterion");
    crit->add_option("--out", crit_out, "CSV output path");
    app.add_subcommand("info", "print library and experiment information");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::ifstream f(config_path);
            if (!f) throw hermitegf::IoError("cannot open config " + config_path);
            json j = json::parse(f);
            hermitegf::ExperimentConfig cfg = config_from_json(j);
            if (!out_override.empty()) cfg.out_path = out_override;
            if (tol_override > 0.0) cfg.tol = tol_override;
            if (threads_override > 0) cfg.threads = threads_override;
            return finish(cfg, hermitegf::run_experiment(cfg));
        }
        if (mehler->parsed()) {
            hermitegf::ExperimentConfig cfg;
            cfg.kind = hermitegf::ExperimentKind::mehler_check;
            cfg.n_list = {100};
            cfg.eps_list = {0.01, 1.0};
            cfg.t_grid = {0.4};
            cfg.gamma = 1.0;
            cfg.out_path = mehler_out;
            return finish(cfg, hermitegf::run_experiment(cfg));
        }
        if (crit->parsed()) {
            hermitegf::ExperimentConfig cfg;
            cfg.kind = hermitegf::ExperimentKind::criterion_compare;
            cfg.n_list = {66};
            cfg.eps_list = {0.01, 0.1, 1.0};
            cfg.t_grid = {0.5};
            cfg.gamma = 3.5;
            cfg.out_path = crit_out;
            return finish(cfg, hermitegf::run_experiment(cfg));
        }
        // info
        std::cout << "hermitegf: stable interpolation with isotropic and anisotropic\n"
                     "Gaussian kernels via the HermiteGF expansion and HermiteGF-QR.\n\n"
                     "experiments: iso2d-hyperbolic, aniso2d, multidim, mehler-check,\n"
                     "             criterion-compare\n"
                     "config keys: experiment, N, eps, gamma, p, tol, t_grid, dim,\n"
                     "             anisotropic, run_direct, deterministic_runtime,\n"
                     "             threads, out\n"
                     "CSV schema:  experiment,N,d,eps,gamma_tag,p,t,jmax,M,error,\n"
                     "             cond_psi,cond_phi,runtime_ms,flags\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
