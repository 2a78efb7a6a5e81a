// scri-solve: command-line harness for the scattering experiments.
//
//   scri-solve <experiment> --config <path> [--k --kappa --m --nrho --ntheta
//              --medium --route --out ...] [--check]
//
// Exit codes: 0 success, 2 config error, 3 solver error, 4 check-tolerance
// failure in --check mode.

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

#include "scri/scri.hpp"

int main(int argc, char** argv) {
    CLI::App app{"scri-solve: far-field scattering experiments at null infinity"};
    app.require_subcommand(1);

    std::string config_path, out_dir, medium, route, modes_csv, nrho_csv;
    std::string format = "both";
    double k = -1.0, kappa = -1.0, beta = -1.0, theta0 = -1.0, d = -1.0,
           r0 = -1.0, check_tol = -1.0;
    int ntheta = -1, workers = -1;
    bool check = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key=value config file");
        sub->add_option("--k", k, "wavenumber");
        sub->add_option("--kappa", kappa, "medium strength parameter");
        sub->add_option("--m", modes_csv, "mode list, e.g. 0,4,8");
        sub->add_option("--nrho", nrho_csv, "radial degree list, e.g. 8,16,32,64");
        sub->add_option("--ntheta", ntheta, "angular point count (even)");
        sub->add_option("--medium", medium,
                        "constant | quadratic | linear | anisotropic");
        sub->add_option("--route", route, "characteristic | hyperbolic");
        sub->add_option("--beta", beta, "beam concentration");
        sub->add_option("--theta0", theta0, "beam direction");
        sub->add_option("--d", d, "anisotropic offset");
        sub->add_option("--r0", r0, "anisotropic core radius");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "csv | json | both");
        sub->add_option("--check-tol", check_tol, "override check tolerance");
        sub->add_option("--workers", workers, "worker pool size");
        sub->add_flag("--check", check, "validate against shipped tolerances");
    };
    for (auto* name : {"modal-convergence", "beam-compare",
                       "anisotropic-selfconv", "barrier-scan", "scattering-map"})
        add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);

    try {
        scri::experiments::config cfg;
        if (!config_path.empty())
            cfg = scri::experiments::parse_config_file(config_path);
        cfg.experiment = app.get_subcommands().front()->get_name();
        if (k > 0) cfg.k = k;
        if (kappa >= 0) cfg.kappa = kappa;
        if (!modes_csv.empty()) scri::experiments::apply_key(cfg, "m", modes_csv);
        if (!nrho_csv.empty()) scri::experiments::apply_key(cfg, "nrho", nrho_csv);
        if (ntheta > 0) cfg.n_theta = ntheta;
        if (!medium.empty()) cfg.medium = medium;
        if (!route.empty()) cfg.route = route;
        if (beta > 0) cfg.beta = beta;
        if (theta0 >= 0) cfg.theta0 = theta0;
        if (d >= 0) cfg.offset_d = d;
        if (r0 >= 0) cfg.core_r0 = r0;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (check) cfg.check = true;
        if (check_tol > 0) cfg.check_tol = check_tol;
        if (workers > 0) cfg.workers = workers;

        scri::experiments::validate(cfg);
        auto t0 = std::chrono::steady_clock::now();
        auto art = scri::experiments::run(cfg);
        auto t1 = std::chrono::steady_clock::now();
        double wall = std::chrono::duration<double>(t1 - t0).count();
        auto files = scri::experiments::emit(art, cfg, format, wall);
        for (auto& f : files) std::cout << "wrote " << f << "\n";
        std::cout << "summary: " << art.summary.dump() << "\n";
        if (cfg.check && art.check_failed) {
            std::cerr << "check FAILED against shipped tolerances\n";
            return 4;
        }
        return 0;
    } catch (const scri::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const scri::error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
