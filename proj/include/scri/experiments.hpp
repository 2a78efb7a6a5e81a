#pragma once

// Experiment harness behind the CLI: run configuration (flat key=value file
// plus overrides), the five experiment drivers, and deterministic CSV/JSON
// emission with a manifest per run.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scri/pipeline.hpp"

namespace scri::experiments {

using nlohmann::json;
using std::complex;

inline constexpr const char* version_string = "scri-solve 1.0.0";

struct config {
    std::string experiment;
    std::string medium = "constant";
    double kappa = 0.0;
    double offset_d = 0.0;
    double core_r0 = 1.0;
    std::string route = "characteristic";
    double k = 2.0;
    std::vector<int> modes = {0};
    double beta = 1.0;
    double theta0 = specfun::pi;
    std::vector<int> n_rho = {8, 16, 24, 32, 48, 64};
    int n_theta = 0;  // 0: derived per run (2m+6 for modal experiments)
    std::vector<double> k_list;          // barrier scan
    std::vector<double> kappa_list;      // modal convergence sweeps
    std::vector<double> beta_list;       // beam compare
    std::vector<double> offset_list;     // anisotropic self-convergence
    std::vector<int> n_list = {16, 64};  // barrier scan resolutions
    std::string out_dir = ".";
    bool check = false;
    double check_tol = 0.0;  // experiment-specific default when 0
    int workers = 1;
};

namespace detail_ex {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r\n");
    auto b = s.find_last_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

inline std::vector<int> parse_int_list(const std::string& v) {
    std::vector<int> out;
    for (auto& t : split(v, ',')) out.push_back(std::stoi(t));
    return out;
}

inline std::vector<double> parse_double_list(const std::string& v) {
    std::vector<double> out;
    for (auto& t : split(v, ',')) out.push_back(std::stod(t));
    return out;
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt_fixed(double v, int prec) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

}  // namespace detail_ex

inline void apply_key(config& c, const std::string& key, const std::string& val) {
    using namespace detail_ex;
    if (key == "experiment") c.experiment = val;
    else if (key == "medium") c.medium = val;
    else if (key == "kappa") c.kappa = std::stod(val);
    else if (key == "d" || key == "offset_d") c.offset_d = std::stod(val);
    else if (key == "r0" || key == "core_r0") c.core_r0 = std::stod(val);
    else if (key == "route") c.route = val;
    else if (key == "k") c.k = std::stod(val);
    else if (key == "m" || key == "modes") c.modes = parse_int_list(val);
    else if (key == "beta") c.beta = std::stod(val);
    else if (key == "theta0") c.theta0 = std::stod(val);
    else if (key == "nrho" || key == "n_rho") c.n_rho = parse_int_list(val);
    else if (key == "ntheta" || key == "n_theta") c.n_theta = std::stoi(val);
    else if (key == "k_list") c.k_list = parse_double_list(val);
    else if (key == "kappa_list") c.kappa_list = parse_double_list(val);
    else if (key == "beta_list") c.beta_list = parse_double_list(val);
    else if (key == "offset_list") c.offset_list = parse_double_list(val);
    else if (key == "n_list") c.n_list = parse_int_list(val);
    else if (key == "out" || key == "out_dir") c.out_dir = val;
    else if (key == "check") c.check = (val == "1" || val == "true" || val == "yes");
    else if (key == "check_tol") c.check_tol = std::stod(val);
    else if (key == "workers") c.workers = std::stoi(val);
    else throw config_error("unknown config key '" + key + "'");
}

inline config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = detail_ex::trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
        apply_key(c, detail_ex::trim(t.substr(0, eq)),
                  detail_ex::trim(t.substr(eq + 1)));
    }
    return c;
}

inline media::medium make_medium(const config& c) {
    if (c.medium == "constant") return media::constant_medium();
    if (c.medium == "quadratic" || c.medium == "short_range")
        return media::quadratic_medium(c.kappa);
    if (c.medium == "linear" || c.medium == "long_range")
        return media::linear_medium(c.kappa);
    if (c.medium == "anisotropic")
        return media::anisotropic_medium(c.kappa, c.offset_d, c.core_r0);
    throw config_error("unknown medium '" + c.medium + "'");
}

inline pipeline::route make_route(const config& c) {
    if (c.route == "characteristic") return pipeline::route::characteristic;
    if (c.route == "hyperbolic") return pipeline::route::hyperbolic;
    throw config_error("unknown route '" + c.route + "'");
}

// Config validation ahead of any solve.
inline void validate(const config& c) {
    if (c.experiment.empty()) throw config_error("experiment not set");
    static const char* known[] = {"modal-convergence", "beam-compare",
                                  "anisotropic-selfconv", "barrier-scan",
                                  "scattering-map"};
    bool ok = false;
    for (auto* e : known) ok = ok || c.experiment == e;
    if (!ok) throw config_error("unknown experiment '" + c.experiment + "'");
    pipeline::route rt = make_route(c);
    media::medium med = make_medium(c);
    if (rt == pipeline::route::hyperbolic &&
        med.tail == media::tail_class::long_range)
        throw config_error(
            "long-range medium on the hyperbolic route violates the rate "
            "condition (Eq. n^2 - H^2 = O(G)): kappa/r decays slower than G");
    for (int n : c.n_rho)
        if (n < 4 || n > spectral::max_radial_degree)
            throw config_error("n_rho out of range: " + std::to_string(n));
    if (c.n_theta != 0 &&
        (c.n_theta < 2 || c.n_theta % 2 != 0 ||
         c.n_theta > spectral::max_angular_points))
        throw config_error("n_theta out of range: " + std::to_string(c.n_theta));
    if (!(c.k > 0.0)) throw config_error("k must be positive");
}

// ---------------------------------------------------------------------------
// Artifacts
// ---------------------------------------------------------------------------

struct artifact {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    json summary;  // experiment-level scalars (fitted slopes, flags, ...)
    bool check_failed = false;
};

inline json config_to_json(const config& c) {
    json j;
    j["experiment"] = c.experiment;
    j["medium"] = c.medium;
    j["kappa"] = c.kappa;
    j["offset_d"] = c.offset_d;
    j["core_r0"] = c.core_r0;
    j["route"] = c.route;
    j["k"] = c.k;
    j["modes"] = c.modes;
    j["beta"] = c.beta;
    j["theta0"] = c.theta0;
    j["n_rho"] = c.n_rho;
    j["n_theta"] = c.n_theta;
    j["k_list"] = c.k_list;
    j["kappa_list"] = c.kappa_list;
    j["beta_list"] = c.beta_list;
    j["offset_list"] = c.offset_list;
    j["n_list"] = c.n_list;
    j["out_dir"] = c.out_dir;
    j["check"] = c.check;
    j["check_tol"] = c.check_tol;
    j["workers"] = c.workers;
    return j;
}

// Deterministic CSV/JSON emission plus a manifest carrying the resolved
// config, versions, and timings.
inline std::vector<std::string> emit(const artifact& a, const config& c,
                                     const std::string& format,
                                     double wall_seconds) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(c.out_dir, ec);
    if (ec) throw io_error("cannot create output directory: " + c.out_dir);
    std::vector<std::string> written;

    if (format == "csv" || format == "both") {
        fs::path p = fs::path(c.out_dir) / (a.name + ".csv");
        std::ofstream out(p, std::ios::binary);
        if (!out) throw io_error("cannot write " + p.string());
        for (std::size_t i = 0; i < a.columns.size(); ++i)
            out << (i ? "," : "") << a.columns[i];
        out << "\n";
        for (auto& row : a.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? "," : "") << row[i];
            out << "\n";
        }
        if (!out) throw io_error("write failed: " + p.string());
        written.push_back(p.string());
    }
    if (format == "json" || format == "both") {
        fs::path p = fs::path(c.out_dir) / (a.name + ".json");
        json j;
        j["columns"] = a.columns;
        j["rows"] = a.rows;
        j["summary"] = a.summary;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw io_error("cannot write " + p.string());
        out << j.dump(2) << "\n";
        written.push_back(p.string());
    }
    {
        fs::path p = fs::path(c.out_dir) / (a.name + ".manifest.json");
        json j;
        j["artifact"] = a.name;
        j["version"] = version_string;
        j["config"] = config_to_json(c);
        j["wall_seconds"] = wall_seconds;
        j["summary"] = a.summary;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw io_error("cannot write " + p.string());
        out << j.dump(2) << "\n";
        written.push_back(p.string());
    }
    return written;
}

// Least-squares slope of log10(err) vs N over the pre-floor segment.
inline double fitted_decay_slope(const std::vector<int>& ns,
                                 const std::vector<double>& errs) {
    double floor_err = *std::min_element(errs.begin(), errs.end());
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (errs[i] > 10.0 * floor_err || errs[i] == floor_err) {
            xs.push_back(ns[i]);
            ys.push_back(std::log10(std::max(errs[i], 1e-300)));
        }
    }
    if (xs.size() < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double n = double(xs.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Experiment drivers
// ---------------------------------------------------------------------------

// Modal scattering-map convergence sweep (error vs N_rho per mode).
inline artifact run_modal_convergence(const config& c) {
    validate(c);
    media::medium med = make_medium(c);
    pipeline::route rt = make_route(c);
    std::vector<double> kappas = c.kappa_list.empty()
                                     ? std::vector<double>{c.kappa}
                                     : c.kappa_list;

    artifact a;
    a.name = "modal_convergence";
    a.columns = {"m", "k", "kappa", "n_rho", "n_theta",
                 "error", "condition_estimate", "wall_seconds"};

    struct point {
        double kappa;
        int m, nrho, ntheta;
        double err, cond, wall;
    };
    std::vector<point> pts;
    for (double kap : kappas)
        for (int m : c.modes)
            for (int nr : c.n_rho) {
                point p;
                p.kappa = kap;
                p.m = m;
                p.nrho = nr;
                p.ntheta = c.n_theta ? c.n_theta : 2 * std::abs(m) + 6;
                pts.push_back(p);
            }

    // Worker pool keyed by (m, n_rho); results stored by index so emission
    // order follows the config regardless of completion order.
    auto work = [&](point p) {
        media::medium pm = med;
        if (med.tail == media::tail_class::short_range)
            pm = media::quadratic_medium(p.kappa);
        else if (med.tail == media::tail_class::long_range)
            pm = media::linear_medium(p.kappa);
        auto t0 = std::chrono::steady_clock::now();
        std::vector<int> one = {p.m};
        auto entries = pipeline::scattering_map(rt, pm, c.k, one,
                                                {p.nrho, p.ntheta});
        auto t1 = std::chrono::steady_clock::now();
        complex<double> Sref;
        switch (pm.tail) {
            case media::tail_class::constant:
                Sref = reference::S_constant(p.m, c.k);
                break;
            case media::tail_class::short_range:
                Sref = reference::S_quadratic(p.m, c.k, p.kappa);
                break;
            case media::tail_class::long_range:
                Sref = reference::S_longrange(p.m, c.k, p.kappa);
                break;
            default:
                throw config_error("modal-convergence needs a radial medium");
        }
        p.err = std::abs(entries[0].S - Sref);
        p.cond = entries[0].condition_estimate;
        p.wall = std::chrono::duration<double>(t1 - t0).count();
        return p;
    };

    const int workers = std::max(1, c.workers);
    std::vector<point> done(pts.size());
    for (std::size_t base = 0; base < pts.size(); base += workers) {
        std::vector<std::future<point>> batch;
        for (std::size_t i = base; i < std::min(base + workers, pts.size()); ++i)
            batch.push_back(std::async(std::launch::async, work, pts[i]));
        for (std::size_t i = 0; i < batch.size(); ++i)
            done[base + i] = batch[i].get();
    }

    json slopes = json::object();
    for (double kap : kappas)
        for (int m : c.modes) {
            std::vector<int> ns;
            std::vector<double> errs;
            for (auto& p : done)
                if (p.m == m && p.kappa == kap) {
                    ns.push_back(p.nrho);
                    errs.push_back(p.err);
                }
            std::string key = "m=" + std::to_string(m) +
                              ",kappa=" + detail_ex::fmt(kap);
            slopes[key] = fitted_decay_slope(ns, errs);
        }
    a.summary["fitted_slopes"] = slopes;

    double final_err = 0.0;
    for (auto& p : done) {
        a.rows.push_back({std::to_string(p.m), detail_ex::fmt(c.k),
                          detail_ex::fmt(p.kappa), std::to_string(p.nrho),
                          std::to_string(p.ntheta), detail_ex::fmt(p.err),
                          detail_ex::fmt(p.cond),
                          detail_ex::fmt_fixed(p.wall, 4)});
        if (p.nrho == c.n_rho.back()) final_err = std::max(final_err, p.err);
    }
    a.summary["final_error_max"] = final_err;

    if (c.check) {
        double tol = c.check_tol > 0 ? c.check_tol : 1e-7;
        bool slopes_ok = true;
        for (auto& [key, v] : slopes.items())
            if (v.get<double>() >= 0.0) slopes_ok = false;
        a.check_failed = final_err > tol || !slopes_ok;
    }
    return a;
}

// Beam far-field comparison against the modal reference synthesis.
inline artifact run_beam_compare(const config& c) {
    validate(c);
    media::medium med = make_medium(c);
    pipeline::route rt = make_route(c);
    std::vector<double> betas =
        c.beta_list.empty() ? std::vector<double>{c.beta} : c.beta_list;
    const int nt = c.n_theta ? c.n_theta : 64;
    const int nr = c.n_rho.back();

    artifact a;
    a.name = "beam_compare";
    a.columns = {"beta", "theta", "re_num", "im_num", "re_ref", "im_ref"};
    json errs = json::object();
    for (double beta : betas) {
        auto ff = pipeline::scatter_beam(rt, med, c.k, {beta, c.theta0}, {nr, nt});
        int M = std::min(220, std::max(nt / 2 + 8, int(4.0 * std::sqrt(beta)) + 24));
        auto ref = reference::beam_far_field(beta, c.theta0, c.k, med.tail,
                                             c.kappa, M, ff.ag.nodes);
        for (int j = 0; j < nt; ++j)
            a.rows.push_back({detail_ex::fmt(beta), detail_ex::fmt(ff.ag.nodes[j]),
                              detail_ex::fmt(ff.values[j].real()),
                              detail_ex::fmt(ff.values[j].imag()),
                              detail_ex::fmt(ref[j].real()),
                              detail_ex::fmt(ref[j].imag())});
        double e = pipeline::rel_error_l2(ff.values, ref);
        std::string key = "beta=" + detail_ex::fmt(beta);
        errs[key] = e;
        errs[key + ",under_resolved"] = ff.under_resolved;
    }
    a.summary["l2_errors"] = errs;
    if (c.check) {
        double tol = c.check_tol > 0 ? c.check_tol : 1e-3;
        for (auto& [key, v] : errs.items())
            if (v.is_number() && v.get<double>() > tol) a.check_failed = true;
    }
    return a;
}

// Anisotropic self-convergence against the highest-resolution reference.
inline artifact run_anisotropic_selfconv(const config& c) {
    validate(c);
    if (make_route(c) != pipeline::route::hyperbolic)
        throw config_error("anisotropic-selfconv requires route=hyperbolic");
    std::vector<double> ds =
        c.offset_list.empty() ? std::vector<double>{c.offset_d} : c.offset_list;
    const int ref_nr = 64, ref_nt = 128;
    const int sweep_nt = c.n_theta ? c.n_theta : 64;

    artifact a;
    a.name = "anisotropic_selfconv";
    a.columns = {"d", "n_rho", "n_theta", "error_vs_reference", "wall_seconds"};
    json floors = json::object();
    for (double d : ds) {
        auto med = media::anisotropic_medium(c.kappa, d, c.core_r0);
        auto t0 = std::chrono::steady_clock::now();
        auto ref = pipeline::scatter_beam(pipeline::route::hyperbolic, med, c.k,
                                          {c.beta, c.theta0}, {ref_nr, ref_nt});
        auto t1 = std::chrono::steady_clock::now();
        double ref_wall = std::chrono::duration<double>(t1 - t0).count();
        a.rows.push_back({detail_ex::fmt(d), std::to_string(ref_nr),
                          std::to_string(ref_nt), "0", detail_ex::fmt_fixed(ref_wall, 3)});
        // compare on the shared coarse grid (ref_nt is a multiple of sweep_nt)
        int stride = ref_nt / sweep_nt;
        std::vector<complex<double>> ref_coarse(sweep_nt);
        for (int j = 0; j < sweep_nt; ++j) ref_coarse[j] = ref.values[j * stride];
        double floor_err = 1.0;
        for (int nr : c.n_rho) {
            if (nr >= ref_nr) continue;
            auto s0 = std::chrono::steady_clock::now();
            auto ff = pipeline::scatter_beam(pipeline::route::hyperbolic, med,
                                             c.k, {c.beta, c.theta0},
                                             {nr, sweep_nt});
            auto s1 = std::chrono::steady_clock::now();
            double err = pipeline::rel_error_l2(ff.values, ref_coarse);
            floor_err = std::min(floor_err, err);
            a.rows.push_back({detail_ex::fmt(d), std::to_string(nr),
                              std::to_string(sweep_nt), detail_ex::fmt(err),
                              detail_ex::fmt_fixed(
                                  std::chrono::duration<double>(s1 - s0).count(), 3)});
        }
        floors["d=" + detail_ex::fmt(d)] = floor_err;
    }
    a.summary["floors"] = floors;
    if (c.check) {
        for (auto& [key, v] : floors.items()) {
            double want = key == "d=0" ? 1e-10 : 1e-9;
            if (c.check_tol > 0) want = c.check_tol;
            if (v.get<double>() > want) a.check_failed = true;
        }
    }
    return a;
}

// 1-D modal barrier study: incident and scattered errors vs k, with the
// scattered solve driven by the analytic inner boundary datum.
inline artifact run_barrier_scan(const config& c) {
    validate(c);
    if (make_medium(c).tail != media::tail_class::constant)
        throw config_error("barrier-scan runs on the constant medium");
    auto med = media::constant_medium();
    auto comp = geometry::standard_compactification();
    std::vector<double> ks = c.k_list;
    if (ks.empty()) {
        for (int j = 0; j <= 18; ++j) ks.push_back(1e-3 * std::pow(10.0, j / 3.0));
        ks.push_back(2.0);
        ks.push_back(32.0);
        std::sort(ks.begin(), ks.end());
    }

    artifact a;
    a.name = "barrier_scan";
    a.columns = {"m", "k", "n_rho", "incident_error", "scattered_error"};
    bool scat_le_inc = true;
    for (int m : c.modes)
        for (int N : c.n_list)
            for (double k : ks) {
                auto g = spectral::build_radial_grid(0.5, N);
                auto hin = geometry::characteristic_height(
                    comp, med, geometry::direction::incoming);
                auto hout = geometry::characteristic_height(
                    comp, med, geometry::direction::outgoing);
                auto cin = nic::assemble_general(comp, hin, med, k);
                auto cot = nic::assemble_general(comp, hout, med, k);
                auto fields =
                    reference::modal_fields(media::tail_class::constant, m, k, 0.0);
                auto sysi = spectral::assemble_modal_system(
                    cin, m, g, geometry::direction::incoming, 1.0);
                auto ui = spectral::solve(std::move(sysi.A), std::move(sysi.rhs));
                complex<double> Am = std::sqrt(specfun::pi * k / 2.0) *
                                     std::polar(1.0, -0.5 * specfun::pi * (m + 0.5));
                complex<double> bc = -std::exp(complex<double>(0.0, -k)) * Am *
                                     specfun::hankel(m, 2, k);
                auto syss = spectral::assemble_modal_system(
                    cot, m, g, geometry::direction::outgoing, bc);
                auto us = spectral::solve(std::move(syss.A), std::move(syss.rhs));
                std::vector<complex<double>> uie(N + 1), use_(N + 1);
                for (int i = 0; i <= N; ++i) {
                    double rho = g.nodes[i];
                    if (i == N) {
                        uie[i] = 1.0;
                        use_[i] = reference::S_constant(m, k);
                    } else {
                        double r = rho / (1.0 - rho);
                        uie[i] = std::sqrt(r) * std::polar(1.0, k * r) *
                                 fields.incident(r);
                        use_[i] = std::sqrt(r) * std::polar(1.0, -k * r) *
                                  fields.scattered(r);
                    }
                }
                double ei = pipeline::rel_error_l2(ui, uie);
                double es = pipeline::rel_error_l2(us, use_);
                if (m != 0 && es > ei + 1e-11) scat_le_inc = false;
                a.rows.push_back({std::to_string(m), detail_ex::fmt(k),
                                  std::to_string(N), detail_ex::fmt(ei),
                                  detail_ex::fmt(es)});
            }
    a.summary["scattered_le_incident"] = scat_le_inc;
    if (c.check) a.check_failed = !scat_le_inc;
    return a;
}

// Scattering-map table at fixed resolution.
inline artifact run_scattering_map(const config& c) {
    validate(c);
    media::medium med = make_medium(c);
    pipeline::route rt = make_route(c);
    const int nr = c.n_rho.back();

    artifact a;
    a.name = "scattering_map";
    a.columns = {"m", "k", "kappa", "n_rho", "re_S", "im_S", "abs_S",
                 "condition_estimate"};
    for (int m : c.modes) {
        int nt = c.n_theta ? c.n_theta : 2 * std::abs(m) + 6;
        std::vector<int> one = {m};
        auto entries = pipeline::scattering_map(rt, med, c.k, one, {nr, nt});
        auto& e = entries[0];
        a.rows.push_back({std::to_string(m), detail_ex::fmt(c.k),
                          detail_ex::fmt(c.kappa), std::to_string(nr),
                          detail_ex::fmt(e.S.real()), detail_ex::fmt(e.S.imag()),
                          detail_ex::fmt(std::abs(e.S)),
                          detail_ex::fmt(e.condition_estimate)});
    }
    return a;
}

inline artifact run(const config& c) {
    if (c.experiment == "modal-convergence") return run_modal_convergence(c);
    if (c.experiment == "beam-compare") return run_beam_compare(c);
    if (c.experiment == "anisotropic-selfconv") return run_anisotropic_selfconv(c);
    if (c.experiment == "barrier-scan") return run_barrier_scan(c);
    if (c.experiment == "scattering-map") return run_scattering_map(c);
    throw config_error("unknown experiment '" + c.experiment + "'");
}

}  // namespace scri::experiments
