#pragma once

// Radial compactifications and height functions, plus the numerical
// validator for the theorem hypotheses:
//   (i)   r^2(rho) G(rho) -> eta as rho -> 1
//   (ii)  (n^2 - H^2)/G bounded up to rho = 1
//   (iii) boost bounded by the local characteristic speed, |H| <= n,
//         with H -> +/-1 matching the direction.
//
// Everything is expressed through closed forms that stay finite at rho = 1
// (inv_r = 1/r, G r^2, r^2 (1 - H^2)); composing media and heights through
// these avoids 0 * inf at the boundary node.

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "scri/errors.hpp"
#include "scri/media.hpp"

namespace scri::geometry {

enum class direction { incoming, outgoing };

inline double direction_sign(direction d) {
    return d == direction::outgoing ? 1.0 : -1.0;
}

struct compactification {
    std::function<double(double)> r_of_rho;
    std::function<double(double)> drdrho;      // r'(rho)
    std::function<double(double)> G;           // 1/r'
    std::function<double(double)> dG_drho;
    std::function<double(double)> G_r2;        // G * r^2, finite at rho = 1
    std::function<double(double)> inv_r;       // 1/r, vanishes at rho = 1
    std::function<double(double)> dinvr_drho;
    std::function<double(double)> rho_of_r;
    double eta_limit = 1.0;
    double rho_obstacle = 0.5;  // preimage of r = 1
    std::string name;
};

// r = rho/(1-rho), G = (1-rho)^2; obstacle r=1 at rho = 1/2.
inline compactification standard_compactification() {
    compactification c;
    c.name = "standard";
    c.r_of_rho = [](double rho) { return rho / (1.0 - rho); };
    c.drdrho = [](double rho) { return 1.0 / ((1.0 - rho) * (1.0 - rho)); };
    c.G = [](double rho) { return (1.0 - rho) * (1.0 - rho); };
    c.dG_drho = [](double rho) { return -2.0 * (1.0 - rho); };
    c.G_r2 = [](double rho) { return rho * rho; };
    c.inv_r = [](double rho) { return (1.0 - rho) / rho; };
    c.dinvr_drho = [](double rho) { return -1.0 / (rho * rho); };
    c.rho_of_r = [](double r) { return r / (1.0 + r); };
    c.eta_limit = 1.0;
    c.rho_obstacle = 0.5;
    return c;
}

// r = 2 rho/(1-rho^2), G = (1-rho^2)^2/(2(1+rho^2)); obstacle at sqrt(2)-1.
inline compactification hyperbolic_compactification() {
    compactification c;
    c.name = "hyperbolic";
    c.r_of_rho = [](double rho) { return 2.0 * rho / (1.0 - rho * rho); };
    c.drdrho = [](double rho) {
        double u = 1.0 - rho * rho;
        return 2.0 * (1.0 + rho * rho) / (u * u);
    };
    c.G = [](double rho) {
        double u = 1.0 - rho * rho;
        return u * u / (2.0 * (1.0 + rho * rho));
    };
    c.dG_drho = [](double rho) {
        double u = 1.0 - rho * rho;
        double v = 1.0 + rho * rho;
        return -rho * u * (3.0 + rho * rho) / (v * v);
    };
    c.G_r2 = [](double rho) { return 2.0 * rho * rho / (1.0 + rho * rho); };
    c.inv_r = [](double rho) { return (1.0 - rho * rho) / (2.0 * rho); };
    c.dinvr_drho = [](double rho) { return -(1.0 + rho * rho) / (2.0 * rho * rho); };
    c.rho_of_r = [](double r) { return r / (1.0 + std::sqrt(1.0 + r * r)); };
    c.eta_limit = 1.0;
    c.rho_obstacle = std::sqrt(2.0) - 1.0;
    return c;
}

struct height_function {
    direction dir = direction::outgoing;
    std::function<double(double)> H;              // h'(r(rho)) in rho
    std::function<double(double)> dH_drho;
    std::function<double(double)> h_of_r;         // physical h(r); may be empty
    std::function<double(double)> r2_one_minus_H2;  // r^2 (1 - H^2) in rho
    bool characteristic = false;
    std::string name;
};

// h(r) = +/- N(r): boost equals the refractive index along the direction, so
// n^2 - H^2 vanishes identically and the rate condition holds exactly.
inline height_function characteristic_height(const compactification& comp,
                                             const media::medium& med,
                                             direction dir) {
    if (!med.has_eikonal())
        throw config_error(
            "characteristic_height: medium '" + med.name +
            "' carries no eikonal primitive");
    if (!med.radial)
        throw config_error("characteristic_height: medium must be radial");
    height_function h;
    h.dir = dir;
    h.characteristic = true;
    h.name = "characteristic";
    const double s = direction_sign(dir);
    auto inv_r = comp.inv_r;
    auto dinvr = comp.dinvr_drho;
    auto n2 = med.n_squared;
    auto dn2 = med.dn2_dinvr;
    auto r2b = med.r2_b;
    h.H = [s, inv_r, n2](double rho) {
        double q = inv_r(rho);
        double r = q > 0.0 ? 1.0 / q : std::numeric_limits<double>::infinity();
        return s * std::sqrt(n2(r, 0.0));
    };
    // H = s n;  dH/drho = s (dn^2/dinvr) (dinvr/drho) / (2n)
    h.dH_drho = [s, inv_r, dinvr, n2, dn2](double rho) {
        double q = inv_r(rho);
        double r = q > 0.0 ? 1.0 / q : std::numeric_limits<double>::infinity();
        double n = std::sqrt(n2(r, 0.0));
        return s * dn2(q, 0.0) * dinvr(rho) / (2.0 * n);
    };
    auto eik = med.eikonal;
    h.h_of_r = [s, eik](double r) { return s * eik(r); };
    // r^2 (1 - H^2) = r^2 (1 - n^2) = -r^2 b; sharing the medium's r2_b makes
    // the (n^2 - H^2)/G numerator cancel exactly in assembly.
    h.r2_one_minus_H2 = [r2b, inv_r](double rho) { return -r2b(inv_r(rho), 0.0); };
    return h;
}

// h(r) = +/- sqrt(1+r^2): the standard hyperboloids; under the hyperbolic
// compactification H = +/- 2 rho/(1+rho^2).
inline height_function hyperboloid_height(const compactification& comp,
                                          direction dir) {
    height_function h;
    h.dir = dir;
    h.name = "hyperboloid";
    const double s = direction_sign(dir);
    auto inv_r = comp.inv_r;
    auto dinvr = comp.dinvr_drho;
    h.H = [s, inv_r](double rho) {
        double q = inv_r(rho);
        return s / std::sqrt(1.0 + q * q);
    };
    // H = s (1+q^2)^{-1/2}: dH/drho = -s q (1+q^2)^{-3/2} dq/drho
    h.dH_drho = [s, inv_r, dinvr](double rho) {
        double q = inv_r(rho);
        double t = 1.0 + q * q;
        return -s * q * dinvr(rho) / (t * std::sqrt(t));
    };
    h.h_of_r = [s](double r) { return s * std::sqrt(1.0 + r * r); };
    // 1 - H^2 = q^2/(1+q^2) => r^2 (1-H^2) = 1/(1+q^2)
    h.r2_one_minus_H2 = [inv_r](double rho) {
        double q = inv_r(rho);
        return 1.0 / (1.0 + q * q);
    };
    return h;
}

// Test/validator helper: constant boost H == c (violates the rate condition
// unless |c| = n at the boundary).
inline height_function constant_boost(double c, direction dir) {
    height_function h;
    h.dir = dir;
    h.name = "constant_boost";
    h.H = [c](double) { return c; };
    h.dH_drho = [](double) { return 0.0; };
    h.h_of_r = [c](double r) { return c * r; };
    h.r2_one_minus_H2 = {};  // no closed form; validator falls back to r^2(1-H^2)
    return h;
}

struct hypothesis_report {
    bool pass = false;
    bool compactification_ok = false;  // r^2 G -> eta
    bool rate_ok = false;              // (n^2 - H^2)/G bounded
    bool boost_ok = false;             // |H| <= n, H(1) = +/-1 per direction
    double r2G_limit = 0.0;
    double rate_sup = 0.0;             // max |(n^2-H^2)/G| over the sample
    double boundary_H = 0.0;
    std::string detail;
};

// Samples rho_j = 1 - 2^-j, j = 4..20, Richardson-extrapolates the boundary
// limits, and checks the three hypotheses. Used by tests and CLI preflight.
inline hypothesis_report validate_theorem_hypotheses(
    const compactification& comp, const height_function& height,
    const media::medium& med) {
    hypothesis_report rep;

    // (i) r^2 G -> eta with Richardson extrapolation on the dyadic sequence.
    std::vector<double> vals;
    for (int j = 4; j <= 20; ++j) {
        double rho = 1.0 - std::ldexp(1.0, -j);
        vals.push_back(comp.G_r2(rho));
    }
    // one Richardson level assuming first-order decay in (1-rho)
    double extrap = 2.0 * vals.back() - vals[vals.size() - 2];
    rep.r2G_limit = extrap;
    rep.compactification_ok = std::abs(extrap - comp.eta_limit) < 1e-6;

    // (ii) boundedness of (n^2 - H^2)/G; prefer the cancellation-safe route.
    auto rate_at = [&](double rho, double theta) {
        double num;
        if (height.r2_one_minus_H2) {
            num = med.r2_b(comp.inv_r(rho), theta) + height.r2_one_minus_H2(rho);
        } else {
            double q = comp.inv_r(rho);
            double r = q > 0.0 ? 1.0 / q : std::numeric_limits<double>::infinity();
            double H = height.H(rho);
            double r2 = q > 0.0 ? 1.0 / (q * q) : std::numeric_limits<double>::infinity();
            num = (med.n_squared(r, theta) - H * H) * r2;
        }
        return num / comp.G_r2(rho);
    };
    const double thetas[] = {0.0, 1.1, 2.3, 3.14159, 4.4, 5.5};
    double sup = 0.0;
    bool divergent = false;
    double prev_max = 0.0;
    int grow_count = 0;
    for (int j = 4; j <= 20; ++j) {
        double rho = 1.0 - std::ldexp(1.0, -j);
        double mx = 0.0;
        for (double th : thetas) {
            double v = std::abs(rate_at(rho, th));
            mx = std::max(mx, v);
        }
        sup = std::max(sup, mx);
        if (j > 8 && mx > 1.9 * std::max(prev_max, 1e-12)) {
            if (++grow_count >= 4) divergent = true;
        }
        prev_max = mx;
        if (!std::isfinite(mx)) divergent = true;
    }
    rep.rate_sup = sup;
    rep.rate_ok = !divergent && std::isfinite(sup);

    // (iii) |H| <= n on a dense sample; boundary limit matches direction.
    bool boost_ok = true;
    for (int i = 1; i <= 200; ++i) {
        double rho = comp.rho_obstacle +
                     (1.0 - comp.rho_obstacle) * (i / 201.0);
        double q = comp.inv_r(rho);
        double r = 1.0 / q;
        double n = std::sqrt(med.n_squared(r, 0.0));
        if (std::abs(height.H(rho)) > n + 1e-12) boost_ok = false;
    }
    rep.boundary_H = height.H(1.0 - 1e-13);
    double want = direction_sign(height.dir);
    if (std::abs(rep.boundary_H - want) > 1e-5) boost_ok = false;
    rep.boost_ok = boost_ok;

    rep.pass = rep.compactification_ok && rep.rate_ok && rep.boost_ok;
    rep.detail = std::string("r2G->") + std::to_string(rep.r2G_limit) +
                 ", sup|(n2-H2)/G|=" + std::to_string(rep.rate_sup) +
                 ", H(1)=" + std::to_string(rep.boundary_H);
    return rep;
}

}  // namespace scri::geometry
