#pragma once

// Refractive-index models: constant, short-range (quadratic decay),
// long-range (linear decay, Coulomb-type), and the off-centered anisotropic
// profile. Media expose n^2 rather than n, plus the tail quantities the
// operator assembly needs in cancellation-safe form:
//
//   r2_b(1/r, theta)  =  r^2 (n^2 - 1)     (finite at infinity for
//                                           short-range/anisotropic tails)
//   dn2_dinvr         =  d(n^2)/d(1/r)
//
// Radial media carry the eikonal primitive N(r) with N' = n where a closed
// form exists.

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "scri/errors.hpp"

namespace scri::media {

enum class tail_class { constant, short_range, long_range, anisotropic };

inline const char* tail_name(tail_class t) {
    switch (t) {
        case tail_class::constant: return "constant";
        case tail_class::short_range: return "short_range";
        case tail_class::long_range: return "long_range";
        case tail_class::anisotropic: return "anisotropic";
    }
    return "?";
}

// Phi(r; kappa) = r + (kappa/2) log r, the long-range phase.
inline double long_range_phase(double r, double kappa) {
    if (!(r > 0.0)) throw domain_error("long_range_phase: requires r > 0");
    return r + 0.5 * kappa * std::log(r);
}

struct medium {
    tail_class tail = tail_class::constant;
    double kappa = 0.0;
    double offset_d = 0.0;
    double core_r0 = 0.0;
    bool radial = true;
    std::string name = "constant";

    std::function<double(double, double)> n_squared;   // (r, theta)
    std::function<double(double, double)> r2_b;        // (inv_r, theta)
    std::function<double(double, double)> dn2_dinvr;   // (inv_r, theta)
    std::function<double(double)> eikonal;             // N(r); empty if absent
    std::function<double(double)> eikonal_tail;        // N(r) - Phi(r;kappa), stable at large r

    bool has_eikonal() const { return static_cast<bool>(eikonal); }

    double n_radial(double r) const { return std::sqrt(n_squared(r, 0.0)); }
};

inline medium constant_medium() {
    medium m;
    m.tail = tail_class::constant;
    m.name = "constant";
    m.n_squared = [](double, double) { return 1.0; };
    m.r2_b = [](double, double) { return 0.0; };
    m.dn2_dinvr = [](double, double) { return 0.0; };
    m.eikonal = [](double r) { return r; };
    m.eikonal_tail = [](double) { return 0.0; };
    return m;
}

// n^2 = 1 + kappa^2 / r^2, eikonal N = sqrt(r^2+kappa^2) - kappa asinh(kappa/r).
inline medium quadratic_medium(double kappa) {
    if (kappa < 0.0) throw domain_error("quadratic_medium: requires kappa >= 0");
    if (kappa == 0.0) return constant_medium();
    medium m;
    m.tail = tail_class::short_range;
    m.kappa = kappa;
    m.name = "quadratic";
    const double k2 = kappa * kappa;
    m.n_squared = [k2](double r, double) { return 1.0 + k2 / (r * r); };
    m.r2_b = [k2](double, double) { return k2; };
    m.dn2_dinvr = [k2](double inv_r, double) { return 2.0 * k2 * inv_r; };
    m.eikonal = [kappa](double r) {
        return std::sqrt(r * r + kappa * kappa) - kappa * std::asinh(kappa / r);
    };
    m.eikonal_tail = [kappa](double r) {
        // sqrt(r^2+k^2) - r = k^2/(sqrt(r^2+k^2)+r), no cancellation
        double s = std::sqrt(r * r + kappa * kappa);
        return kappa * kappa / (s + r) - kappa * std::asinh(kappa / r);
    };
    return m;
}

// n^2 = 1 + kappa / r; eikonal N(r) = sqrt(r(r+kappa)) - kappa log(sqrt(r+kappa)-sqrt(r)) - C
// with C fixed by N(r) - Phi(r;kappa) -> 0. The closed form of the constant
// is C = kappa/2 + kappa log(2/kappa); the operational limit is cross-checked
// in the test suite against the high-r evaluation.
inline double linear_eikonal_constant(double kappa) {
    return 0.5 * kappa + kappa * std::log(2.0 / kappa);
}

inline medium linear_medium(double kappa) {
    if (!(kappa > 0.0)) {
        if (kappa == 0.0) return constant_medium();
        throw domain_error("linear_medium: requires kappa >= 0");
    }
    medium m;
    m.tail = tail_class::long_range;
    m.kappa = kappa;
    m.name = "linear";
    m.n_squared = [kappa](double r, double) {
        if (r + kappa <= 0.0)
            throw domain_error("linear_medium: n^2 <= 0 at r = " + std::to_string(r));
        return 1.0 + kappa / r;
    };
    m.r2_b = [kappa](double inv_r, double) {
        if (inv_r == 0.0)
            throw domain_error("linear_medium: r^2 b unbounded at infinity");
        return kappa / inv_r;
    };
    m.dn2_dinvr = [kappa](double, double) { return kappa; };
    const double C = linear_eikonal_constant(kappa);
    m.eikonal = [kappa, C](double r) {
        // log(sqrt(r+kappa)-sqrt(r)) = log(kappa) - log(sqrt(r+kappa)+sqrt(r))
        double sp = std::sqrt(r + kappa) + std::sqrt(r);
        return std::sqrt(r * (r + kappa)) - kappa * (std::log(kappa) - std::log(sp)) - C;
    };
    m.eikonal_tail = [kappa](double r) {
        // N(r) - Phi(r;kappa) evaluated without forming the large parts:
        //   = kappa/(1+s) - kappa/2 + kappa log((1+s)/2),  s = sqrt(1+kappa/r)
        double s = std::sqrt(1.0 + kappa / r);
        return kappa / (1.0 + s) - 0.5 * kappa + kappa * std::log(0.5 * (1.0 + s));
    };
    return m;
}

// n^2(r,theta) = 1 + kappa^2 / (r^2 + d^2 + 2 d r cos(theta) + r0^2):
// the quadratic profile re-centered at (-d, 0), core radius r0.
inline medium anisotropic_medium(double kappa, double offset_d, double core_r0) {
    if (kappa < 0.0) throw domain_error("anisotropic_medium: requires kappa >= 0");
    if (core_r0 <= 0.0 && offset_d > 0.0)
        throw domain_error(
            "anisotropic_medium: core_r0 > 0 required for an off-centered profile");
    medium m;
    m.tail = tail_class::anisotropic;
    m.kappa = kappa;
    m.offset_d = offset_d;
    m.core_r0 = core_r0;
    m.radial = (offset_d == 0.0);
    m.name = "anisotropic";
    const double k2 = kappa * kappa;
    const double c2 = offset_d * offset_d + core_r0 * core_r0;
    const double d = offset_d;
    m.n_squared = [k2, c2, d](double r, double theta) {
        double den = r * r + c2 + 2.0 * d * r * std::cos(theta);
        if (den <= 0.0)
            throw domain_error("anisotropic_medium: singular denominator");
        return 1.0 + k2 / den;
    };
    m.r2_b = [k2, c2, d](double inv_r, double theta) {
        double den = 1.0 + c2 * inv_r * inv_r + 2.0 * d * inv_r * std::cos(theta);
        if (den <= 0.0)
            throw domain_error("anisotropic_medium: singular denominator");
        return k2 / den;
    };
    m.dn2_dinvr = [k2, c2, d](double inv_r, double theta) {
        // n^2 = 1 + k2 q^2/(1 + c2 q^2 + 2 d q cos), q = 1/r
        double c = std::cos(theta);
        double den = 1.0 + c2 * inv_r * inv_r + 2.0 * d * inv_r * c;
        return k2 * (2.0 * inv_r + 2.0 * d * c * inv_r * inv_r) / (den * den);
    };
    return m;
}

}  // namespace scri::media
