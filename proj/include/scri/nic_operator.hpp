#pragma once

// Coefficient assembly for the null-infinity-compactified Helmholtz equation
//
//   d/drho(G du/drho) + 2ikH du/drho + (1/(G r^2)) dtheta^2 u
//     + [ k^2 (n^2 - H^2)/G + ik H'(rho) + (d-1)(3-d)/(4 G r^2) ] u = 0
//
// as evaluable fields on the compactified annulus [rho_Gamma, 1]. The k^2
// term is evaluated as k^2 (r^2 b + r^2(1 - H^2)) / (G r^2): each factor has
// a finite closed form at rho = 1, and for characteristic heights the
// numerator cancels identically.

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "scri/geometry.hpp"
#include "scri/media.hpp"

namespace scri::nic {

using std::complex;

struct nic_coefficients {
    std::function<double(double)> c2;     // G(rho)
    std::function<double(double)> dc2;    // G'(rho)
    std::function<complex<double>(double)> c1;  // 2 i k H(rho)
    std::function<double(double)> c_ang;  // 1/(G r^2)
    std::function<complex<double>(double, double)> c0;  // zeroth-order term
    double k = 0.0;
    int d = 2;
    geometry::direction dir = geometry::direction::outgoing;
    bool theta_dependent = false;  // c0 varies with theta (anisotropic media)
};

inline nic_coefficients assemble_general(const geometry::compactification& comp,
                                         const geometry::height_function& height,
                                         const media::medium& med, double k,
                                         int d = 2) {
    if (!(k > 0.0)) throw config_error("assemble_general: requires k > 0");
    if (d < 2) throw config_error("assemble_general: requires d >= 2");

    nic_coefficients co;
    co.k = k;
    co.d = d;
    co.dir = height.dir;
    co.theta_dependent = !med.radial;

    co.c2 = comp.G;
    co.dc2 = comp.dG_drho;

    auto H = height.H;
    co.c1 = [k, H](double rho) { return complex<double>(0.0, 2.0 * k * H(rho)); };

    auto Gr2 = comp.G_r2;
    co.c_ang = [Gr2](double rho) { return 1.0 / Gr2(rho); };

    const double curv = (d - 1) * (3 - d) / 4.0;
    auto invr = comp.inv_r;
    auto r2b = med.r2_b;
    auto dH = height.dH_drho;

    if (height.characteristic && med.radial) {
        // k^2 (n^2 - H^2)/G == 0 exactly.
        co.c0 = [k, dH, curv, Gr2](double rho, double) {
            return complex<double>(curv / Gr2(rho), k * dH(rho));
        };
    } else if (height.r2_one_minus_H2) {
        auto r2h = height.r2_one_minus_H2;
        co.c0 = [k, dH, curv, Gr2, invr, r2b, r2h](double rho, double theta) {
            double num = r2b(invr(rho), theta) + r2h(rho);
            double re = k * k * num / Gr2(rho) + curv / Gr2(rho);
            return complex<double>(re, k * dH(rho));
        };
    } else {
        // No safe closed form: naive difference, adequate away from rho = 1.
        auto n2 = med.n_squared;
        auto Hc = height.H;
        co.c0 = [k, dH, curv, Gr2, invr, n2, Hc, comp](double rho, double theta) {
            double r = comp.r_of_rho(rho);
            double Hv = Hc(rho);
            double num = (n2(r, theta) - Hv * Hv) / comp.G(rho);
            return complex<double>(k * k * num + curv / Gr2(rho), k * dH(rho));
        };
    }
    return co;
}

// Residual of the degenerate rho = 1 equation (the boundary compatibility
// condition) on an angular grid:
//   c1(1) du/drho + c_ang(1) dtheta^2 u + c0(1,theta) u.
// Second angular derivative is taken in Fourier space by the caller;
// here it arrives as sampled values.
inline std::vector<complex<double>> compatibility_residual(
    const nic_coefficients& co, std::span<const complex<double>> u_boundary,
    std::span<const complex<double>> du_drho_boundary,
    std::span<const complex<double>> d2theta_u_boundary,
    std::span<const double> theta_nodes) {
    const std::size_t n = u_boundary.size();
    std::vector<complex<double>> res(n);
    const complex<double> c1v = co.c1(1.0);
    const double cav = co.c_ang(1.0);
    for (std::size_t j = 0; j < n; ++j) {
        res[j] = c1v * du_drho_boundary[j] + cav * d2theta_u_boundary[j] +
                 co.c0(1.0, theta_nodes[j]) * u_boundary[j];
    }
    return res;
}

}  // namespace scri::nic
