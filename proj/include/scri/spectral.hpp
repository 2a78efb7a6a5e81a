#pragma once

// Chebyshev-Gauss-Lobatto radial grids on [rho_Gamma, 1], equispaced Fourier
// angular grids, barycentric differentiation operators, tau boundary rows,
// and dense complex LU solves (LAPACK) with condition estimates.
//
// Node ordering is ascending in rho: node 0 sits on the obstacle, node N on
// null infinity; both endpoints are hit exactly. One Dirichlet row replaces
// the collocation row at the node carrying the condition: at rho = 1 for
// incoming solves (data from past null infinity) and at rho_Gamma for
// outgoing solves. The degenerate rho = 1 collocation row is retained for
// outgoing solves; the equation there is first order because G(1) = 0.

#include <lapacke.h>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "scri/errors.hpp"
#include "scri/nic_operator.hpp"

namespace scri::spectral {

using std::complex;

inline constexpr int max_radial_degree = 128;
inline constexpr int max_angular_points = 256;

// Configurable cap for dense-system memory, checked before allocation.
inline std::size_t& memory_cap_bytes() {
    static std::size_t cap = std::size_t(3) * 1024 * 1024 * 1024;
    return cap;
}

// Dense complex matrix, column-major for LAPACK.
struct cmatrix {
    int rows = 0, cols = 0;
    std::vector<complex<double>> a;

    cmatrix() = default;
    cmatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c) {}
    complex<double>& operator()(int i, int j) { return a[std::size_t(j) * rows + i]; }
    const complex<double>& operator()(int i, int j) const {
        return a[std::size_t(j) * rows + i];
    }
};

struct radial_grid {
    double rho_min = 0.5, rho_max = 1.0;
    int N = 0;
    std::vector<double> nodes;        // ascending, nodes[0] = rho_min, nodes[N] = 1
    std::vector<double> bary_weights;
    cmatrix D1, D2;                   // complex-valued copies of real operators
    std::vector<double> d1, d2;       // row-major real operators
    double D1r(int i, int j) const { return d1[std::size_t(i) * (N + 1) + j]; }
    double D2r(int i, int j) const { return d2[std::size_t(i) * (N + 1) + j]; }
};

inline radial_grid build_radial_grid(double rho_min, int N) {
    if (N < 4) throw config_error("build_radial_grid: N >= 4 required");
    if (N > max_radial_degree)
        throw config_error("build_radial_grid: N exceeds desk-scale cap 128");
    if (!(rho_min > 0.0 && rho_min < 1.0))
        throw config_error("build_radial_grid: rho_min must lie in (0,1)");

    radial_grid g;
    g.rho_min = rho_min;
    g.N = N;
    g.nodes.resize(N + 1);
    g.bary_weights.resize(N + 1);
    const double half = 0.5 * (1.0 - rho_min);
    for (int i = 0; i <= N; ++i) {
        // ascending: i = 0 -> rho_min, i = N -> 1
        double x = std::cos(std::numbers::pi * double(N - i) / N);
        g.nodes[i] = rho_min + half * (1.0 + x);
        double w = (i == 0 || i == N) ? 0.5 : 1.0;
        g.bary_weights[i] = ((N - i) % 2 == 0) ? w : -w;
    }
    g.nodes[0] = rho_min;
    g.nodes[N] = 1.0;

    const int n = N + 1;
    g.d1.assign(std::size_t(n) * n, 0.0);
    g.d2.assign(std::size_t(n) * n, 0.0);
    // barycentric first derivative
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double v = (g.bary_weights[j] / g.bary_weights[i]) /
                       (g.nodes[i] - g.nodes[j]);
            g.d1[std::size_t(i) * n + j] = v;
            diag -= v;
        }
        g.d1[std::size_t(i) * n + i] = diag;
    }
    // second derivative via the Welfert recursion
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        double dii = g.d1[std::size_t(i) * n + i];
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double v = 2.0 * g.d1[std::size_t(i) * n + j] *
                       (dii - 1.0 / (g.nodes[i] - g.nodes[j]));
            g.d2[std::size_t(i) * n + j] = v;
            diag -= v;
        }
        g.d2[std::size_t(i) * n + i] = diag;
    }

    g.D1 = cmatrix(n, n);
    g.D2 = cmatrix(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            g.D1(i, j) = g.d1[std::size_t(i) * n + j];
            g.D2(i, j) = g.d2[std::size_t(i) * n + j];
        }
    return g;
}

struct angular_grid {
    int n_theta = 0;
    std::vector<double> nodes;  // theta_j = 2 pi j / n_theta
    std::vector<int> modes;     // ascending, m in [-n/2, n/2)

    int mode_index(int m) const {
        int idx = m + n_theta / 2;
        if (idx < 0 || idx >= n_theta)
            throw domain_error("angular_grid: mode outside resolved set");
        return idx;
    }
};

inline angular_grid build_angular_grid(int n_theta) {
    if (n_theta < 2 || n_theta % 2 != 0)
        throw config_error("build_angular_grid: even n_theta >= 2 required");
    if (n_theta > max_angular_points)
        throw config_error("build_angular_grid: n_theta exceeds desk-scale cap 256");
    angular_grid g;
    g.n_theta = n_theta;
    g.nodes.resize(n_theta);
    g.modes.resize(n_theta);
    for (int j = 0; j < n_theta; ++j)
        g.nodes[j] = 2.0 * std::numbers::pi * j / n_theta;
    for (int q = 0; q < n_theta; ++q) g.modes[q] = q - n_theta / 2;
    return g;
}

// Forward transform: grid values -> coefficients in the ascending-mode order.
inline std::vector<complex<double>> to_modes(const angular_grid& g,
                                             std::span<const complex<double>> values) {
    if (static_cast<int>(values.size()) != g.n_theta)
        throw domain_error("to_modes: size mismatch");
    std::vector<complex<double>> out(g.n_theta);
    const double w = 2.0 * std::numbers::pi / g.n_theta;
    for (int q = 0; q < g.n_theta; ++q) {
        int m = g.modes[q];
        complex<double> acc = 0.0;
        for (int j = 0; j < g.n_theta; ++j)
            acc += values[j] * std::polar(1.0, -m * w * j);
        out[q] = acc / double(g.n_theta);
    }
    return out;
}

inline std::vector<complex<double>> to_grid(const angular_grid& g,
                                            std::span<const complex<double>> modes) {
    if (static_cast<int>(modes.size()) != g.n_theta)
        throw domain_error("to_grid: size mismatch");
    std::vector<complex<double>> out(g.n_theta);
    const double w = 2.0 * std::numbers::pi / g.n_theta;
    for (int j = 0; j < g.n_theta; ++j) {
        complex<double> acc = 0.0;
        for (int q = 0; q < g.n_theta; ++q)
            acc += modes[q] * std::polar(1.0, g.modes[q] * w * j);
        out[j] = acc;
    }
    return out;
}

// Second angular derivative on the grid via Fourier multipliers.
inline std::vector<complex<double>> d2_theta(const angular_grid& g,
                                             std::span<const complex<double>> values) {
    auto m = to_modes(g, values);
    for (int q = 0; q < g.n_theta; ++q)
        m[q] *= -double(g.modes[q]) * double(g.modes[q]);
    return to_grid(g, m);
}

struct solve_info {
    double condition_estimate = 0.0;
    double residual = 0.0;
};

namespace detail_sp {
// std::complex<double> is layout-compatible with the C99 complex LAPACKE uses.
inline lapack_complex_double* lp(complex<double>* p) {
    return reinterpret_cast<lapack_complex_double*>(p);
}
inline const lapack_complex_double* lp(const complex<double>* p) {
    return reinterpret_cast<const lapack_complex_double*>(p);
}
}  // namespace detail_sp

// Direct dense LU solve; reports a 1-norm condition estimate and the
// relative residual of the returned solution.
inline std::vector<complex<double>> solve(cmatrix A,
                                          std::vector<complex<double>> b,
                                          solve_info* info = nullptr) {
    const int n = A.rows;
    if (A.cols != n || static_cast<int>(b.size()) != n)
        throw domain_error("solve: dimension mismatch");

    cmatrix A0 = A;  // retained for the residual check
    std::vector<lapack_int> ipiv(n);
    double anorm = LAPACKE_zlange(LAPACK_COL_MAJOR, '1', n, n, detail_sp::lp(A.a.data()), n);
    lapack_int ret = LAPACKE_zgetrf(LAPACK_COL_MAJOR, n, n, detail_sp::lp(A.a.data()), n, ipiv.data());
    if (ret > 0)
        throw solve_error("solve: matrix is singular",
                          std::numeric_limits<double>::infinity());
    if (ret < 0) throw solve_error("solve: zgetrf failed", 0.0);

    double rcond = 0.0;
    LAPACKE_zgecon(LAPACK_COL_MAJOR, '1', n, detail_sp::lp(A.a.data()), n, anorm, &rcond);
    // Centrifugal-barrier channels produce exponentially graded matrices with
    // enormous condition estimates that LU still handles; only a numerically
    // zero reciprocal condition is treated as singular.
    if (rcond < 1e-300)
        throw solve_error("solve: matrix numerically singular", 1.0 / std::max(rcond, 1e-300));

    std::vector<complex<double>> x = b;
    ret = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1, detail_sp::lp(A.a.data()), n,
                         ipiv.data(), detail_sp::lp(x.data()), n);
    if (ret != 0) throw solve_error("solve: zgetrs failed", 1.0 / rcond);

    // Iterative refinement with the residual accumulated in double-double:
    // the factors and the original matrix are at hand, so each pass costs
    // O(n^2). For the graded systems of evanescent angular channels this
    // recovers digits that plain LU forward error loses.
    std::vector<complex<double>> resid(n);
    {
        std::vector<detail::cdd> racc(n);
        double prev_dxn = std::numeric_limits<double>::infinity();
        for (int pass = 0; pass < 3; ++pass) {
            for (int i = 0; i < n; ++i) racc[i] = detail::cdd(b[i]);
            for (int j = 0; j < n; ++j) {
                const complex<double> xj = x[j];
                const detail::cdd mxj(-xj.real(), -xj.imag());
                const complex<double>* col = &A0(0, j);
                for (int i = 0; i < n; ++i)
                    racc[i] += detail::cdd(col[i]) * mxj;
            }
            double rn = 0.0, xn = 0.0;
            for (int i = 0; i < n; ++i) {
                resid[i] = racc[i].to_complex();
                rn += std::norm(resid[i]);
                xn += std::norm(x[i]);
            }
            if (!(rn > 1e-60 * std::max(xn, 1e-300))) break;
            ret = LAPACKE_zgetrs(LAPACK_COL_MAJOR, 'N', n, 1,
                                 detail_sp::lp(A.a.data()), n, ipiv.data(),
                                 detail_sp::lp(resid.data()), n);
            if (ret != 0) break;
            double dxn = 0.0;
            for (int i = 0; i < n; ++i) dxn += std::norm(resid[i]);
            // Divergence guard: past the conditioning limit the correction
            // solve amplifies noise instead of contracting. Accept a step
            // only while corrections stay small and keep shrinking.
            if (dxn > 0.25 * std::max(xn, 1e-300) || dxn >= prev_dxn) break;
            prev_dxn = dxn;
            for (int i = 0; i < n; ++i) x[i] += resid[i];
        }
    }

    if (info) {
        info->condition_estimate = 1.0 / rcond;
        double rnorm = 0.0, bnorm = 0.0;
        for (int i = 0; i < n; ++i) resid[i] = b[i];
        for (int j = 0; j < n; ++j) {
            const complex<double> xj = x[j];
            const complex<double>* col = &A0(0, j);
            for (int i = 0; i < n; ++i) resid[i] -= col[i] * xj;
        }
        for (int i = 0; i < n; ++i) {
            rnorm += std::norm(resid[i]);
            bnorm += std::norm(b[i]);
        }
        info->residual = bnorm > 0.0 ? std::sqrt(rnorm / bnorm) : std::sqrt(rnorm);
    }
    return x;
}

struct modal_system {
    cmatrix A;
    std::vector<complex<double>> rhs;
    int bc_row = -1;
    int mode = 0;
};

// Radial collocation system for Fourier mode m. Interior rows carry the
// collocated equation (the rho = 1 row degenerates to the compatibility
// condition since c2(1) = c2'(1) = 0); exactly one row is the Dirichlet tau
// row: at rho = 1 for incoming data, at rho_Gamma for the outgoing solve.
inline modal_system assemble_modal_system(const nic::nic_coefficients& co, int m,
                                          const radial_grid& g,
                                          geometry::direction dir,
                                          complex<double> bc_value) {
    if (co.theta_dependent)
        throw config_error("assemble_modal_system: coefficients must be radial");
    const int n = g.N + 1;
    modal_system sys;
    sys.mode = m;
    sys.A = cmatrix(n, n);
    sys.rhs.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double rho = g.nodes[i];
        const double c2 = co.c2(rho);
        const complex<double> cr = co.dc2(rho) + co.c1(rho);
        for (int j = 0; j < n; ++j)
            sys.A(i, j) = c2 * g.D2r(i, j) + cr * g.D1r(i, j);
        sys.A(i, i) += co.c0(rho, 0.0) - double(m) * double(m) * co.c_ang(rho);
    }
    sys.bc_row = (dir == geometry::direction::incoming) ? g.N : 0;
    for (int j = 0; j < n; ++j) sys.A(sys.bc_row, j) = 0.0;
    sys.A(sys.bc_row, sys.bc_row) = 1.0;
    sys.rhs[sys.bc_row] = bc_value;
    return sys;
}

struct field_system {
    cmatrix A;
    std::vector<complex<double>> rhs;
    std::vector<int> bc_rows;  // one per (active) angular mode
    std::vector<int> active;   // mode indices carried by the unknown vector
    int n_rho = 0, n_theta = 0;
};

// Full 2-D system in Fourier space, mode-major ordering
// X[q*(N+1)+i] = u_hat_{modes[q]}(rho_i). The theta-dependent part of c0
// couples modes through the circular convolution with its angular DFT, which
// reproduces grid-space multiplication exactly. Boundary data arrives as
// modal coefficients, one Dirichlet row per mode.
//
// `active` optionally restricts the unknowns to a subset of mode indices q;
// excluded channels are treated as zero. Deep-evanescent channels whose data
// is at roundoff otherwise dominate the conditioning of the coupled matrix
// without contributing to any observable.
inline field_system assemble_2d_system(const nic::nic_coefficients& co,
                                       const radial_grid& g,
                                       const angular_grid& ag,
                                       geometry::direction dir,
                                       std::span<const complex<double>> bc_modes,
                                       std::span<const int> active = {}) {
    const int n = g.N + 1;
    const int nt = ag.n_theta;
    if (static_cast<int>(bc_modes.size()) != nt)
        throw domain_error("assemble_2d_system: bc_modes size mismatch");
    std::vector<int> all;
    if (active.empty()) {
        all.resize(nt);
        for (int q = 0; q < nt; ++q) all[q] = q;
        active = all;
    }
    const int na = static_cast<int>(active.size());
    const std::size_t ntot = std::size_t(n) * na;
    const std::size_t bytes = ntot * ntot * sizeof(complex<double>);
    if (2 * bytes > memory_cap_bytes())
        throw resource_error(
            "assemble_2d_system: estimated " + std::to_string(2 * bytes) +
            " bytes exceeds the configured cap");

    field_system sys;
    sys.n_rho = n;
    sys.n_theta = nt;
    sys.active.assign(active.begin(), active.end());
    sys.A = cmatrix(int(ntot), int(ntot));
    sys.rhs.assign(ntot, 0.0);

    // Angular DFT of c0 per radial node; radial parts land in the q = 0 bin.
    std::vector<complex<double>> c0_hat(std::size_t(n) * nt);
    std::vector<complex<double>> row(nt);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < nt; ++j) row[j] = co.c0(g.nodes[i], ag.nodes[j]);
        auto hat = to_modes(ag, row);
        for (int q = 0; q < nt; ++q) c0_hat[std::size_t(i) * nt + q] = hat[q];
    }

    const int bc_node = (dir == geometry::direction::incoming) ? g.N : 0;
    for (int a = 0; a < na; ++a) {
        const int q = active[a];
        const int m = ag.modes[q];
        const std::size_t base = std::size_t(a) * n;
        for (int i = 0; i < n; ++i) {
            const std::size_t ri = base + i;
            if (i == bc_node) continue;  // filled by the tau row below
            const double rho = g.nodes[i];
            const double c2 = co.c2(rho);
            const complex<double> cr = co.dc2(rho) + co.c1(rho);
            for (int j = 0; j < n; ++j)
                sys.A(int(ri), int(base + j)) = c2 * g.D2r(i, j) + cr * g.D1r(i, j);
            sys.A(int(ri), int(ri)) += -double(m) * double(m) * co.c_ang(rho);
            // convolution in mode index: coefficient of u_hat_{m'} is
            // c0_hat[(m - m') mod n_theta], wrapped into the stored DFT bins
            for (int ap = 0; ap < na; ++ap) {
                const int qp = active[ap];
                int dq = ((q - qp) % nt + nt) % nt;
                int bin = (dq + nt / 2) % nt;
                sys.A(int(ri), int(std::size_t(ap) * n + i)) +=
                    c0_hat[std::size_t(i) * nt + bin];
            }
        }
        const std::size_t rb = base + bc_node;
        sys.A(int(rb), int(rb)) = 1.0;
        sys.rhs[rb] = bc_modes[q];
        sys.bc_rows.push_back(int(rb));
    }
    return sys;
}

}  // namespace scri::spectral
