#pragma once

// Test-only oracles, independent of the implementation paths they check:
// brute-force ascending series in double-double arithmetic and a
// Stirling-based log-gamma. Slow and simple on purpose.

#include <cmath>
#include <complex>

#include "scri/detail/dd.hpp"

namespace oracles {

using scri::detail::cdd;
using scri::detail::dd;
using std::complex;

// J_m by the plain Taylor series (double-double).
inline double bessel_j_series(int m, double z) {
    dd q2 = dd(z) * dd(0.5);
    dd term(1.0);
    for (int n = 1; n <= m; ++n) term = term * q2 / dd(n);
    dd sum = term;
    dd mq = -(q2 * q2);
    for (int j = 1; j < 600; ++j) {
        term = term * mq / (dd(j) * dd(m + j));
        sum += term;
        if (scri::detail::abs(term) < 1e-34 * (scri::detail::abs(sum) + 1e-300) && j > z)
            break;
    }
    return static_cast<double>(sum);
}

// Y_m via the ascending series (A&S 9.1.11), double-double:
//   Y_m = (2/pi)(ln(z/2)+gamma) J_m - ((z/2)^-m/pi) FIN - ((z/2)^m/pi) HSER
//   FIN  = sum_{k<m} (m-k-1)!/k! q^k,  q = z^2/4
//   HSER = sum_k (H_k + H_{m+k}) (-q)^k / (k!(m+k)!)
inline double bessel_y_series(int m, double z) {
    const double egamma = 0.57721566490153286061;
    const double pi = 3.14159265358979323846;
    const dd q = dd(z) * dd(z) * dd(0.25);

    dd fin(0.0);
    for (int k = 0; k < m; ++k) {
        dd num(1.0);
        for (int n = 1; n <= m - k - 1; ++n) num = num * dd(n);
        dd den(1.0);
        for (int n = 1; n <= k; ++n) den = den * dd(n);
        dd qp(1.0);
        for (int n = 0; n < k; ++n) qp = qp * q;
        fin += num / den * qp;
    }

    dd jser(0.0), hser(0.0);
    {
        dd inv_mfact(1.0);
        for (int n = 1; n <= m; ++n) inv_mfact = inv_mfact / dd(n);
        dd t = inv_mfact;  // (-q)^k/(k!(m+k)!) at k=0
        dd hk(0.0), hmk(0.0);
        for (int n = 1; n <= m; ++n) hmk += dd(1.0 / n);
        jser = t;
        hser = t * (hk + hmk);
        for (int k = 1; k < 700; ++k) {
            t = (-t) * q / (dd(k) * dd(m + k));
            hk += dd(1.0 / k);
            hmk += dd(1.0 / (m + k));
            jser += t;
            hser += t * (hk + hmk);
            if (scri::detail::abs(t) < 1e-34 * (scri::detail::abs(jser) + 1e-300) &&
                k > z)
                break;
        }
    }
    const double zh_m = std::pow(z / 2.0, m);
    const double jm = zh_m * static_cast<double>(jser);
    return (2.0 / pi) * (std::log(z / 2.0) + egamma) * jm -
           (std::pow(z / 2.0, -m) / pi) * static_cast<double>(fin) -
           (zh_m / pi) * static_cast<double>(hser);
}

// I_m ascending series (all positive terms).
inline double bessel_i_series(int m, double x) {
    dd q2 = dd(x) * dd(0.5);
    dd term(1.0);
    for (int n = 1; n <= m; ++n) term = term * q2 / dd(n);
    dd sum = term;
    dd qq = q2 * q2;
    for (int j = 1; j < 700; ++j) {
        term = term * qq / (dd(j) * dd(m + j));
        sum += term;
        if (scri::detail::abs(term) < 1e-34 * scri::detail::abs(sum)) break;
    }
    return static_cast<double>(sum);
}

// log Gamma by recurrence shift + Stirling series in double-double.
inline complex<double> log_gamma_stirling(complex<double> w) {
    // shift to Re >= 32
    cdd acc(0.0, 0.0);
    complex<double> z = w;
    while (z.real() < 32.0) {
        // acc -= log z
        complex<double> lz = std::log(z);
        acc = acc + cdd(-lz.real(), -lz.imag());
        z += 1.0;
    }
    // Stirling: (z-1/2)log z - z + log(2pi)/2 + sum B_{2n}/(2n(2n-1) z^{2n-1})
    static const double B[] = {1.0 / 6,  -1.0 / 30,   1.0 / 42,     -1.0 / 30,
                               5.0 / 66, -691.0 / 2730, 7.0 / 6,    -3617.0 / 510};
    complex<double> lz = std::log(z);
    cdd out = acc;
    cdd zc(z.real(), z.imag());
    cdd term1 = cdd(z.real() - 0.5, z.imag()) * cdd(lz.real(), lz.imag());
    out = out + term1;
    out = out + cdd(-z.real(), -z.imag());
    out = out + cdd(0.91893853320467274178, 0.0);  // log(2pi)/2
    complex<double> zi = 1.0 / z;
    complex<double> zp = zi;
    for (int n = 1; n <= 8; ++n) {
        double coef = B[n - 1] / (2.0 * n * (2.0 * n - 1.0));
        complex<double> t = coef * zp;
        out = out + cdd(t.real(), t.imag());
        zp *= zi * zi;
    }
    return out.to_complex();
}

// Regular Coulomb function F by its everywhere-convergent power series
// (normalization constant C_lambda(eta) via log-gamma).
inline double coulomb_f_series(double lam, double eta, double z,
                               complex<double> (*lgamma)(complex<double>)) {
    // C_lambda = 2^lam e^{-pi eta/2} |Gamma(lam+1+i eta)| / Gamma(2 lam + 2)
    const double pi = 3.14159265358979323846;
    complex<double> lg = lgamma(complex<double>(lam + 1.0, eta));
    double log_abs_gamma = lg.real();
    complex<double> lg2 = lgamma(complex<double>(2.0 * lam + 2.0, 0.0));
    double logC = lam * std::log(2.0) - pi * eta / 2.0 + log_abs_gamma -
                  lg2.real();
    // series u = z^{lam+1} sum a_j z^j, a_0 = 1,
    // a_1 = eta/(lam+1), (j)(j+2lam+1) a_j = 2 eta a_{j-1} - a_{j-2}
    dd a0(1.0), a1(eta / (lam + 1.0));
    dd zp(z);  // z^{1}
    dd sum = a0 * zp;  // careful: factor z^{lam} applied at the end via exp
    zp = zp * dd(z);
    sum += a1 * zp;
    dd am2 = a0, am1 = a1;
    int small_run = 0;  // eta = 0 zeroes every odd term; need two in a row
    for (int j = 2; j < 4000; ++j) {
        dd aj = (dd(2.0 * eta) * am1 - am2) / (dd(j) * dd(j + 2.0 * lam + 1.0));
        zp = zp * dd(z);
        dd t = aj * zp;
        sum += t;
        am2 = am1;
        am1 = aj;
        bool small = scri::detail::abs(t) <
                     1e-33 * (scri::detail::abs(sum) + 1e-300);
        small_run = small ? small_run + 1 : 0;
        if (small_run >= 2 && j > 2.0 * z) break;
    }
    return std::exp(logC + lam * std::log(z)) * static_cast<double>(sum);
}

}  // namespace oracles
