#pragma once

// Bessel functions J_m of the first kind and their positive zeros.
// Ascending series for small argument, Miller downward recurrence for the
// rest; zeros by sign-change bracketing, bisection, and a Newton polish.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace eulerdisc {

struct BesselZeroError : std::runtime_error {
    int m, k;
    BesselZeroError(int m_, int k_, const std::string& what_)
        : std::runtime_error("bessel zero (m=" + std::to_string(m_) +
                             ", k=" + std::to_string(k_) + "): " + what_),
          m(m_), k(k_) {}
};

namespace detail {

// J_m(x) = sum_t (-1)^t (x/2)^{m+2t} / (t! (m+t)!); fine in double up to x ~ 9.
inline double bessel_series(int m, double x) {
    const double h = 0.5 * x;
    double term = 1.0;
    for (int i = 1; i <= m; ++i) term *= h / static_cast<double>(i);
    double sum = term;
    const double h2 = h * h;
    for (int t = 1; t <= 80; ++t) {
        term *= -h2 / (static_cast<double>(t) * static_cast<double>(m + t));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

// Miller's algorithm: downward recurrence seeded high, normalized with
// J_0 + 2*(J_2 + J_4 + ...) = 1.  Returns J_0..J_n(x) for x > 0.
inline std::vector<double> bessel_miller(int n, double x) {
    const int xi = static_cast<int>(x);
    int start = std::max(n, xi) + 2 * static_cast<int>(std::sqrt(40.0 * (std::max(n, xi) + 1))) + 24;
    if (start % 2 == 1) ++start;

    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    double jp = 0.0;        // J_{k+1}
    double jc = 1e-30;      // J_k, seeded at k = start
    double even_sum = 0.0;  // 2 * (J_2 + J_4 + ...)
    if (start <= n) out[static_cast<std::size_t>(start)] = jc;

    for (int k = start; k >= 1; --k) {
        double jm = (2.0 * k / x) * jc - jp;  // J_{k-1}
        jp = jc;
        jc = jm;
        if (std::abs(jc) > 1e250) {
            jc *= 1e-250;
            jp *= 1e-250;
            even_sum *= 1e-250;
            for (double& v : out) v *= 1e-250;
        }
        if (k - 1 <= n) out[static_cast<std::size_t>(k - 1)] = jc;
        if ((k - 1) % 2 == 0 && k - 1 != 0) even_sum += 2.0 * jc;
    }
    const double norm = jc + even_sum;  // jc = J_0 now
    for (double& v : out) v /= norm;
    return out;
}

}  // namespace detail

/// J_0(x)..J_n(x) for x >= 0.
inline std::vector<double> bessel_j_array(int n, double x) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    if (x <= 9.0) {
        for (int m = 0; m <= n; ++m) out[static_cast<std::size_t>(m)] = detail::bessel_series(m, x);
        return out;
    }
    return detail::bessel_miller(n, x);
}

inline double bessel_j(int m, double x) { return bessel_j_array(m, x)[static_cast<std::size_t>(m)]; }

/// dJ_m/dx via J'_0 = -J_1, J'_m = (J_{m-1} - J_{m+1}) / 2.
inline double bessel_j_prime(int m, double x) {
    auto j = bessel_j_array(m + 1, x);
    if (m == 0) return -j[1];
    return 0.5 * (j[static_cast<std::size_t>(m) - 1] - j[static_cast<std::size_t>(m) + 1]);
}

/// First kmax positive zeros of J_m, strictly increasing.
inline std::vector<double> bessel_zeros(int m, int kmax) {
    std::vector<double> zeros;
    zeros.reserve(static_cast<std::size_t>(kmax));

    // J_m > 0 on (0, j_{m,1}); successive zeros are at least ~3.1 apart,
    // so a 0.5 scan step cannot skip a sign change.
    const double step = 0.5;
    double lo = (m == 0) ? 0.5 : static_cast<double>(m);
    double flo = bessel_j(m, lo);
    const double x_limit = static_cast<double>(m) + 4.0 + 3.5 * (kmax + 2);

    while (static_cast<int>(zeros.size()) < kmax) {
        double hi = lo + step;
        if (hi > x_limit) throw BesselZeroError(m, static_cast<int>(zeros.size()) + 1, "bracket scan exhausted");
        double fhi = bessel_j(m, hi);
        if ((flo < 0.0) != (fhi < 0.0)) {
            double a = lo, b = hi, fa = flo;
            for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
                double mid = 0.5 * (a + b);
                double fm = bessel_j(m, mid);
                if ((fa < 0.0) != (fm < 0.0)) {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            double z = 0.5 * (a + b);
            for (int it = 0; it < 4; ++it) {
                double f = bessel_j(m, z);
                double fp = bessel_j_prime(m, z);
                if (fp == 0.0) break;
                double dz = f / fp;
                if (std::abs(dz) > 0.5) break;  // stay inside the bracket
                z -= dz;
            }
            if (!(z > 0.0) || !std::isfinite(z))
                throw BesselZeroError(m, static_cast<int>(zeros.size()) + 1, "bisection failed");
            zeros.push_back(z);
        }
        lo = hi;
        flo = fhi;
    }
    return zeros;
}

inline double bessel_zero(int m, int k) { return bessel_zeros(m, k)[static_cast<std::size_t>(k) - 1]; }

}  // namespace eulerdisc
