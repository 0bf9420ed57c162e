#pragma once

// Test-only oracles, kept independent of the implementation paths they check:
// zeros from a sign scan over std::cyl_bessel_j, and a pointwise velocity
// evaluator that sums the basis directly at arbitrary points.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "eulerdisc/basis.hpp"
#include "eulerdisc/field.hpp"

namespace oracles {

inline double std_bessel_zero(int m, int k) {
    auto f = [&](double x) { return std::cyl_bessel_j(static_cast<double>(m), x); };
    double lo = (m == 0) ? 0.5 : static_cast<double>(m);
    double flo = f(lo);
    int found = 0;
    for (;;) {
        double hi = lo + 0.25;
        double fhi = f(hi);
        if ((flo < 0.0) != (fhi < 0.0)) {
            ++found;
            if (found == k) {
                double a = lo, b = hi, fa = flo;
                for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
                    double mid = 0.5 * (a + b), fm = f(mid);
                    if ((fa < 0.0) != (fm < 0.0)) {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                return 0.5 * (a + b);
            }
        }
        lo = hi;
        flo = fhi;
    }
}

/// Velocity of the coefficient field at an arbitrary point (r, t), summed
/// mode by mode through std::cyl_bessel_j.
inline std::pair<std::complex<double>, std::complex<double>> eval_velocity(
    const eulerdisc::BasisTable& b, const eulerdisc::GradedField& u, double r, double t) {
    using cplx = std::complex<double>;
    cplx wr{0.0, 0.0}, wt{0.0, 0.0};
    for (int m = -b.m_max; m <= b.m_max; ++m) {
        const int ma = std::abs(m);
        for (int k = 1; k <= b.k_max; ++k) {
            const cplx c = u.at(m, k);
            if (c == cplx{0.0, 0.0}) continue;
            const double j = b.zero(m, k);
            const double N = b.norm[b.mk(ma, k)];
            const double J = std::cyl_bessel_j(static_cast<double>(ma), j * r);
            const double Jm1 = (ma == 0) ? -std::cyl_bessel_j(1.0, j * r)
                                         : 0.5 * (std::cyl_bessel_j(static_cast<double>(ma - 1), j * r) -
                                                  std::cyl_bessel_j(static_cast<double>(ma + 1), j * r));
            const cplx ph = std::polar(1.0, m * t);
            wr += c * cplx{0.0, -static_cast<double>(m)} * (N * J / r) * ph;
            wt += c * (N * j * Jm1) * ph;
        }
    }
    const double C = std::cos(t), S = std::sin(t);
    return {wr * C - wt * S, wr * S + wt * C};
}

}  // namespace oracles
