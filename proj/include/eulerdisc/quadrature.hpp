#pragma once

// Gauss-Legendre quadrature, Newton iteration on the Legendre recurrence.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace eulerdisc {

struct GaussLegendre {
    std::vector<double> x;  // nodes
    std::vector<double> w;  // weights
};

/// n-point rule on [-1, 1].
inline GaussLegendre gauss_legendre(int n) {
    GaussLegendre gl;
    gl.x.assign(static_cast<std::size_t>(n), 0.0);
    gl.w.assign(static_cast<std::size_t>(n), 0.0);
    const int mid = (n + 1) / 2;
    for (int i = 0; i < mid; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        gl.x[static_cast<std::size_t>(i)] = -z;
        gl.x[static_cast<std::size_t>(n - 1 - i)] = z;
        double w = 2.0 / ((1.0 - z * z) * pp * pp);
        gl.w[static_cast<std::size_t>(i)] = w;
        gl.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return gl;
}

/// n-point rule mapped to [0, 1].
inline GaussLegendre gauss_legendre01(int n) {
    GaussLegendre gl = gauss_legendre(n);
    for (int i = 0; i < n; ++i) {
        gl.x[static_cast<std::size_t>(i)] = 0.5 * (gl.x[static_cast<std::size_t>(i)] + 1.0);
        gl.w[static_cast<std::size_t>(i)] *= 0.5;
    }
    return gl;
}

}  // namespace eulerdisc
