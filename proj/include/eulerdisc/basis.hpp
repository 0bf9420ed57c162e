#pragma once

// Fourier-Bessel stream-function basis on the unit disc.
//
// phi_{m,k}(r,t) = N_{m,k} J_|m|(j_{|m|,k} r) e^{imt} are Dirichlet Laplacian
// eigenfunctions with unit L2 norm; velocities u = rot-grad(psi) built on them
// are exactly divergence free and tangent to the boundary.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "eulerdisc/bessel.hpp"
#include "eulerdisc/quadrature.hpp"

namespace eulerdisc {

using cplx = std::complex<double>;

struct BasisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BasisTable {
    int m_max = 0;
    int k_max = 0;

    // Per (|m|, k), row-major over m = 0..m_max, k = 1..k_max.
    std::vector<double> zeros;   // j_{m,k}
    std::vector<double> lambda;  // j_{m,k}^2
    std::vector<double> norm;    // 1 / (sqrt(pi) |J_{m+1}(j_{m,k})|)

    // Quadrature: Gauss-Legendre radial nodes on (0,1), uniform angular grid.
    std::vector<double> r;        // radial nodes
    std::vector<double> w_gl;     // weights for  int_0^1 f(r) dr
    std::vector<double> w_meas;   // weights for  int_0^1 f(r) r dr
    int n_theta = 0;
    std::vector<double> theta, cos_t, sin_t;

    // Radial profile tables at the nodes, layout (|m|, k, i):
    //   R   = N J_m(j r)          (stream profile)
    //   Rp  = N j J'_m(j r)       (d/dr)
    //   Rpp = N j^2 J''_m(j r)    (d^2/dr^2)
    std::vector<double> R, Rp, Rpp;

    // e^{imt} on the angular grid, m = -m_max..m_max.
    std::vector<cplx> expimt;

    int n_r() const { return static_cast<int>(r.size()); }
    int n_modes() const { return (2 * m_max + 1) * k_max; }

    // Coefficient index for m in [-m_max, m_max], k in [1, k_max].
    std::size_t index(int m, int k) const {
        return static_cast<std::size_t>(m + m_max) * static_cast<std::size_t>(k_max) +
               static_cast<std::size_t>(k - 1);
    }
    std::size_t mk(int m_abs, int k) const {
        return static_cast<std::size_t>(m_abs) * static_cast<std::size_t>(k_max) +
               static_cast<std::size_t>(k - 1);
    }
    std::size_t mki(int m_abs, int k, int i) const {
        return mk(m_abs, k) * static_cast<std::size_t>(n_r()) + static_cast<std::size_t>(i);
    }

    double zero(int m, int k) const { return zeros[mk(std::abs(m), k)]; }
    double lam(int m, int k) const { return lambda[mk(std::abs(m), k)]; }
    const cplx& eimt(int m, int j) const {
        return expimt[static_cast<std::size_t>(m + m_max) * static_cast<std::size_t>(n_theta) +
                      static_cast<std::size_t>(j)];
    }
};

/// Builds the basis table.  quad_order requests the radial node count; the
/// actual count is raised to resolve quadratic products of resolved modes.
inline BasisTable build_basis(int m_max, int k_max, int quad_order = 0) {
    if (m_max < 0 || k_max < 1) throw BasisError("build_basis: need m_max >= 0, k_max >= 1");

    BasisTable b;
    b.m_max = m_max;
    b.k_max = k_max;

    const std::size_t n_mk = static_cast<std::size_t>(m_max + 1) * static_cast<std::size_t>(k_max);
    b.zeros.resize(n_mk);
    b.lambda.resize(n_mk);
    b.norm.resize(n_mk);

    for (int m = 0; m <= m_max; ++m) {
        auto z = bessel_zeros(m, k_max);
        for (int k = 1; k <= k_max; ++k) {
            const double j = z[static_cast<std::size_t>(k - 1)];
            if (std::abs(bessel_j(m, j)) > 1e-12)
                throw BesselZeroError(m, k, "zero residual above 1e-12");
            b.zeros[b.mk(m, k)] = j;
            b.lambda[b.mk(m, k)] = j * j;
            const double jnext = bessel_j(m + 1, j);
            b.norm[b.mk(m, k)] = 1.0 / (std::sqrt(std::numbers::pi) * std::abs(jnext));
        }
    }

    const double z_max = b.zeros[b.mk(m_max, k_max)];
    int n_r = quad_order;
    n_r = std::max(n_r, static_cast<int>(std::ceil(1.5 * k_max * std::numbers::pi)));
    n_r = std::max(n_r, static_cast<int>(std::ceil(0.75 * z_max)) + 12);

    GaussLegendre gl = gauss_legendre01(n_r);
    b.r = gl.x;
    b.w_gl = gl.w;
    b.w_meas.resize(static_cast<std::size_t>(n_r));
    for (int i = 0; i < n_r; ++i)
        b.w_meas[static_cast<std::size_t>(i)] =
            gl.w[static_cast<std::size_t>(i)] * gl.x[static_cast<std::size_t>(i)];

    b.n_theta = std::max(4 * m_max + 1, 16);
    b.theta.resize(static_cast<std::size_t>(b.n_theta));
    b.cos_t.resize(static_cast<std::size_t>(b.n_theta));
    b.sin_t.resize(static_cast<std::size_t>(b.n_theta));
    for (int j = 0; j < b.n_theta; ++j) {
        const double t = 2.0 * std::numbers::pi * j / b.n_theta;
        b.theta[static_cast<std::size_t>(j)] = t;
        b.cos_t[static_cast<std::size_t>(j)] = std::cos(t);
        b.sin_t[static_cast<std::size_t>(j)] = std::sin(t);
    }

    b.expimt.resize(static_cast<std::size_t>(2 * m_max + 1) * static_cast<std::size_t>(b.n_theta));
    for (int m = -m_max; m <= m_max; ++m)
        for (int j = 0; j < b.n_theta; ++j) {
            const double t = b.theta[static_cast<std::size_t>(j)];
            b.expimt[static_cast<std::size_t>(m + m_max) * static_cast<std::size_t>(b.n_theta) +
                     static_cast<std::size_t>(j)] = std::polar(1.0, m * t);
        }

    // Radial tables; J'' from the Bessel ODE, nodes are interior so z > 0.
    b.R.resize(n_mk * static_cast<std::size_t>(n_r));
    b.Rp.resize(n_mk * static_cast<std::size_t>(n_r));
    b.Rpp.resize(n_mk * static_cast<std::size_t>(n_r));
    for (int m = 0; m <= m_max; ++m)
        for (int k = 1; k <= k_max; ++k) {
            const double j = b.zeros[b.mk(m, k)];
            const double N = b.norm[b.mk(m, k)];
            for (int i = 0; i < n_r; ++i) {
                const double z = j * b.r[static_cast<std::size_t>(i)];
                auto ja = bessel_j_array(m + 1, z);
                const double J = ja[static_cast<std::size_t>(m)];
                const double Jp = (m == 0) ? -ja[1]
                                           : 0.5 * (ja[static_cast<std::size_t>(m) - 1] -
                                                    ja[static_cast<std::size_t>(m) + 1]);
                const double Jpp = -Jp / z - (1.0 - static_cast<double>(m) * m / (z * z)) * J;
                b.R[b.mki(m, k, i)] = N * J;
                b.Rp[b.mki(m, k, i)] = N * j * Jp;
                b.Rpp[b.mki(m, k, i)] = N * j * j * Jpp;
            }
        }
    return b;
}

}  // namespace eulerdisc
