#pragma once

// Transforms between coefficients and the quadrature grid, the velocity L2
// metric, Sobolev norms, the Leray/Hodge projector, advection, and the
// Jacobi-Lie bracket.  Quadratic terms are formed pointwise on the grid and
// analyzed back onto the truncated basis (Galerkin truncation dealiasing).

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "eulerdisc/basis.hpp"
#include "eulerdisc/field.hpp"

namespace eulerdisc {

namespace detail {

// Radial profiles of psi and its first two r-derivatives, per angular mode.
struct RadialProfiles {
    int m_max = 0, n_r = 0;
    std::vector<cplx> P, Pr, Prr;
    std::size_t at(int m, int i) const {
        return static_cast<std::size_t>(m + m_max) * static_cast<std::size_t>(n_r) +
               static_cast<std::size_t>(i);
    }
};

inline RadialProfiles radial_profiles(const BasisTable& b, const GradedField& u, bool second_deriv) {
    RadialProfiles p;
    p.m_max = b.m_max;
    p.n_r = b.n_r();
    const std::size_t n = static_cast<std::size_t>(2 * b.m_max + 1) * static_cast<std::size_t>(p.n_r);
    p.P.assign(n, cplx{0.0, 0.0});
    p.Pr.assign(n, cplx{0.0, 0.0});
    if (second_deriv) p.Prr.assign(n, cplx{0.0, 0.0});
    for (int m = -b.m_max; m <= b.m_max; ++m) {
        const int ma = std::abs(m);
        for (int k = 1; k <= b.k_max; ++k) {
            const cplx c = u.c[b.index(m, k)];
            if (c == cplx{0.0, 0.0}) continue;
            for (int i = 0; i < p.n_r; ++i) {
                p.P[p.at(m, i)] += c * b.R[b.mki(ma, k, i)];
                p.Pr[p.at(m, i)] += c * b.Rp[b.mki(ma, k, i)];
                if (second_deriv) p.Prr[p.at(m, i)] += c * b.Rpp[b.mki(ma, k, i)];
            }
        }
    }
    return p;
}

}  // namespace detail

/// u = rot-grad(psi) sampled on the grid: u_r = -psi_t / r, u_t = psi_r.
inline GridField synthesize(const BasisTable& b, const GradedField& u) {
    check_same_basis(b, u, "synthesize");
    auto p = detail::radial_profiles(b, u, false);
    GridField g(b.n_r(), b.n_theta);
    const cplx iu{0.0, 1.0};
    for (int i = 0; i < b.n_r(); ++i) {
        const double r = b.r[static_cast<std::size_t>(i)];
        for (int j = 0; j < b.n_theta; ++j) {
            cplx wr{0.0, 0.0}, wt{0.0, 0.0};
            for (int m = -b.m_max; m <= b.m_max; ++m) {
                const cplx e = b.eimt(m, j);
                wr += (-iu * static_cast<double>(m) / r) * p.P[p.at(m, i)] * e;
                wt += p.Pr[p.at(m, i)] * e;
            }
            const double C = b.cos_t[static_cast<std::size_t>(j)];
            const double S = b.sin_t[static_cast<std::size_t>(j)];
            g.ux[g.at(i, j)] = wr * C - wt * S;
            g.uy[g.at(i, j)] = wr * S + wt * C;
        }
    }
    return g;
}

struct VelocityGradient {
    GridField vel;
    std::vector<cplx> dxvx, dyvx, dxvy, dyvy;
};

/// Velocity together with its Cartesian gradient tensor on the grid.
inline VelocityGradient synthesize_gradient(const BasisTable& b, const GradedField& u) {
    check_same_basis(b, u, "synthesize_gradient");
    auto p = detail::radial_profiles(b, u, true);
    VelocityGradient out;
    out.vel = GridField(b.n_r(), b.n_theta);
    const std::size_t n = out.vel.ux.size();
    out.dxvx.assign(n, cplx{});
    out.dyvx.assign(n, cplx{});
    out.dxvy.assign(n, cplx{});
    out.dyvy.assign(n, cplx{});

    const cplx iu{0.0, 1.0};
    for (int i = 0; i < b.n_r(); ++i) {
        const double r = b.r[static_cast<std::size_t>(i)];
        for (int j = 0; j < b.n_theta; ++j) {
            cplx vr{}, vt{}, drvr{}, dtvr{}, drvt{}, dtvt{};
            for (int m = -b.m_max; m <= b.m_max; ++m) {
                const cplx e = b.eimt(m, j);
                const cplx P = p.P[p.at(m, i)] * e;
                const cplx Pr = p.Pr[p.at(m, i)] * e;
                const cplx Prr = p.Prr[p.at(m, i)] * e;
                const cplx im = iu * static_cast<double>(m);
                const cplx vr_m = -im * P / r;
                vr += vr_m;
                vt += Pr;
                drvr += -im * (Pr / r - P / (r * r));
                dtvr += im * vr_m;
                drvt += Prr;
                dtvt += im * Pr;
            }
            const double C = b.cos_t[static_cast<std::size_t>(j)];
            const double S = b.sin_t[static_cast<std::size_t>(j)];
            const std::size_t q = out.vel.at(i, j);
            out.vel.ux[q] = vr * C - vt * S;
            out.vel.uy[q] = vr * S + vt * C;

            const cplx drvx = drvr * C - drvt * S;
            const cplx dtvx = dtvr * C - vr * S - dtvt * S - vt * C;
            const cplx drvy = drvr * S + drvt * C;
            const cplx dtvy = dtvr * S + vr * C + dtvt * C - vt * S;

            out.dxvx[q] = C * drvx - (S / r) * dtvx;
            out.dyvx[q] = S * drvx + (C / r) * dtvx;
            out.dxvy[q] = C * drvy - (S / r) * dtvy;
            out.dyvy[q] = S * drvy + (C / r) * dtvy;
        }
    }
    return out;
}

/// L2 projection of a grid velocity onto stream coefficients.
inline GradedField analyze(const BasisTable& b, const GridField& w, double grade = 0.0) {
    check_grid_shape(b, w, "analyze");
    const int nr = b.n_r();
    const int nt = b.n_theta;
    const double ang_w = 2.0 * std::numbers::pi / nt;

    // Polar components, then the angular transform per mode.
    std::vector<cplx> wr(static_cast<std::size_t>(nr) * static_cast<std::size_t>(nt));
    std::vector<cplx> wt(wr.size());
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nt; ++j) {
            const double C = b.cos_t[static_cast<std::size_t>(j)];
            const double S = b.sin_t[static_cast<std::size_t>(j)];
            const std::size_t q = w.at(i, j);
            wr[q] = w.ux[q] * C + w.uy[q] * S;
            wt[q] = -w.ux[q] * S + w.uy[q] * C;
        }

    const std::size_t nm = static_cast<std::size_t>(2 * b.m_max + 1);
    std::vector<cplx> Wr(nm * static_cast<std::size_t>(nr)), Wt(nm * static_cast<std::size_t>(nr));
    for (int m = -b.m_max; m <= b.m_max; ++m) {
        const std::size_t row = static_cast<std::size_t>(m + b.m_max) * static_cast<std::size_t>(nr);
        for (int i = 0; i < nr; ++i) {
            cplx ar{}, at{};
            for (int j = 0; j < nt; ++j) {
                const cplx e = std::conj(b.eimt(m, j));
                const std::size_t q = w.at(i, j);
                ar += wr[q] * e;
                at += wt[q] * e;
            }
            Wr[row + static_cast<std::size_t>(i)] = ar * ang_w;
            Wt[row + static_cast<std::size_t>(i)] = at * ang_w;
        }
    }

    GradedField out(b.m_max, b.k_max, grade);
    out.real_field = false;
    const cplx iu{0.0, 1.0};
    for (int m = -b.m_max; m <= b.m_max; ++m) {
        const int ma = std::abs(m);
        const std::size_t row = static_cast<std::size_t>(m + b.m_max) * static_cast<std::size_t>(nr);
        for (int k = 1; k <= b.k_max; ++k) {
            cplx acc{};
            for (int i = 0; i < nr; ++i) {
                const double r = b.r[static_cast<std::size_t>(i)];
                const double wq = b.w_meas[static_cast<std::size_t>(i)];
                acc += wq * ((iu * static_cast<double>(m) / r) * b.R[b.mki(ma, k, i)] *
                                 Wr[row + static_cast<std::size_t>(i)] +
                             b.Rp[b.mki(ma, k, i)] * Wt[row + static_cast<std::size_t>(i)]);
            }
            out.c[b.index(m, k)] = acc / b.lambda[b.mk(ma, k)];
        }
    }
    double max_abs = 0.0;
    for (const auto& z : out.c) max_abs = std::max(max_abs, std::abs(z));
    if (out.reality_defect() <= 1e-13 * std::max(1.0, max_abs)) out.real_field = true;
    return out;
}

// ---- metric and norms -------------------------------------------------------

/// Velocity L2 pairing in stream coefficients: sum lambda Re(conj(c_u) c_v).
inline double inner_product(const BasisTable& b, const GradedField& u, const GradedField& v) {
    check_same_basis(b, u, "inner_product");
    check_same_basis(b, v, "inner_product");
    double s = 0.0;
    for (int m = -b.m_max; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            const std::size_t q = b.index(m, k);
            s += b.lambda[b.mk(std::abs(m), k)] * (std::conj(u.c[q]) * v.c[q]).real();
        }
    return s;
}

inline double norm(const BasisTable& b, const GradedField& u) {
    return std::sqrt(std::max(0.0, inner_product(b, u, u)));
}

/// sqrt( sum lambda (1+lambda)^s |c|^2 ).
inline double sobolev_norm(const BasisTable& b, const GradedField& u, double s) {
    check_same_basis(b, u, "sobolev_norm");
    if (s < 0.0) throw FieldError("sobolev_norm: s must be >= 0");
    double acc = 0.0;
    for (int m = -b.m_max; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            const double lam = b.lambda[b.mk(std::abs(m), k)];
            acc += lam * std::pow(1.0 + lam, s) * std::norm(u.c[b.index(m, k)]);
        }
    return std::sqrt(acc);
}

/// Quadrature L2 pairing of grid velocities.
inline double grid_inner(const BasisTable& b, const GridField& a, const GridField& c) {
    check_grid_shape(b, a, "grid_inner");
    check_grid_shape(b, c, "grid_inner");
    const double ang_w = 2.0 * std::numbers::pi / b.n_theta;
    double s = 0.0;
    for (int i = 0; i < b.n_r(); ++i) {
        double row = 0.0;
        for (int j = 0; j < b.n_theta; ++j) {
            const std::size_t q = a.at(i, j);
            row += (a.ux[q] * std::conj(c.ux[q]) + a.uy[q] * std::conj(c.uy[q])).real();
        }
        s += row * b.w_meas[static_cast<std::size_t>(i)] * ang_w;
    }
    return s;
}

inline double grid_norm(const BasisTable& b, const GridField& a) {
    return std::sqrt(std::max(0.0, grid_inner(b, a, a)));
}

inline double grid_max_abs(const GridField& a) {
    double m = 0.0;
    for (std::size_t q = 0; q < a.ux.size(); ++q)
        m = std::max(m, std::max(std::abs(a.ux[q]), std::abs(a.uy[q])));
    return m;
}

// ---- Leray / Hodge projection ----------------------------------------------

struct LerayParts {
    GradedField div_free;  // P_e w in coefficients
    GridField grad_part;   // w - P_e w on the grid (the pressure-gradient part)
};

/// Orthogonal split w = P_e w + grad(phi).  The projection onto the resolved
/// divergence-free modes is the L2 analysis; the gradient part is the grid
/// residual (only grad(phi), never phi itself, is contractual).
inline LerayParts leray_project(const BasisTable& b, const GridField& w, double grade = 0.0) {
    LerayParts out;
    out.div_free = analyze(b, w, grade);
    out.grad_part = w - synthesize(b, out.div_free);
    return out;
}

// ---- advection and bracket ---------------------------------------------------

/// (u . grad) v evaluated pseudo-spectrally on the grid.
inline GridField advect(const BasisTable& b, const GradedField& u, const GradedField& v) {
    GridField uvel = synthesize(b, u);
    VelocityGradient vg = synthesize_gradient(b, v);
    GridField a(b.n_r(), b.n_theta);
    for (std::size_t q = 0; q < a.ux.size(); ++q) {
        a.ux[q] = uvel.ux[q] * vg.dxvx[q] + uvel.uy[q] * vg.dyvx[q];
        a.uy[q] = uvel.ux[q] * vg.dxvy[q] + uvel.uy[q] * vg.dyvy[q];
    }
    return a;
}

/// (grad w)^T . u on the grid.
inline GridField transpose_term(const BasisTable& b, const GradedField& w, const GradedField& u) {
    GridField uvel = synthesize(b, u);
    VelocityGradient wg = synthesize_gradient(b, w);
    GridField t(b.n_r(), b.n_theta);
    for (std::size_t q = 0; q < t.ux.size(); ++q) {
        t.ux[q] = uvel.ux[q] * wg.dxvx[q] + uvel.uy[q] * wg.dxvy[q];
        t.uy[q] = uvel.ux[q] * wg.dyvx[q] + uvel.uy[q] * wg.dyvy[q];
    }
    return t;
}

/// [u, v] = grad_u v - grad_v u, analyzed back onto the basis; grade drops by one.
inline GradedField jacobi_lie_bracket(const BasisTable& b, const GradedField& u, const GradedField& v) {
    GridField d = advect(b, u, v) - advect(b, v, u);
    GradedField out = analyze(b, d, std::min(u.grade, v.grade) - 1.0);
    if (u.real_field && v.real_field) out.enforce_reality();
    return out;
}

/// Max pointwise |div u| on the grid (zero up to round-off by construction).
inline double divergence_max(const BasisTable& b, const GradedField& u) {
    VelocityGradient g = synthesize_gradient(b, u);
    double d = 0.0;
    for (std::size_t q = 0; q < g.dxvx.size(); ++q)
        d = std::max(d, std::abs(g.dxvx[q] + g.dyvy[q]));
    return d;
}

}  // namespace eulerdisc
