#pragma once

// The SO(2) isometry action on disc fields: rotation acts diagonally on
// stream coefficients, c_{m,k} -> e^{-i m a} c_{m,k}.  Infinitesimal
// generators, isotropy classification, fixed-point projections, and the
// numerical check of the C^1-into-lower-grade hypothesis live here.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "eulerdisc/basis.hpp"
#include "eulerdisc/field.hpp"
#include "eulerdisc/transforms.hpp"

namespace eulerdisc {

struct GroupElement {
    double angle = 0.0;  // reduced mod 2*pi

    static double reduce(double a) {
        const double tau = 2.0 * std::numbers::pi;
        double r = std::fmod(a, tau);
        if (r < 0.0) r += tau;
        return r;
    }
    explicit GroupElement(double a = 0.0) : angle(reduce(a)) {}
    GroupElement compose(const GroupElement& g) const { return GroupElement(angle + g.angle); }
    GroupElement inverse() const { return GroupElement(-angle); }
};

struct SubgroupDescriptor {
    enum class Kind { Trivial, Cyclic, FullCircle };
    Kind kind = Kind::Trivial;
    int n = 1;  // for Cyclic, n >= 2

    static SubgroupDescriptor trivial() { return {Kind::Trivial, 1}; }
    static SubgroupDescriptor cyclic(int n) {
        if (n < 2) throw std::invalid_argument("SubgroupDescriptor: Cyclic needs n >= 2");
        return {Kind::Cyclic, n};
    }
    static SubgroupDescriptor full_circle() { return {Kind::FullCircle, 0}; }

    bool operator==(const SubgroupDescriptor& o) const { return kind == o.kind && n == o.n; }

    std::string to_string() const {
        switch (kind) {
            case Kind::Trivial: return "trivial";
            case Kind::Cyclic: return "cyclic:" + std::to_string(n);
            case Kind::FullCircle: return "so2";
        }
        return "trivial";
    }

    static SubgroupDescriptor parse(const std::string& s) {
        if (s == "trivial") return trivial();
        if (s == "so2") return full_circle();
        if (s.rfind("cyclic:", 0) == 0) return cyclic(std::stoi(s.substr(7)));
        throw std::invalid_argument("SubgroupDescriptor: cannot parse '" + s + "'");
    }
};

// ---- the action ---------------------------------------------------------------

/// l_a(u): coefficients pick up the phase e^{-i m a}; every Sobolev norm is
/// preserved exactly and the grade is unchanged.
inline GradedField rotate(const BasisTable& b, const GradedField& u, double alpha) {
    check_same_basis(b, u, "rotate");
    GradedField out = u;
    for (int m = -b.m_max; m <= b.m_max; ++m) {
        if (m == 0) continue;
        const cplx ph = std::polar(1.0, -static_cast<double>(m) * alpha);
        for (int k = 1; k <= b.k_max; ++k) out.c[b.index(m, k)] *= ph;
    }
    return out;
}

inline GradedField rotate(const BasisTable& b, const GradedField& u, const GroupElement& g) {
    return rotate(b, u, g.angle);
}

/// xi_X(u) = [u, X_xi]: diagonal angular derivative, grade drops by one.
inline GradedField generator(const BasisTable& b, const GradedField& u, double xi) {
    check_same_basis(b, u, "generator");
    GradedField out = u;
    out.grade = u.grade - 1.0;
    for (int m = -b.m_max; m <= b.m_max; ++m) {
        const cplx f = cplx{0.0, -static_cast<double>(m) * xi};
        for (int k = 1; k <= b.k_max; ++k) out.c[b.index(m, k)] *= f;
    }
    return out;
}

/// The rigid-rotation Killing field xi*(-y, x), analyzed onto the basis.
/// Only m = 0 modes appear; the radial profile is an infinite series, so the
/// truncation residual (relative, in the velocity norm) is reported through
/// trunc_residual when requested.
inline GradedField killing_field(const BasisTable& b, double xi, double* trunc_residual = nullptr) {
    GradedField out(b.m_max, b.k_max, 0.0);
    // <z, e_{0,k}> = -4 sqrt(pi) sgn(J_1(j_k)) / j_k for the unit Killing field,
    // divided by lambda = j_k^2.
    double resolved_energy = 0.0;
    for (int k = 1; k <= b.k_max; ++k) {
        const double j = b.zeros[b.mk(0, k)];
        const double j1 = bessel_j(1, j);
        const double sign = (j1 >= 0.0) ? 1.0 : -1.0;
        const double c = -4.0 * std::sqrt(std::numbers::pi) * sign / (j * j * j);
        out.at(0, k) = cplx{xi * c, 0.0};
        resolved_energy += b.lambda[b.mk(0, k)] * c * c;
    }
    if (trunc_residual) {
        const double total = std::numbers::pi / 2.0;  // |z|_{L2}^2 for xi = 1
        *trunc_residual = std::sqrt(std::max(0.0, 1.0 - resolved_energy / total));
    }
    out.real_field = true;
    return out;
}

inline double killing_truncation_residual(const BasisTable& b) {
    double r = 0.0;
    (void)killing_field(b, 1.0, &r);
    return r;
}

// ---- isotropy ------------------------------------------------------------------

/// Isotropy subgroup from the angular-mode support: S = { |m| : mode active },
/// empty -> SO(2); gcd(S) = d >= 2 -> Z_d; otherwise trivial.
inline SubgroupDescriptor classify_isotropy(const BasisTable& b, const GradedField& u,
                                            double tol = 1e-10) {
    check_same_basis(b, u, "classify_isotropy");
    if (tol <= 0.0) throw std::invalid_argument("classify_isotropy: tol must be > 0");
    const double scale = norm(b, u);
    int d = 0;
    for (int m = 1; m <= b.m_max; ++m) {
        bool active = false;
        for (int k = 1; k <= b.k_max; ++k)
            if (std::abs(u.at(m, k)) > tol * scale || std::abs(u.at(-m, k)) > tol * scale) {
                active = true;
                break;
            }
        if (active) d = std::gcd(d, m);
    }
    if (d == 0) return SubgroupDescriptor::full_circle();
    if (d == 1) return SubgroupDescriptor::trivial();
    return SubgroupDescriptor::cyclic(d);
}

/// Orthogonal projection onto the H-fixed subspace (keep m = 0 mod n).
inline GradedField fixed_point_project(const BasisTable& b, const GradedField& u,
                                       const SubgroupDescriptor& H) {
    check_same_basis(b, u, "fixed_point_project");
    if (H.kind == SubgroupDescriptor::Kind::Trivial) return u;
    GradedField out = u;
    for (int m = -b.m_max; m <= b.m_max; ++m) {
        const bool keep = (H.kind == SubgroupDescriptor::Kind::FullCircle) ? (m == 0)
                                                                           : (m % H.n == 0);
        if (keep) continue;
        for (int k = 1; k <= b.k_max; ++k) out.c[b.index(m, k)] = cplx{0.0, 0.0};
    }
    return out;
}

/// |u - rotate(u, 2 pi / n)| / max(|u|, eps); zero iff Z_n fixes u.
inline double symmetry_defect(const BasisTable& b, const GradedField& u, int n) {
    if (n < 1) throw std::invalid_argument("symmetry_defect: n >= 1");
    const double nu = norm(b, u);
    GradedField d = u - rotate(b, u, 2.0 * std::numbers::pi / n);
    return norm(b, d) / std::max(nu, 1e-300);
}

// ---- hypothesis checks -----------------------------------------------------------

struct C1Report {
    std::vector<double> epsilons;
    std::vector<double> residuals;  // |(rot(u,e)-u)/e - generator(u,1)|_{s-1}
    double fitted_order = 0.0;      // least-squares slope of log r vs log e
};

inline double fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Finite-difference convergence of the action toward its generator in the
/// s-1 norm; the hypothesis asks for order >= 1.
inline C1Report check_c1_hypothesis(const BasisTable& b, const GradedField& u, double s,
                                    const std::vector<double>& epsilons) {
    if (s < 1.0) throw std::invalid_argument("check_c1_hypothesis: need s >= 1");
    C1Report rep;
    rep.epsilons = epsilons;
    GradedField gen = generator(b, u, 1.0);
    for (double eps : epsilons) {
        GradedField diff = (1.0 / eps) * (rotate(b, u, eps) - u) - gen;
        rep.residuals.push_back(sobolev_norm(b, diff, s - 1.0));
    }
    rep.fitted_order = fit_log_slope(rep.epsilons, rep.residuals);
    return rep;
}

}  // namespace eulerdisc
