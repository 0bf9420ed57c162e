#pragma once

// Slice machinery for the residually free SO(2)-action on an isotropy
// stratum: the slice map and its Newton solve for beta, quotient chart,
// vertical/horizontal splitting, horizontal lift, the canonical section
// realizing pi_H, the reduced metric, and the reduced Lie bracket.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "eulerdisc/basis.hpp"
#include "eulerdisc/field.hpp"
#include "eulerdisc/group.hpp"
#include "eulerdisc/transforms.hpp"

namespace eulerdisc {

struct ChartDomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateGeneratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnstableChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NewtonParams {
    int max_iters = 50;
    double tol = 1e-12;
};

inline std::uint64_t fnv1a_hash(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

struct SliceChart {
    GradedField base;        // q, with classify_isotropy(q) = H
    SubgroupDescriptor H;
    GradedField e_hat;       // generator(q, 1) normalized to unit length
    double e_norm = 0.0;     // |E(q)| before normalization
    NewtonParams newton;
    std::uint64_t id = 0;    // hash of the base snapshot

    // Residual lattice spacing 2*pi/n of SO(2)/Z_n; bounds the Newton trust step.
    double residual_period() const {
        const int n = (H.kind == SubgroupDescriptor::Kind::Cyclic) ? H.n : 1;
        return 2.0 * std::numbers::pi / n;
    }
};

/// Chart at q.  Requires a locally free residual action: H != SO(2).
inline SliceChart make_slice_chart(const BasisTable& b, const GradedField& q,
                                   NewtonParams newton = {}, double isotropy_tol = 1e-10) {
    check_same_basis(b, q, "make_slice_chart");
    SliceChart ch;
    ch.H = classify_isotropy(b, q, isotropy_tol);
    if (ch.H.kind == SubgroupDescriptor::Kind::FullCircle)
        throw DegenerateGeneratorError("make_slice_chart: base point is SO(2)-invariant");
    ch.base = q;
    GradedField E = generator(b, q, 1.0);
    ch.e_norm = norm(b, E);
    if (!(ch.e_norm > 0.0))
        throw DegenerateGeneratorError("make_slice_chart: vanishing generator at base");
    ch.e_hat = (1.0 / ch.e_norm) * E;
    ch.newton = newton;
    ch.id = fnv1a_hash(format_snapshot(q));
    return ch;
}

struct ReducedPoint {
    GradedField rep;  // canonical representative of the orbit
    SubgroupDescriptor H;
    std::uint64_t chart_id = 0;
    bool full_circle_fixed = false;  // canonicalize on the SO(2)-fixed stratum
};

// ---- the slice map and the beta solve -------------------------------------------

/// S_q(alpha, r) = < rotate(r, alpha) - q, e_hat >.  The base is horizontal
/// (<q, E(q)> = 0 exactly), so this equals < rotate(r, alpha), e_hat >.
inline double s_map(const BasisTable& b, const SliceChart& ch, double alpha, const GradedField& r) {
    GradedField moved = rotate(b, r, alpha) - ch.base;
    return inner_product(b, moved, ch.e_hat);
}

/// d/dalpha of s_map: < generator(rotate(r, alpha), 1), e_hat >.
inline double s_map_derivative(const BasisTable& b, const SliceChart& ch, double alpha,
                               const GradedField& r) {
    GradedField g = generator(b, rotate(b, r, alpha), 1.0);
    return inner_product(b, g, ch.e_hat);
}

/// Newton solve for the chart angle beta_q(r) from alpha = 0, with a trust
/// region of half the residual period; falls back to bisection on a scanned
/// bracket when Newton stalls.  Throws ChartDomainError outside the chart
/// neighborhood.
inline double solve_beta(const BasisTable& b, const SliceChart& ch, const GradedField& r) {
    check_same_basis(b, r, "solve_beta");
    const double period = ch.residual_period();
    const double max_step = 0.5 * period;
    double alpha = 0.0;

    for (int it = 0; it < ch.newton.max_iters; ++it) {
        const double f = s_map(b, ch, alpha, r);
        if (std::abs(f) < ch.newton.tol) return alpha;
        const double fp = s_map_derivative(b, ch, alpha, r);
        if (std::abs(fp) < 1e-10)
            throw ChartDomainError("solve_beta: slice map derivative degenerate (chart domain exceeded)");
        double step = -f / fp;
        if (std::abs(step) > max_step) step = (step > 0 ? max_step : -max_step);
        alpha += step;
        if (std::abs(alpha) > 0.75 * period) break;  // wandered outside the window: try bisection
    }

    // Bracket scan over one residual period around 0.
    const int n_scan = 64;
    double prev_a = -0.5 * period;
    double prev_f = s_map(b, ch, prev_a, r);
    for (int i = 1; i <= n_scan; ++i) {
        const double a = -0.5 * period + period * i / n_scan;
        const double f = s_map(b, ch, a, r);
        if ((prev_f < 0.0) != (f < 0.0)) {
            double lo = prev_a, hi = a, flo = prev_f;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = s_map(b, ch, mid, r);
                if (std::abs(fm) < ch.newton.tol) {
                    // keep only roots where the chart is transverse
                    if (std::abs(s_map_derivative(b, ch, mid, r)) < 1e-10) break;
                    return mid;
                }
                if ((flo < 0.0) != (fm < 0.0)) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
        }
        prev_a = a;
        prev_f = f;
    }
    throw ChartDomainError("solve_beta: no slice intersection found (chart domain exceeded)");
}

/// B_q(r) = rotate(r, beta_q(r)): the slice representative of the orbit of r.
inline ReducedPoint chart_B(const BasisTable& b, const SliceChart& ch, const GradedField& r) {
    const double beta = solve_beta(b, ch, r);
    ReducedPoint p;
    p.rep = rotate(b, r, beta);
    p.H = ch.H;
    p.chart_id = ch.id;
    return p;
}

// ---- vertical / horizontal splitting -----------------------------------------

struct VerHor {
    GradedField ver;
    GradedField hor;
};

/// gamma-orthogonal splitting at q: ver = <v, E_hat> E_hat, hor = v - ver.
/// Undefined on the SO(2)-fixed stratum.
inline VerHor ver_hor(const BasisTable& b, const GradedField& q, const GradedField& v) {
    GradedField E = generator(b, q, 1.0);
    const double en = norm(b, E);
    if (!(en > 1e-14 * std::max(1.0, norm(b, q))))
        throw DegenerateGeneratorError("ver_hor: splitting undefined at an SO(2)-fixed point");
    GradedField e_hat = (1.0 / en) * E;
    const double a = inner_product(b, v, e_hat);
    VerHor out;
    out.ver = a * e_hat;
    out.ver.grade = v.grade;
    out.hor = v - out.ver;
    return out;
}

inline VerHor ver_hor(const BasisTable& b, const SliceChart& ch, const GradedField& v) {
    const double a = inner_product(b, v, ch.e_hat);
    VerHor out;
    out.ver = a * ch.e_hat;
    out.ver.grade = v.grade;
    out.hor = v - out.ver;
    return out;
}

/// Horizontal lift of a reduced tangent representative at the point's rep.
inline GradedField horizontal_lift(const BasisTable& b, const ReducedPoint& p, const GradedField& w) {
    return ver_hor(b, p.rep, w).hor;
}

// ---- canonical section (pi_H) --------------------------------------------------

struct PivotInfo {
    int m = 0, k = 0;
    cplx value{0.0, 0.0};
};

/// Lowest (|m|, k) lexicographic mode with m > 0 above the tolerance.
inline PivotInfo find_pivot(const BasisTable& b, const GradedField& u, double tol) {
    const double scale = norm(b, u);
    for (int m = 1; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k)
            if (std::abs(u.at(m, k)) > tol * scale) return {m, k, u.at(m, k)};
    return {};
}

/// Rotates u so the pivot coefficient has zero phase (real positive), using
/// the smallest non-negative rotation.  Realizes a global section of the
/// quotient by the residual rotations.
inline ReducedPoint canonicalize(const BasisTable& b, const GradedField& u,
                                 const SubgroupDescriptor& H, double tol = 1e-10) {
    check_same_basis(b, u, "canonicalize");
    ReducedPoint p;
    p.H = H;
    if (H.kind == SubgroupDescriptor::Kind::FullCircle) {
        p.rep = u;
        p.full_circle_fixed = true;  // the quotient point is the field itself
        return p;
    }
    PivotInfo piv = find_pivot(b, u, tol);
    if (piv.m == 0)
        throw UnstableChartError("canonicalize: no pivot coefficient above tolerance");
    double phi = std::arg(piv.value);  // want phi - m*alpha = 0 (mod 2 pi)
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    double alpha = phi / piv.m;
    const double period = 2.0 * std::numbers::pi / piv.m;
    if (alpha > period - 1e-13 || alpha < 1e-13) alpha = 0.0;  // idempotence snap
    p.rep = rotate(b, u, alpha);
    p.rep.at(piv.m, piv.k) = cplx{std::abs(p.rep.at(piv.m, piv.k)), 0.0};
    if (p.rep.real_field) p.rep.at(-piv.m, piv.k) = std::conj(p.rep.at(piv.m, piv.k));
    return p;
}

// ---- reduced metric and bracket -------------------------------------------------

/// gamma^H at the representative: <hor xi, hor eta>.
inline double reduced_metric(const BasisTable& b, const ReducedPoint& p, const GradedField& xi,
                             const GradedField& eta) {
    GradedField hx = ver_hor(b, p.rep, xi).hor;
    GradedField he = ver_hor(b, p.rep, eta).hor;
    return inner_product(b, hx, he);
}

/// [[xi, eta]]^H: lift horizontally, bracket upstairs, push back down
/// (horizontal part at the representative).  Antisymmetric; one grade lower.
inline GradedField reduced_bracket_vectors(const BasisTable& b, const ReducedPoint& p,
                                           const GradedField& xi, const GradedField& eta) {
    GradedField hx = ver_hor(b, p.rep, xi).hor;
    GradedField he = ver_hor(b, p.rep, eta).hor;
    GradedField br = jacobi_lie_bracket(b, hx, he);
    return ver_hor(b, p.rep, br).hor;
}

// ---- reduced point snapshots ---------------------------------------------------

inline std::string format_reduced_point(const ReducedPoint& p) {
    char line[96];
    std::snprintf(line, sizeof line, "# chart base=%016llx H=%s\n",
                  static_cast<unsigned long long>(p.chart_id), p.H.to_string().c_str());
    return std::string(line) + format_snapshot(p.rep);
}

inline ReducedPoint parse_reduced_point(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw FieldError("reduced point: empty input");
    ReducedPoint p;
    unsigned long long id = 0;
    char subgroup[32] = {0};
    if (std::sscanf(header.c_str(), "# chart base=%llx H=%31s", &id, subgroup) != 2)
        throw FieldError("reduced point: bad chart line '" + header + "'");
    p.chart_id = id;
    p.H = SubgroupDescriptor::parse(subgroup);
    p.rep = parse_snapshot(is);
    return p;
}

}  // namespace eulerdisc
