#pragma once

// Executable invariant suite behind the `check` subcommand: every named
// module invariant becomes a pass/fail record with its measured value,
// tolerance, and the offending identifiers on failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "eulerdisc/basis.hpp"
#include "eulerdisc/config.hpp"
#include "eulerdisc/dynamics.hpp"
#include "eulerdisc/field.hpp"
#include "eulerdisc/group.hpp"
#include "eulerdisc/presets.hpp"
#include "eulerdisc/slice.hpp"
#include "eulerdisc/transforms.hpp"

namespace eulerdisc {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline void add(std::vector<CheckResult>& out, const std::string& name, double measured, double tol,
                const std::string& detail = "") {
    out.push_back({name, measured, tol, measured <= tol, detail});
}

inline GridField polynomial_grid_field(const BasisTable& b, DeterministicNormal& rng,
                                       double rot = 0.0) {
    // Closed-form polynomial vector field, optionally evaluated as l_rot(w);
    // rotations of it are exact pointwise, which makes commutation checks honest.
    double cx[3][3], cy[3][3];
    for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) {
            cx[a][c] = rng.normal();
            cy[a][c] = rng.normal();
        }
    GridField g(b.n_r(), b.n_theta);
    const double cr = std::cos(rot), sr = std::sin(rot);
    for (int i = 0; i < b.n_r(); ++i)
        for (int j = 0; j < b.n_theta; ++j) {
            const double x0 = b.r[static_cast<std::size_t>(i)] * b.cos_t[static_cast<std::size_t>(j)];
            const double y0 = b.r[static_cast<std::size_t>(i)] * b.sin_t[static_cast<std::size_t>(j)];
            // pull back the point, evaluate, push the vector forward
            const double x = cr * x0 + sr * y0;
            const double y = -sr * x0 + cr * y0;
            double wx = 0.0, wy = 0.0, xa = 1.0;
            for (int a = 0; a < 3; ++a) {
                double yc = 1.0;
                for (int c = 0; c < 3; ++c) {
                    wx += cx[a][c] * xa * yc;
                    wy += cy[a][c] * xa * yc;
                    yc *= y;
                }
                xa *= x;
            }
            g.ux[g.at(i, j)] = cr * wx - sr * wy;
            g.uy[g.at(i, j)] = sr * wx + cr * wy;
        }
    return g;
}

}  // namespace detail

// ---- selector: basis ---------------------------------------------------------------

inline std::vector<CheckResult> run_basis_checks(const BasisTable& b) {
    std::vector<CheckResult> out;

    double worst = 0.0;
    std::string worst_id;
    for (int m = 0; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            const double res = std::abs(bessel_j(m, b.zeros[b.mk(m, k)]));
            if (res > worst) {
                worst = res;
                worst_id = "(m=" + std::to_string(m) + ",k=" + std::to_string(k) + ")";
            }
        }
    detail::add(out, "basis.zero_residual", worst, 1e-12, worst_id);

    double order_defect = 0.0;
    std::string order_id;
    for (int m = 0; m <= b.m_max; ++m)
        for (int k = 1; k < b.k_max; ++k)
            if (b.zeros[b.mk(m, k + 1)] <= b.zeros[b.mk(m, k)]) {
                order_defect = 1.0;
                order_id = "(m=" + std::to_string(m) + ",k=" + std::to_string(k) + ")";
            }
    detail::add(out, "basis.zeros_increasing", order_defect, 0.0, order_id);

    // Orthonormality through the full transform pair, worst over all modes.
    double ortho = 0.0;
    std::string ortho_id;
    for (int m = -b.m_max; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            GradedField e(b.m_max, b.k_max, 1.0);
            e.real_field = false;
            e.at(m, k) = cplx{1.0, 0.0};
            GradedField back = analyze(b, synthesize(b, e), 1.0);
            double err = 0.0;
            for (std::size_t q = 0; q < back.c.size(); ++q)
                err = std::max(err, std::abs(back.c[q] - e.c[q]));
            if (err > ortho) {
                ortho = err;
                ortho_id = "(m=" + std::to_string(m) + ",k=" + std::to_string(k) + ")";
            }
        }
    detail::add(out, "basis.orthonormality_roundtrip", ortho, 1e-10, ortho_id);

    GradedField u = make_random(b, 11, 0.4, 2.0);
    GradedField rt = analyze(b, synthesize(b, u), 2.0);
    double rterr = 0.0;
    for (std::size_t q = 0; q < u.c.size(); ++q) rterr = std::max(rterr, std::abs(rt.c[q] - u.c[q]));
    detail::add(out, "basis.random_roundtrip", rterr, 1e-10);

    GradedField s0 = make_random(b, 12, 0.5, 1.0);
    detail::add(out, "basis.sobolev_s0_matches_l2",
                std::abs(sobolev_norm(b, s0, 0.0) - norm(b, s0)) / std::max(1e-300, norm(b, s0)),
                1e-12);

    // Leray projector behavior.
    GridField range = synthesize(b, u);
    LerayParts pr = leray_project(b, range);
    detail::add(out, "leray.fixes_range", grid_norm(b, pr.grad_part) / std::max(1e-300, grid_norm(b, range)),
                1e-10);

    GridField grad(b.n_r(), b.n_theta);  // grad(r^2 - 1) = (2x, 2y)
    for (int i = 0; i < b.n_r(); ++i)
        for (int j = 0; j < b.n_theta; ++j) {
            grad.ux[grad.at(i, j)] = 2.0 * b.r[static_cast<std::size_t>(i)] * b.cos_t[static_cast<std::size_t>(j)];
            grad.uy[grad.at(i, j)] = 2.0 * b.r[static_cast<std::size_t>(i)] * b.sin_t[static_cast<std::size_t>(j)];
        }
    LerayParts pg = leray_project(b, grad);
    detail::add(out, "leray.kills_gradients", norm(b, pg.div_free) / std::max(1e-300, grid_norm(b, grad)),
                1e-10);

    DeterministicNormal rng(13);
    GridField w = detail::polynomial_grid_field(b, rng);
    LerayParts pw = leray_project(b, w);
    const double wn = grid_norm(b, w);
    detail::add(out, "leray.orthogonality",
                std::abs(grid_inner(b, synthesize(b, pw.div_free), pw.grad_part)) / (wn * wn), 1e-8);
    GradedField twice = analyze(b, synthesize(b, pw.div_free));
    double idem = 0.0;
    for (std::size_t q = 0; q < twice.c.size(); ++q)
        idem = std::max(idem, std::abs(twice.c[q] - pw.div_free.c[q]));
    detail::add(out, "leray.idempotent", idem, 1e-10);

    // Advection identities.
    GradedField au = make_random(b, 14, 0.6, 2.0), av = make_random(b, 15, 0.6, 2.0),
                aw = make_random(b, 16, 0.6, 2.0);
    const double skew = grid_inner(b, advect(b, au, av), synthesize(b, aw)) +
                        grid_inner(b, synthesize(b, av), advect(b, au, aw));
    const double scale = norm(b, au) * norm(b, av) * norm(b, aw);
    detail::add(out, "advect.skew_adjoint", std::abs(skew) / std::max(1e-300, scale), 1e-8);

    GradedField br1 = jacobi_lie_bracket(b, au, av);
    GradedField br2 = jacobi_lie_bracket(b, av, au);
    double anti = 0.0;
    for (std::size_t q = 0; q < br1.c.size(); ++q) anti = std::max(anti, std::abs(br1.c[q] + br2.c[q]));
    detail::add(out, "bracket.antisymmetry", anti / std::max(1e-300, norm(b, br1)), 1e-12);
    detail::add(out, "bracket.divergence_free", divergence_max(b, br1) / std::max(1e-300, norm(b, br1)),
                1e-8);
    detail::add(out, "bracket.grade_rule",
                std::abs(br1.grade - (std::min(au.grade, av.grade) - 1.0)), 0.0);
    return out;
}

// ---- selector: action --------------------------------------------------------------

inline std::vector<CheckResult> run_action_checks(const BasisTable& b) {
    std::vector<CheckResult> out;
    DeterministicNormal rng(21);

    GradedField u = make_random(b, 22, 0.5, 2.0), v = make_random(b, 23, 0.5, 2.0);
    GradedField id = rotate(b, u, 0.0) - u;
    double id_err = 0.0;
    for (const auto& z : id.c) id_err = std::max(id_err, std::abs(z));
    detail::add(out, "action.identity", id_err, 0.0);

    double comp = 0.0, iso = 0.0;
    for (int c = 0; c < 50; ++c) {
        const double a1 = 2.0 * std::numbers::pi * rng.uniform();
        const double a2 = 2.0 * std::numbers::pi * rng.uniform();
        GradedField d = rotate(b, rotate(b, u, a1), a2) - rotate(b, u, a1 + a2);
        for (const auto& z : d.c) comp = std::max(comp, std::abs(z));
        iso = std::max(iso, std::abs(inner_product(b, rotate(b, u, a1), rotate(b, v, a1)) -
                                     inner_product(b, u, v)) /
                                (norm(b, u) * norm(b, v)));
    }
    detail::add(out, "action.composition", comp, 1e-13);
    detail::add(out, "action.isometry", iso, 1e-12);

    double equi = 0.0;
    for (int c = 0; c < 5; ++c) {
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        GradedField lhs = jacobi_lie_bracket(b, rotate(b, u, a), rotate(b, v, a));
        GradedField rhs = rotate(b, jacobi_lie_bracket(b, u, v), a);
        equi = std::max(equi, norm(b, lhs - rhs) / (norm(b, u) * norm(b, v)));
    }
    detail::add(out, "action.bracket_equivariance", equi, 1e-8);

    double comm = 0.0;
    for (int c = 0; c < 5; ++c) {
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        DeterministicNormal frng(100 + static_cast<std::uint64_t>(c));
        GridField w = detail::polynomial_grid_field(b, frng, 0.0);
        DeterministicNormal frng2(100 + static_cast<std::uint64_t>(c));
        GridField lw = detail::polynomial_grid_field(b, frng2, a);  // l_a(w) exactly
        GradedField p_lw = leray_project(b, lw).div_free;
        GradedField l_pw = rotate(b, leray_project(b, w).div_free, a);
        comm = std::max(comm, norm(b, p_lw - l_pw) / std::max(1e-300, grid_norm(b, w)));
    }
    detail::add(out, "action.projector_commutation", comm, 1e-8);

    // classify against a brute-force rotation scan
    std::string bad;
    for (int c = 0; c < 8 && bad.empty(); ++c) {
        GradedField f(b.m_max, b.k_max, 2.0);
        const int m1 = 1 + static_cast<int>(rng.uniform() * b.m_max) % b.m_max;
        const int m2 = 1 + static_cast<int>(rng.uniform() * b.m_max) % b.m_max;
        f.at(m1, 1) = cplx{1.0, 0.3};
        f.at(m2, 2) = cplx{0.4, -0.2};
        f.enforce_reality();
        SubgroupDescriptor cls = classify_isotropy(b, f);
        for (int n = 1; n <= b.m_max; ++n) {
            const bool fixed = symmetry_defect(b, f, n) < 1e-10;
            const bool claimed = (cls.kind == SubgroupDescriptor::Kind::FullCircle) ||
                                 (cls.kind == SubgroupDescriptor::Kind::Cyclic && cls.n % n == 0) ||
                                 (n == 1);
            if (fixed != claimed)
                bad = "case " + std::to_string(c) + " n=" + std::to_string(n) + " modes(" +
                      std::to_string(m1) + "," + std::to_string(m2) + ")";
        }
    }
    detail::add(out, "action.classify_matches_scan", bad.empty() ? 0.0 : 1.0, 0.0, bad);

    detail::add(out, "action.killing_isotropy",
                classify_isotropy(b, killing_field(b, 1.0)) == SubgroupDescriptor::full_circle() ? 0.0
                                                                                                 : 1.0,
                0.0);

    GradedField single(b.m_max, b.k_max, 2.0);
    if (b.m_max >= 3) {
        single.at(3, 1) = cplx{1.0, 0.0};
        single.enforce_reality();
        detail::add(out, "action.defect_closed_form", std::abs(symmetry_defect(b, single, 2) - 2.0),
                    1e-12);
    }

    // generator against the bracket with the truncated Killing field.  The
    // Killing tail aliases onto the outermost radial shell, so this runs at a
    // refined radial truncation and compares the well-resolved interior.
    {
        BasisTable fine = build_basis(std::min(b.m_max, 4), std::max(b.k_max, 24));
        GradedField smooth = make_random(fine, 24, 1.0, 2.0);
        for (int m = -fine.m_max; m <= fine.m_max; ++m)
            for (int k = 5; k <= fine.k_max; ++k) smooth.at(m, k) = cplx{0.0, 0.0};
        GradedField gen = generator(fine, smooth, 1.0);
        GradedField brk = jacobi_lie_bracket(fine, smooth, killing_field(fine, 1.0));
        double num = 0.0, den = 0.0;
        for (int m = -fine.m_max; m <= fine.m_max; ++m)
            for (int k = 1; k <= 4; ++k) {
                num += fine.lam(m, k) * std::norm(brk.at(m, k) - gen.at(m, k));
                den += fine.lam(m, k) * std::norm(gen.at(m, k));
            }
        detail::add(out, "action.generator_vs_bracket", std::sqrt(num / std::max(den, 1e-300)),
                    1e-6, "interior modes at K=24");
    }

    GradedField c1u = make_random(b, 25, 0.8, 2.0);
    C1Report rep = check_c1_hypothesis(b, c1u, 2.0, {1e-2, 1e-3, 1e-4, 1e-5});
    detail::add(out, "action.c1_order", std::abs(rep.fitted_order - 1.0), 0.1);
    return out;
}

// ---- selector: slice ---------------------------------------------------------------

inline std::vector<CheckResult> run_slice_checks(const BasisTable& b) {
    std::vector<CheckResult> out;
    DeterministicNormal rng(31);

    GradedField q = make_zn_symmetric(b, 2, 32, 2.0);
    SliceChart ch = make_slice_chart(b, q);

    detail::add(out, "slice.base_horizontal", std::abs(inner_product(b, q, ch.e_hat)) / norm(b, q),
                1e-12);
    detail::add(out, "slice.s_map_at_base", std::abs(s_map(b, ch, 0.0, q)), 1e-12);
    detail::add(out, "slice.gram_positive",
                (s_map_derivative(b, ch, 0.0, q) > 0.0) ? 0.0 : 1.0, 0.0,
                "slope=" + std::to_string(s_map_derivative(b, ch, 0.0, q)));

    double beta_err = 0.0;
    for (int c = 0; c < 10; ++c) {
        const double a0 = 0.6 * (rng.uniform() - 0.5);
        beta_err = std::max(beta_err, std::abs(solve_beta(b, ch, rotate(b, q, a0)) + a0));
    }
    detail::add(out, "slice.beta_recovers_rotation", beta_err, 1e-10);

    GradedField pert = make_zn_symmetric(b, 2, 33, 2.0);
    GradedField r = q + 0.05 * ver_hor(b, q, pert).hor;
    GradedField rep0 = chart_B(b, ch, r).rep;
    double orbit_inv = 0.0, inversion = 0.0;
    for (int c = 0; c < 10; ++c) {
        const double a = 0.5 * (rng.uniform() - 0.5);
        GradedField moved = rotate(b, r, a);
        orbit_inv = std::max(orbit_inv, norm(b, chart_B(b, ch, moved).rep - rep0));
        const double beta = solve_beta(b, ch, moved);
        inversion = std::max(inversion,
                             norm(b, rotate(b, rotate(b, moved, beta), -beta) - moved));
    }
    detail::add(out, "slice.chart_orbit_invariance", orbit_inv, 1e-10);
    detail::add(out, "slice.chart_inversion", inversion, 1e-10);

    double split_exact = 0.0, split_orth = 0.0, split_pyth = 0.0;
    for (int c = 0; c < 20; ++c) {
        GradedField vtan = make_random(b, 40 + static_cast<std::uint64_t>(c), 0.5, 1.0);
        VerHor vh = ver_hor(b, q, vtan);
        split_exact = std::max(split_exact, norm(b, vh.ver + vh.hor - vtan));
        split_orth = std::max(split_orth, std::abs(inner_product(b, vh.ver, vh.hor)) /
                                              std::max(1e-300, norm(b, vtan) * norm(b, vtan)));
        split_pyth = std::max(split_pyth,
                              std::abs(norm(b, vtan) * norm(b, vtan) -
                                       (norm(b, vh.ver) * norm(b, vh.ver) +
                                        norm(b, vh.hor) * norm(b, vh.hor))) /
                                  std::max(1e-300, norm(b, vtan) * norm(b, vtan)));
    }
    detail::add(out, "slice.verhor_exact", split_exact, 1e-12);
    detail::add(out, "slice.verhor_orthogonal", split_orth, 1e-12);
    detail::add(out, "slice.verhor_pythagoras", split_pyth, 1e-12);

    double section = 0.0;
    ReducedPoint can0 = canonicalize(b, q, ch.H);
    for (int c = 0; c < 12; ++c) {
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        section = std::max(section, norm(b, canonicalize(b, rotate(b, q, a), ch.H).rep - can0.rep));
    }
    detail::add(out, "slice.canonicalize_section", section / norm(b, q), 1e-12);
    detail::add(out, "slice.canonicalize_idempotent",
                norm(b, canonicalize(b, can0.rep, ch.H).rep - can0.rep) / norm(b, q), 1e-13);

    // representative independence of the reduced metric
    GradedField xi = make_zn_symmetric(b, 2, 34, 1.0), eta = make_zn_symmetric(b, 2, 35, 1.0);
    ReducedPoint p = canonicalize(b, q, ch.H);
    const double g0 = reduced_metric(b, p, xi, eta);
    double metric_equiv = 0.0;
    for (int c = 0; c < 6; ++c) {
        const double a = 2.0 * std::numbers::pi * rng.uniform();
        ReducedPoint pr;
        pr.rep = rotate(b, p.rep, a);
        pr.H = ch.H;
        const double ga = reduced_metric(b, pr, rotate(b, xi, a), rotate(b, eta, a));
        metric_equiv = std::max(metric_equiv, std::abs(ga - g0) / std::max(1e-300, std::abs(g0)));
    }
    detail::add(out, "slice.reduced_metric_equivariance", metric_equiv, 1e-10);

    GradedField rb1 = reduced_bracket_vectors(b, p, xi, eta);
    GradedField rb2 = reduced_bracket_vectors(b, p, eta, xi);
    detail::add(out, "slice.reduced_bracket_antisymmetry",
                norm(b, rb1 + rb2) / std::max(1e-300, norm(b, rb1)), 1e-12);

    // two-path consistency: pushdown of the upstairs bracket of the lifts
    GradedField up = jacobi_lie_bracket(b, ver_hor(b, p.rep, xi).hor, ver_hor(b, p.rep, eta).hor);
    detail::add(out, "slice.reduced_bracket_two_path",
                norm(b, rb1 - ver_hor(b, p.rep, up).hor) / std::max(1e-300, norm(b, rb1)), 1e-8);
    return out;
}

// ---- selector: bracket --------------------------------------------------------------

inline std::vector<CheckResult> run_bracket_checks(const BasisTable& b) {
    std::vector<CheckResult> out;
    DeterministicNormal rng(51);

    GradedField u = make_random(b, 52, 0.7, 3.0);
    std::vector<double> wts(u.c.size());
    for (int m = 0; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            const double w = std::exp(-0.3 * (m + k)) * (1.0 + rng.uniform());
            wts[b.index(m, k)] = w;
            wts[b.index(-m, k)] = w;
        }
    Observable f = Observable::quadratic(wts);
    Observable h = Observable::energy();
    GradedField a = make_random(b, 53, 0.8, 3.0);
    Observable g = Observable::linear(a);

    // functional-derivative soundness by central differences
    double fd_err = 0.0;
    for (int c = 0; c < 5; ++c) {
        GradedField dir = make_random(b, 60 + static_cast<std::uint64_t>(c), 0.6, 3.0);
        const double eps = 1e-4;
        for (const Observable* ob : {&f, &g, &h}) {
            const double fd =
                (ob->eval(b, u + eps * dir) - ob->eval(b, u - eps * dir)) / (2.0 * eps);
            const double exact = inner_product(b, ob->derivative(b, u), dir);
            fd_err = std::max(fd_err, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
        }
    }
    detail::add(out, "observable.derivative_fd", fd_err, 1e-8);

    const double anti = std::abs(lie_poisson_bracket(b, f, g, u) + lie_poisson_bracket(b, g, f, u));
    detail::add(out, "lp.antisymmetry", anti / std::max(1.0, std::abs(lie_poisson_bracket(b, f, g, u))),
                1e-12);

    GradedField xh = hamiltonian_vector_field(b, h, u);
    const double pair_lhs = inner_product(b, f.derivative(b, u), xh);
    const double pair_rhs = lie_poisson_bracket(b, f, h, u);
    const double pair_scale = std::max({std::abs(pair_lhs), std::abs(pair_rhs), norm(b, u)});
    detail::add(out, "lp.xh_pairing_energy", std::abs(pair_lhs - pair_rhs) / pair_scale, 1e-8);

    Observable h2 = Observable::quadratic(wts);
    GradedField xh2 = hamiltonian_vector_field(b, h2, u);
    const double p2l = inner_product(b, g.derivative(b, u), xh2);
    const double p2r = lie_poisson_bracket(b, g, h2, u);
    detail::add(out, "lp.xh_pairing_quadratic",
                std::abs(p2l - p2r) / std::max({std::abs(p2l), std::abs(p2r), norm(b, u)}), 1e-8);

    // Leibniz: delta(fg) = f dg + g df, bracket bilinear in the slot
    {
        const double fu = f.eval(b, u), gu = g.eval(b, u);
        GradedField dprod = fu * g.derivative(b, u) + gu * f.derivative(b, u);
        double fd = 0.0;
        GradedField dir = make_random(b, 66, 0.6, 3.0);
        const double eps = 1e-4;
        const double prod_p = f.eval(b, u + eps * dir) * g.eval(b, u + eps * dir);
        const double prod_m = f.eval(b, u - eps * dir) * g.eval(b, u - eps * dir);
        fd = std::abs((prod_p - prod_m) / (2.0 * eps) - inner_product(b, dprod, dir));
        detail::add(out, "lp.leibniz_product_rule", fd / std::max(1.0, std::abs(fu * gu)), 1e-6);

        const double lhs = inner_product(b, u, jacobi_lie_bracket(b, h.derivative(b, u), dprod));
        const double rhs = fu * lie_poisson_bracket(b, g, h, u) + gu * lie_poisson_bracket(b, f, h, u);
        detail::add(out, "lp.leibniz_bracket",
                    std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), 1e-10);
    }

    // Jacobi for linear observables: discretization-level only (no claim is
    // made beyond well-resolved fields, so the inputs live on low modes and
    // the radial truncation is refined enough to hold their bracket tails).
    {
        BasisTable fine = build_basis(std::max(2, std::min(b.m_max, 4)), std::max(b.k_max, 12));
        auto lowfield = [&](std::uint64_t seed) {
            GradedField v = make_random(fine, seed, 0.5, 3.0);
            for (int m = -fine.m_max; m <= fine.m_max; ++m)
                for (int k = 1; k <= fine.k_max; ++k)
                    if (std::abs(m) > 2 || k > 2) v.at(m, k) = cplx{0.0, 0.0};
            return v;
        };
        GradedField uj = lowfield(90), a1 = lowfield(91), a2 = lowfield(92), a3 = lowfield(93);
        Observable l1 = Observable::linear(a1), l2 = Observable::linear(a2),
                   l3 = Observable::linear(a3);
        auto lp_lin = [&](const Observable& x, const Observable& y) {
            return Observable::linear(jacobi_lie_bracket(fine, y.a, x.a));
        };
        const double jac = lie_poisson_bracket(fine, l1, lp_lin(l2, l3), uj) +
                           lie_poisson_bracket(fine, l2, lp_lin(l3, l1), uj) +
                           lie_poisson_bracket(fine, l3, lp_lin(l1, l2), uj);
        const double jscale = norm(fine, uj) * norm(fine, a1) * norm(fine, a2) * norm(fine, a3);
        detail::add(out, "lp.jacobi_linear", std::abs(jac) / std::max(1e-300, jscale), 1e-6,
                    "low modes at K>=12");
    }

    // i_H restriction criterion: both sides are the same construction-exact formula
    {
        GradedField uh = make_zn_symmetric(b, 2, 70, 3.0);
        SubgroupDescriptor H = SubgroupDescriptor::cyclic(2);
        GradedField df = fixed_point_project(b, f.derivative(b, uh), H);
        GradedField dg = fixed_point_project(b, h2.derivative(b, uh), H);
        const double restricted = inner_product(b, uh, jacobi_lie_bracket(b, dg, df));
        const double ambient = lie_poisson_bracket(b, f, h2, uh);
        detail::add(out, "lp.i_H_restriction",
                    std::abs(restricted - ambient) / std::max(1.0, std::abs(ambient)), 1e-12);
    }

    // pi_H projection criterion via horizontal lifts at the canonical rep
    {
        GradedField uh = make_zn_symmetric(b, 2, 71, 3.0);
        ReducedPoint p = canonicalize(b, uh, SubgroupDescriptor::cyclic(2));
        Observable psi = Observable::quadratic(wts);
        Observable phi = Observable::energy();
        const double upstairs = lie_poisson_bracket(b, phi, psi, uh);
        GradedField dphi = ver_hor(b, p.rep, phi.derivative(b, p.rep)).hor;
        GradedField dpsi = ver_hor(b, p.rep, psi.derivative(b, p.rep)).hor;
        GradedField red = ver_hor(b, p.rep, jacobi_lie_bracket(b, dpsi, dphi)).hor;
        const double downstairs = reduced_metric(b, p, p.rep, red);
        detail::add(out, "lp.pi_H_projection",
                    std::abs(upstairs - downstairs) / std::max(1.0, std::abs(upstairs)), 1e-6);
    }
    return out;
}

// ---- selector: flow -----------------------------------------------------------------

inline std::vector<CheckResult> run_flow_checks(const BasisTable& b) {
    std::vector<CheckResult> out;
    const double dt = 1e-3, T = 0.2;

    GradedField z = zero_field(b, 2.0);
    detail::add(out, "flow.zero_fixed_point", norm(b, step(b, z, dt)), 0.0);

    GradedField swirl = make_swirl(b, 2.0);
    GradedField xh = hamiltonian_vector_field(b, Observable::energy(), swirl);
    detail::add(out, "flow.steady_swirl_rhs", norm(b, xh) / (norm(b, swirl) * norm(b, swirl)), 1e-8);
    Trajectory st = flow(b, swirl, dt, T);
    detail::add(out, "flow.steady_swirl_motion", norm(b, st.states.back() - swirl) / norm(b, swirl),
                1e-7);

    GradedField u0 = make_random(b, 81, 0.8, 2.0);
    Trajectory tr = flow(b, u0, dt, T);
    detail::add(out, "flow.energy_drift",
                std::abs(tr.diag.back().energy - tr.diag.front().energy) /
                    std::max(1e-300, tr.diag.front().energy),
                1e-9);

    GradedField z2 = make_zn_symmetric(b, 2, 82, 2.0);
    Trajectory t2 = flow(b, z2, dt, T);
    double worst_defect = 0.0;
    for (const auto& d : t2.diag) worst_defect = std::max(worst_defect, d.defect_n2);
    detail::add(out, "flow.isotropy_conservation", worst_defect, 1e-10);

    const double alpha = 0.7;
    Trajectory ta = flow(b, rotate(b, u0, alpha), dt, T);
    detail::add(out, "flow.equivariance",
                norm(b, ta.states.back() - rotate(b, tr.states.back(), alpha)) / norm(b, u0), 1e-6);

    SliceChart ch = make_slice_chart(b, z2);
    ReducedPoint om0 = canonicalize(b, z2, ch.H);
    ReducedTrajectory qa = reduced_flow(b, ch, om0, dt, T, ReducedMode::Quotient);
    ReducedTrajectory qb = reduced_flow(b, ch, om0, dt, T, ReducedMode::Chart);
    double sup = 0.0;
    for (std::size_t i = 0; i < std::min(qa.points.size(), qb.points.size()); ++i)
        sup = std::max(sup, norm(b, qa.points[i].rep - qb.points[i].rep));
    detail::add(out, "flow.reduced_modes_agree", sup, 1e-6);

    double hdrift = 0.0;
    for (const auto& d : qb.diag)
        hdrift = std::max(hdrift, std::abs(d.energy - qb.diag.front().energy) /
                                      std::max(1e-300, qb.diag.front().energy));
    detail::add(out, "flow.reduced_energy_constant", hdrift, 1e-8);

    Observable f = Observable::energy();
    GradedField a = make_random(b, 83, 0.8, 2.0);
    Observable g = Observable::linear(a);
    PoissonFlowReport pr = poisson_flow_check(b, f, g, u0, 0.0);
    detail::add(out, "flow.poisson_t0_exact", pr.abs_err, 1e-12);
    return out;
}

// ---- dispatch ------------------------------------------------------------------------

inline std::vector<CheckResult> run_check_suite(const std::string& selector, const BasisTable& b) {
    std::vector<CheckResult> out;
    auto append = [&](std::vector<CheckResult> v) {
        out.insert(out.end(), v.begin(), v.end());
    };
    if (selector == "all" || selector == "basis") append(run_basis_checks(b));
    if (selector == "all" || selector == "action") append(run_action_checks(b));
    if (selector == "all" || selector == "slice") append(run_slice_checks(b));
    if (selector == "all" || selector == "bracket") append(run_bracket_checks(b));
    if (selector == "all" || selector == "flow") append(run_flow_checks(b));
    if (out.empty()) throw std::invalid_argument("unknown check selector '" + selector + "'");
    return out;
}

inline std::vector<CheckResult> run_check_suite(const std::string& selector,
                                                const ExperimentConfig& cfg) {
    return run_check_suite(selector, build_basis(cfg.m_max, cfg.k_max, cfg.quad_order));
}

}  // namespace eulerdisc
