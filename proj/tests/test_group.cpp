#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "eulerdisc/group.hpp"
#include "eulerdisc/presets.hpp"
#include "eulerdisc/transforms.hpp"
#include "oracles.hpp"

using namespace eulerdisc;

TEST_CASE("group elements compose mod 2 pi", "[group]") {
    GroupElement a(1.0), b(2.0 * std::numbers::pi + 0.5);
    REQUIRE(std::abs(b.angle - 0.5) < 1e-15);
    REQUIRE(std::abs(a.compose(a.inverse()).angle) < 1e-15);
}

TEST_CASE("subgroup serialization", "[group]") {
    REQUIRE(SubgroupDescriptor::parse("trivial") == SubgroupDescriptor::trivial());
    REQUIRE(SubgroupDescriptor::parse("cyclic:3") == SubgroupDescriptor::cyclic(3));
    REQUIRE(SubgroupDescriptor::parse("so2") == SubgroupDescriptor::full_circle());
    REQUIRE(SubgroupDescriptor::cyclic(5).to_string() == "cyclic:5");
    REQUIRE_THROWS(SubgroupDescriptor::parse("dihedral:2"));
    REQUIRE_THROWS(SubgroupDescriptor::cyclic(1));
}

TEST_CASE("rotation acts diagonally and isometrically", "[group]") {
    BasisTable b = build_basis(5, 4);
    GradedField u = make_random(b, 31, 0.5, 2.0), v = make_random(b, 32, 0.5, 2.0);

    SECTION("identity and composition") {
        GradedField r0 = rotate(b, u, 0.0);
        for (std::size_t q = 0; q < u.c.size(); ++q) REQUIRE(r0.c[q] == u.c[q]);
        GradedField rg = rotate(b, u, GroupElement(0.7));
        GradedField ra = rotate(b, u, 0.7);
        for (std::size_t q = 0; q < u.c.size(); ++q) REQUIRE(rg.c[q] == ra.c[q]);
        GradedField ab = rotate(b, rotate(b, u, 0.7), 0.9);
        GradedField apb = rotate(b, u, 1.6);
        double d = 0.0;
        for (std::size_t q = 0; q < u.c.size(); ++q) d = std::max(d, std::abs(ab.c[q] - apb.c[q]));
        REQUIRE(d < 1e-14);
    }

    SECTION("isometry of every Sobolev norm") {
        for (double a : {0.3, 1.7, 5.9}) {
            GradedField ra = rotate(b, u, a);
            REQUIRE(std::abs(inner_product(b, rotate(b, u, a), rotate(b, v, a)) -
                             inner_product(b, u, v)) < 1e-12 * norm(b, u) * norm(b, v));
            REQUIRE(std::abs(sobolev_norm(b, ra, 2.0) - sobolev_norm(b, u, 2.0)) <
                    1e-12 * sobolev_norm(b, u, 2.0));
            REQUIRE(ra.grade == u.grade);
        }
    }

    SECTION("single mode phase, checked against rotated point samples") {
        GradedField s(b.m_max, b.k_max, 1.0);
        s.real_field = false;
        s.at(2, 1) = cplx{1.0, 0.0};
        const double a = std::numbers::pi / 2.0;
        GradedField rs = rotate(b, s, a);
        REQUIRE(std::abs(rs.at(2, 1) - cplx{-1.0, 0.0}) < 1e-14);

        // l_a u(x) = R_a u(R_{-a} x), sampled via the independent evaluator
        const double r = 0.62, t = 1.1;
        auto [ox, oy] = oracles::eval_velocity(b, s, r, t - a);
        const double C = std::cos(a), S = std::sin(a);
        auto [mx, my] = oracles::eval_velocity(b, rs, r, t);
        REQUIRE(std::abs(mx - (C * ox - S * oy)) < 1e-12);
        REQUIRE(std::abs(my - (S * ox + C * oy)) < 1e-12);
    }
}

TEST_CASE("killing field", "[group]") {
    BasisTable b = build_basis(4, 8);

    REQUIRE(norm(b, killing_field(b, 0.0)) == 0.0);

    double resid = 0.0;
    GradedField z = killing_field(b, 1.0, &resid);
    for (int m = 1; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            REQUIRE(std::abs(z.at(m, k)) == 0.0);
            REQUIRE(std::abs(z.at(-m, k)) == 0.0);
        }
    REQUIRE(classify_isotropy(b, z) == SubgroupDescriptor::full_circle());

    // the analyzed coefficients match the L2 projection of (-y, x)
    GridField rig(b.n_r(), b.n_theta);
    for (int i = 0; i < b.n_r(); ++i)
        for (int j = 0; j < b.n_theta; ++j) {
            rig.ux[rig.at(i, j)] = -b.r[static_cast<std::size_t>(i)] * b.sin_t[static_cast<std::size_t>(j)];
            rig.uy[rig.at(i, j)] = b.r[static_cast<std::size_t>(i)] * b.cos_t[static_cast<std::size_t>(j)];
        }
    GradedField proj = analyze(b, rig);
    double d = 0.0;
    for (std::size_t q = 0; q < z.c.size(); ++q) d = std::max(d, std::abs(z.c[q] - proj.c[q]));
    REQUIRE(d < 1e-12);

    // truncation residual shrinks with radial resolution
    double resid_fine = 0.0;
    (void)killing_field(build_basis(4, 24), 1.0, &resid_fine);
    REQUIRE(resid_fine < resid);
    REQUIRE(resid < 0.05);
}

TEST_CASE("generator", "[group]") {
    BasisTable b = build_basis(5, 4);

    SECTION("rotationally invariant fields have vanishing generator") {
        GradedField sw = make_swirl(b, 2.0);
        REQUIRE(norm(b, generator(b, sw, 1.0)) == 0.0);
    }

    SECTION("single mode picks up -i m xi, against the finite-difference oracle") {
        GradedField s(b.m_max, b.k_max, 2.0);
        s.at(3, 1) = cplx{1.0, 0.0};
        s.enforce_reality();
        GradedField g = generator(b, s, 1.0);
        REQUIRE(std::abs(g.at(3, 1) - cplx{0.0, -3.0}) < 1e-14);
        REQUIRE(g.grade == s.grade - 1.0);

        double prev = -1.0;
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            GradedField fd = (1.0 / eps) * (rotate(b, s, eps) - s) - g;
            const double r = sobolev_norm(b, fd, 1.0);
            if (prev > 0.0) REQUIRE(r < 0.2 * prev);  // first-order convergence
            prev = r;
        }
    }

    SECTION("linear in xi") {
        GradedField u = make_random(b, 33, 0.5, 2.0);
        GradedField d = generator(b, u, 2.0) - 2.0 * generator(b, u, 1.0);
        REQUIRE(norm(b, d) < 1e-14);
    }

    SECTION("agrees with the bracket against the truncated Killing field") {
        // The Killing tail aliases onto the outermost radial shell, so the
        // cross-check compares the well-resolved interior at a refined radial
        // truncation.
        BasisTable fine = build_basis(4, 24);
        GradedField u = make_random(fine, 34, 1.0, 2.0);
        for (int m = -fine.m_max; m <= fine.m_max; ++m)
            for (int k = 5; k <= fine.k_max; ++k) u.at(m, k) = cplx{0.0, 0.0};
        GradedField gen = generator(fine, u, 1.0);
        GradedField brk = jacobi_lie_bracket(fine, u, killing_field(fine, 1.0));
        double num = 0.0, den = 0.0;
        for (int m = -fine.m_max; m <= fine.m_max; ++m)
            for (int k = 1; k <= 4; ++k) {
                num += fine.lam(m, k) * std::norm(brk.at(m, k) - gen.at(m, k));
                den += fine.lam(m, k) * std::norm(gen.at(m, k));
            }
        REQUIRE(std::sqrt(num / den) < 1e-6);
    }
}

TEST_CASE("isotropy classification", "[group]") {
    BasisTable b = build_basis(6, 3);

    GradedField a(b.m_max, b.k_max, 1.0);
    a.at(2, 1) = cplx{1.0, 0.0};
    a.at(4, 2) = cplx{0.5, 0.2};
    a.enforce_reality();
    REQUIRE(classify_isotropy(b, a) == SubgroupDescriptor::cyclic(2));

    GradedField t(b.m_max, b.k_max, 1.0);
    t.at(2, 1) = cplx{1.0, 0.0};
    t.at(3, 1) = cplx{0.4, 0.0};
    t.enforce_reality();
    REQUIRE(classify_isotropy(b, t) == SubgroupDescriptor::trivial());

    // consistency with the brute-force rotation scan
    for (const GradedField* f : {&a, &t}) {
        SubgroupDescriptor cls = classify_isotropy(b, *f);
        for (int n = 1; n <= b.m_max; ++n) {
            const bool fixed = symmetry_defect(b, *f, n) < 1e-10;
            const bool claimed =
                (n == 1) || (cls.kind == SubgroupDescriptor::Kind::Cyclic && cls.n % n == 0);
            REQUIRE(fixed == claimed);
        }
    }

    REQUIRE_THROWS_AS(classify_isotropy(b, a, -1.0), std::invalid_argument);
}

TEST_CASE("fixed point projection", "[group]") {
    BasisTable b = build_basis(6, 3);
    GradedField u = make_random(b, 35, 0.4, 2.0);

    GradedField pt = fixed_point_project(b, u, SubgroupDescriptor::trivial());
    for (std::size_t q = 0; q < u.c.size(); ++q) REQUIRE(pt.c[q] == u.c[q]);

    GradedField pf = fixed_point_project(b, u, SubgroupDescriptor::full_circle());
    for (int m = 1; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) REQUIRE(std::abs(pf.at(m, k)) == 0.0);
    REQUIRE(symmetry_defect(b, pf, 5) < 1e-15);

    SubgroupDescriptor z2 = SubgroupDescriptor::cyclic(2);
    GradedField p2 = fixed_point_project(b, u, z2);
    GradedField d = u - p2;
    // idempotent, self-adjoint, pythagorean
    REQUIRE(norm(b, fixed_point_project(b, p2, z2) - p2) == 0.0);
    REQUIRE(std::abs(inner_product(b, p2, d)) < 1e-12 * norm(b, u) * norm(b, u));
    REQUIRE(std::abs(norm(b, u) * norm(b, u) -
                     (norm(b, p2) * norm(b, p2) + norm(b, d) * norm(b, d))) <
            1e-12 * norm(b, u) * norm(b, u));
    REQUIRE(symmetry_defect(b, p2, 2) < 1e-15);
    GradedField v = make_random(b, 36, 0.4, 2.0);
    REQUIRE(std::abs(inner_product(b, fixed_point_project(b, u, z2), v) -
                     inner_product(b, u, fixed_point_project(b, v, z2))) <
            1e-12 * norm(b, u) * norm(b, v));
}

TEST_CASE("symmetry defect", "[group]") {
    BasisTable b = build_basis(4, 3);
    GradedField u = make_random(b, 37, 0.4, 2.0);
    REQUIRE(symmetry_defect(b, u, 1) < 1e-15);
    REQUIRE(symmetry_defect(b, make_swirl(b, 2.0), 7) < 1e-15);

    GradedField s(b.m_max, b.k_max, 1.0);
    s.at(3, 1) = cplx{0.4, 0.1};
    s.enforce_reality();
    REQUIRE(std::abs(symmetry_defect(b, s, 2) - 2.0) < 1e-12);  // |1 - e^{-3 pi i}| = 2
    REQUIRE_THROWS_AS(symmetry_defect(b, u, 0), std::invalid_argument);
}

TEST_CASE("c1 hypothesis report", "[group]") {
    BasisTable b = build_basis(5, 4);

    C1Report zr = check_c1_hypothesis(b, zero_field(b, 2.0), 2.0, {1e-2, 1e-3});
    for (double r : zr.residuals) REQUIRE(r == 0.0);

    GradedField s(b.m_max, b.k_max, 2.0);
    s.at(1, 1) = cplx{1.0, 0.0};
    s.enforce_reality();
    C1Report r1 = check_c1_hypothesis(b, s, 2.0, {1e-2, 1e-3, 1e-4, 1e-5});
    REQUIRE(r1.fitted_order > 0.9);
    REQUIRE(r1.fitted_order < 1.1);
    // leading constant: |m|^2/2 times the s-1 norm of the field
    const double expect = 0.5 * sobolev_norm(b, s, 1.0);
    REQUIRE(std::abs(r1.residuals[0] / 1e-2 - expect) < 0.01 * expect);

    GradedField u = make_random(b, 38, 0.8, 2.0);
    C1Report rm = check_c1_hypothesis(b, u, 2.0, {1e-2, 1e-3, 1e-4, 1e-5});
    REQUIRE(rm.fitted_order > 0.9);
    REQUIRE(rm.fitted_order < 1.1);
    REQUIRE_THROWS_AS(check_c1_hypothesis(b, u, 0.5, {1e-2}), std::invalid_argument);
}
