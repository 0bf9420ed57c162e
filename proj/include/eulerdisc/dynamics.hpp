#pragma once

// Observables with functional derivatives, the Lie-Poisson bracket, the Euler
// Hamiltonian vector field, explicit time integration of the Euler and
// reduced Euler equations, and conservation diagnostics.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eulerdisc/basis.hpp"
#include "eulerdisc/field.hpp"
#include "eulerdisc/group.hpp"
#include "eulerdisc/slice.hpp"
#include "eulerdisc/transforms.hpp"

namespace eulerdisc {

struct BlowupError : std::runtime_error {
    long step_index;
    BlowupError(long step, const std::string& what_)
        : std::runtime_error("blow-up at step " + std::to_string(step) + ": " + what_),
          step_index(step) {}
};

// ---- observables -----------------------------------------------------------------

/// Real-valued functional on field space with an exact derivative rule:
///   Linear(a):     f(u) = <a, u>,        df(u) = a
///   Quadratic(A):  f(u) = <u, A u> / 2,  df(u) = A u   (A mode-diagonal, real)
///   Energy:        A = identity
struct Observable {
    enum class Kind { Linear, Quadratic, Energy };
    Kind kind = Kind::Energy;
    GradedField a;                 // Linear
    std::vector<double> weights;   // Quadratic, indexed like coefficients

    static Observable linear(const GradedField& a_) {
        Observable f;
        f.kind = Kind::Linear;
        f.a = a_;
        return f;
    }
    static Observable quadratic(std::vector<double> w) {
        Observable f;
        f.kind = Kind::Quadratic;
        f.weights = std::move(w);
        return f;
    }
    static Observable energy() { return Observable{}; }

    double eval(const BasisTable& b, const GradedField& u) const {
        switch (kind) {
            case Kind::Linear: return inner_product(b, a, u);
            case Kind::Quadratic: return 0.5 * inner_product(b, u, apply_weights(b, u));
            case Kind::Energy: return 0.5 * inner_product(b, u, u);
        }
        return 0.0;
    }

    GradedField derivative(const BasisTable& b, const GradedField& u) const {
        switch (kind) {
            case Kind::Linear: return a;
            case Kind::Quadratic: return apply_weights(b, u);
            case Kind::Energy: return u;
        }
        return u;
    }

    GradedField apply_weights(const BasisTable& b, const GradedField& u) const {
        if (weights.size() != u.c.size())
            throw FieldError("Observable: weight vector does not match the basis");
        GradedField out = u;
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] *= weights[i];
        return out;
    }
};

/// {f,g}_+(u) = <u, [dg(u), df(u)]>.
inline double lie_poisson_bracket(const BasisTable& b, const Observable& f, const Observable& g,
                                  const GradedField& u) {
    GradedField df = f.derivative(b, u);
    GradedField dg = g.derivative(b, u);
    return inner_product(b, u, jacobi_lie_bracket(b, dg, df));
}

/// X_h(u) = -P_e( grad_{dh(u)} u + (grad dh(u))^T u ); for the energy the
/// transpose term is a pure gradient and X_h(u) = -P_e(grad_u u).
inline GradedField hamiltonian_vector_field(const BasisTable& b, const Observable& h,
                                            const GradedField& u) {
    GridField rhs;
    if (h.kind == Observable::Kind::Energy) {
        rhs = advect(b, u, u);
    } else {
        GradedField dh = h.derivative(b, u);
        rhs = advect(b, dh, u) + transpose_term(b, dh, u);
    }
    GradedField out = analyze(b, rhs, u.grade - 1.0);
    if (u.real_field) out.enforce_reality();
    for (auto& z : out.c) z = -z;
    return out;
}

// ---- time stepping -----------------------------------------------------------------

enum class Scheme { RK4, Midpoint };

inline Scheme parse_scheme(const std::string& s) {
    if (s == "rk4") return Scheme::RK4;
    if (s == "midpoint") return Scheme::Midpoint;
    throw std::invalid_argument("unknown scheme '" + s + "'");
}

namespace detail {

template <class Rhs>
GradedField explicit_step(const GradedField& u, double dt, Scheme scheme, Rhs&& rhs) {
    if (scheme == Scheme::Midpoint) {
        GradedField k1 = rhs(u);
        GradedField mid = u + (0.5 * dt) * k1;
        GradedField k2 = rhs(mid);
        GradedField out = u + dt * k2;
        out.grade = u.grade;
        return out;
    }
    GradedField k1 = rhs(u);
    GradedField k2 = rhs(u + (0.5 * dt) * k1);
    GradedField k3 = rhs(u + (0.5 * dt) * k2);
    GradedField k4 = rhs(u + dt * k3);
    GradedField out = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.grade = u.grade;
    return out;
}

}  // namespace detail

/// One explicit step of du/dt = -P_e(grad_u u).
inline GradedField step(const BasisTable& b, const GradedField& u, double dt,
                        Scheme scheme = Scheme::RK4) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
    GradedField out = detail::explicit_step(u, dt, scheme, [&](const GradedField& v) {
        return hamiltonian_vector_field(b, Observable::energy(), v);
    });
    if (!out.finite()) throw BlowupError(0, "non-finite state after step");
    return out;
}

// ---- diagnostics -------------------------------------------------------------------

struct DiagnosticsRecord {
    double energy = 0.0;            // <u,u>/2
    double enstrophy = 0.0;         // <w,w>/2 = sum lambda^2 |c|^2 / 2
    double angular_momentum = 0.0;  // <u, killing_field(1)>
    double div_residual = 0.0;      // max |div u| on the grid
    double defect_n2 = 0.0, defect_n3 = 0.0, defect_n4 = 0.0;
    double tail_fraction = 0.0;     // energy fraction in the outermost shell
};

inline DiagnosticsRecord diagnostics(const BasisTable& b, const GradedField& u) {
    DiagnosticsRecord d;
    d.energy = 0.5 * inner_product(b, u, u);
    double ens = 0.0, tail = 0.0, tot = 0.0;
    for (int m = -b.m_max; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            const double lam = b.lam(m, k);
            const double e = lam * std::norm(u.c[b.index(m, k)]);
            ens += lam * e;
            tot += e;
            if (std::abs(m) == b.m_max || k == b.k_max) tail += e;
        }
    d.enstrophy = 0.5 * ens;
    d.tail_fraction = (tot > 0.0) ? tail / tot : 0.0;
    d.angular_momentum = inner_product(b, u, killing_field(b, 1.0));
    d.div_residual = (tot > 0.0) ? divergence_max(b, u) : 0.0;
    if (tot > 0.0) {
        d.defect_n2 = symmetry_defect(b, u, 2);
        d.defect_n3 = symmetry_defect(b, u, 3);
        d.defect_n4 = symmetry_defect(b, u, 4);
    }
    return d;
}

// ---- trajectories ------------------------------------------------------------------

enum class RunStatus { Ok, Blowup, ChartFailure };

struct Trajectory {
    std::vector<double> times;
    std::vector<GradedField> states;
    std::vector<DiagnosticsRecord> diag;
    RunStatus status = RunStatus::Ok;
    long failure_step = -1;
    bool cfl_warning = false;
};

/// Integrates the Euler equations to t = T (last partial step shortened),
/// recording diagnostics at every accepted step.  Blow-up returns the partial
/// trajectory with status = Blowup.
inline Trajectory flow(const BasisTable& b, const GradedField& u0, double dt, double T,
                       Scheme scheme = Scheme::RK4, int record_every = 1) {
    if (!(dt > 0.0) || T < 0.0) throw std::invalid_argument("flow: need dt > 0, T >= 0");
    Trajectory tr;
    GradedField u = u0;
    double t = 0.0;
    tr.cfl_warning = dt * grid_max_abs(synthesize(b, u0)) > 0.5;
    tr.times.push_back(t);
    tr.states.push_back(u);
    tr.diag.push_back(diagnostics(b, u));
    long k = 0;
    const double t_end = T * (1.0 - 1e-15);
    while (t < t_end) {
        const double h = std::min(dt, T - t);
        try {
            u = step(b, u, h, scheme);
        } catch (const BlowupError&) {
            tr.status = RunStatus::Blowup;
            tr.failure_step = k + 1;
            return tr;
        }
        t += h;
        ++k;
        if (k % record_every == 0 || t >= t_end) {
            tr.times.push_back(t);
            tr.states.push_back(u);
            tr.diag.push_back(diagnostics(b, u));
        }
    }
    return tr;
}

// ---- reduced dynamics ---------------------------------------------------------------

/// X for the reduced Euler equations at omega, represented as the horizontal
/// tangent vector at the representative: hor( -P_e(grad_rep rep) ).
inline GradedField reduced_rhs(const BasisTable& b, const ReducedPoint& omega) {
    GradedField xh = hamiltonian_vector_field(b, Observable::energy(), omega.rep);
    return ver_hor(b, omega.rep, xh).hor;
}

enum class ReducedMode { Quotient, Chart };

struct ReducedTrajectory {
    std::vector<double> times;
    std::vector<ReducedPoint> points;
    std::vector<DiagnosticsRecord> diag;
    RunStatus status = RunStatus::Ok;
    long failure_step = -1;
};

/// Integrates the reduced Euler equations.  Quotient mode advances the
/// upstairs flow and canonicalizes each output; chart mode advances the
/// gauge-fixed horizontal field and re-canonicalizes every step.  The two
/// agree to integrator tolerance (the commuting diagram of the reduction).
inline ReducedTrajectory reduced_flow(const BasisTable& b, const SliceChart& ch,
                                      const ReducedPoint& omega0, double dt, double T,
                                      ReducedMode mode, Scheme scheme = Scheme::RK4,
                                      int record_every = 1) {
    if (!(dt > 0.0) || T < 0.0) throw std::invalid_argument("reduced_flow: need dt > 0, T >= 0");
    ReducedTrajectory tr;
    GradedField u = omega0.rep;
    double t = 0.0;
    auto record = [&](double tt, const GradedField& state) {
        ReducedPoint p = canonicalize(b, state, ch.H);
        p.chart_id = ch.id;
        tr.times.push_back(tt);
        tr.diag.push_back(diagnostics(b, p.rep));
        tr.points.push_back(std::move(p));
    };
    try {
        record(0.0, u);
    } catch (const UnstableChartError&) {
        tr.status = RunStatus::ChartFailure;
        tr.failure_step = 0;
        return tr;
    }
    long k = 0;
    const double t_end = T * (1.0 - 1e-15);
    while (t < t_end) {
        const double h = std::min(dt, T - t);
        try {
            if (mode == ReducedMode::Quotient) {
                u = step(b, u, h, scheme);
            } else {
                u = detail::explicit_step(u, h, scheme, [&](const GradedField& v) {
                    GradedField xh = hamiltonian_vector_field(b, Observable::energy(), v);
                    return ver_hor(b, v, xh).hor;
                });
                if (!u.finite()) throw BlowupError(k + 1, "non-finite state");
                u = canonicalize(b, u, ch.H).rep;
            }
        } catch (const BlowupError&) {
            tr.status = RunStatus::Blowup;
            tr.failure_step = k + 1;
            return tr;
        } catch (const UnstableChartError&) {
            tr.status = RunStatus::ChartFailure;
            tr.failure_step = k + 1;
            return tr;
        } catch (const DegenerateGeneratorError&) {
            tr.status = RunStatus::ChartFailure;
            tr.failure_step = k + 1;
            return tr;
        }
        t += h;
        ++k;
        if (k % record_every == 0 || t >= t_end) {
            try {
                record(t, u);
            } catch (const UnstableChartError&) {
                tr.status = RunStatus::ChartFailure;
                tr.failure_step = k;
                return tr;
            }
        }
    }
    return tr;
}

// ---- Poisson property of the flow ------------------------------------------------------

struct PoissonFlowReport {
    double t = 0.0;
    double lhs = 0.0;  // {f o F_t, g o F_t}_+(u0), pullback derivatives by FD
    double rhs = 0.0;  // {f, g}_+(F_t(u0))
    double abs_err = 0.0;
    double rel_err = 0.0;
};

namespace detail {

/// Riesz representers of u0 -> fn_i(F_t(u0)) by central finite differences
/// along re-integrations, one real direction per independent mode component;
/// all functionals share the same re-integrations.
inline std::vector<GradedField> pullback_derivatives_fd(
    const BasisTable& b, const GradedField& u0, double t, double dt, Scheme scheme,
    const std::vector<std::function<double(const GradedField&)>>& fns, double fd_eps) {
    const double scale = std::max(1.0, norm(b, u0));
    const double eps = fd_eps * scale;
    auto evolve_eval = [&](const GradedField& v) {
        std::vector<double> vals(fns.size());
        if (t <= 0.0) {
            for (std::size_t i = 0; i < fns.size(); ++i) vals[i] = fns[i](v);
            return vals;
        }
        Trajectory tr = flow(b, v, dt, t, scheme, 1 << 30);
        if (tr.status != RunStatus::Ok) throw BlowupError(tr.failure_step, "inside FD pullback");
        for (std::size_t i = 0; i < fns.size(); ++i) vals[i] = fns[i](tr.states.back());
        return vals;
    };
    std::vector<GradedField> reps(fns.size(), GradedField(b.m_max, b.k_max, u0.grade));
    for (int m = 0; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            const double lam = b.lam(m, k);
            GradedField dp = u0, dm = u0;
            dp.at(m, k) += eps;
            dm.at(m, k) -= eps;
            if (m > 0) {
                dp.at(-m, k) += eps;
                dm.at(-m, k) -= eps;
            }
            const auto fp = evolve_eval(dp);
            const auto fm = evolve_eval(dm);
            std::vector<double> der_im(fns.size(), 0.0);
            if (m > 0) {
                GradedField ip = u0, im_ = u0;
                ip.at(m, k) += cplx{0.0, eps};
                ip.at(-m, k) -= cplx{0.0, eps};
                im_.at(m, k) -= cplx{0.0, eps};
                im_.at(-m, k) += cplx{0.0, eps};
                const auto gp = evolve_eval(ip);
                const auto gm = evolve_eval(im_);
                for (std::size_t i = 0; i < fns.size(); ++i)
                    der_im[i] = (gp[i] - gm[i]) / (2.0 * eps);
            }
            for (std::size_t i = 0; i < fns.size(); ++i) {
                const double der_re = (fp[i] - fm[i]) / (2.0 * eps);
                if (m == 0) {
                    reps[i].at(0, k) = cplx{der_re / lam, 0.0};
                } else {
                    reps[i].at(m, k) = cplx{der_re, der_im[i]} / (2.0 * lam);
                    reps[i].at(-m, k) = std::conj(reps[i].at(m, k));
                }
            }
        }
    for (auto& r : reps) r.real_field = true;
    return reps;
}

}  // namespace detail

/// Checks {f o F_t, g o F_t}_+(u0) = ({f,g}_+ o F_t)(u0); the report carries
/// both sides and their discrepancy (failures are data, not errors).
inline PoissonFlowReport poisson_flow_check(const BasisTable& b, const Observable& f,
                                            const Observable& g, const GradedField& u0, double t,
                                            double dt = 1e-3, Scheme scheme = Scheme::RK4,
                                            double fd_eps = 1e-5) {
    PoissonFlowReport rep;
    rep.t = t;
    GradedField ut = u0;
    if (t > 0.0) {
        Trajectory tr = flow(b, u0, dt, t, scheme, 1 << 30);
        if (tr.status != RunStatus::Ok) throw BlowupError(tr.failure_step, "poisson_flow_check");
        ut = tr.states.back();
    }
    rep.rhs = lie_poisson_bracket(b, f, g, ut);

    GradedField df, dg;
    if (t > 0.0) {
        auto reps = detail::pullback_derivatives_fd(
            b, u0, t, dt, scheme,
            {[&](const GradedField& v) { return f.eval(b, v); },
             [&](const GradedField& v) { return g.eval(b, v); }},
            fd_eps);
        df = std::move(reps[0]);
        dg = std::move(reps[1]);
    } else {
        df = f.derivative(b, u0);
        dg = g.derivative(b, u0);
    }
    rep.lhs = inner_product(b, u0, jacobi_lie_bracket(b, dg, df));
    rep.abs_err = std::abs(rep.lhs - rep.rhs);
    const double denom = std::max({std::abs(rep.lhs), std::abs(rep.rhs), 1e-300});
    rep.rel_err = rep.abs_err / denom;
    return rep;
}

}  // namespace eulerdisc
