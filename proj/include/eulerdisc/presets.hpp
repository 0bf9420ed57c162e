#pragma once

// Named initial conditions and a deterministic random field source.  The
// normal sampler is hand-rolled (Box-Muller over mt19937_64 bits) so that
// identical seeds give bit-identical fields on every platform.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "eulerdisc/basis.hpp"
#include "eulerdisc/field.hpp"
#include "eulerdisc/group.hpp"

namespace eulerdisc {

class DeterministicNormal {
  public:
    explicit DeterministicNormal(std::uint64_t seed) : gen_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

  private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct ModeAmp {
    int m = 0, k = 1;
    double re = 0.0, im = 0.0;
};

inline GradedField make_single_mode(const BasisTable& b, const std::vector<ModeAmp>& modes,
                                    double grade) {
    GradedField u(b.m_max, b.k_max, grade);
    for (const auto& ma : modes) {
        if (std::abs(ma.m) > b.m_max || ma.k < 1 || ma.k > b.k_max)
            throw FieldError("single_mode preset: mode outside basis");
        u.at(ma.m, ma.k) += cplx{ma.re, ma.im};
    }
    u.enforce_reality();
    return u;
}

/// Azimuthal m = 0 swirl with a geometric radial spectrum.
inline GradedField make_swirl(const BasisTable& b, double grade, double amplitude = 1.0) {
    GradedField u(b.m_max, b.k_max, grade);
    for (int k = 1; k <= b.k_max; ++k)
        u.at(0, k) = cplx{amplitude * std::pow(0.5, k - 1) / std::sqrt(b.lam(0, k)), 0.0};
    u.real_field = true;
    return u;
}

/// Random real field with a smooth decaying spectrum on all modes.
inline GradedField make_random(const BasisTable& b, std::uint64_t seed, double decay, double grade,
                               double amplitude = 1.0) {
    DeterministicNormal rng(seed);
    GradedField u(b.m_max, b.k_max, grade);
    for (int m = 0; m <= b.m_max; ++m)
        for (int k = 1; k <= b.k_max; ++k) {
            const double env = amplitude * std::exp(-decay * (std::abs(m) + k - 1)) /
                               std::sqrt(b.lam(m, k));
            const double re = rng.normal() * env;
            const double im = (m == 0) ? 0.0 : rng.normal() * env;
            u.at(m, k) = cplx{re, im};
        }
    u.enforce_reality();
    return u;
}

/// Random field supported on angular modes that are multiples of n (exactly
/// Z_n-symmetric), with a guaranteed pivot at (n, 1).
inline GradedField make_zn_symmetric(const BasisTable& b, int n, std::uint64_t seed, double grade,
                                     double decay = 0.6, double amplitude = 1.0) {
    if (n < 2) throw std::invalid_argument("zn_symmetric preset: n >= 2");
    if (n > b.m_max) throw FieldError("zn_symmetric preset: n exceeds M_max");
    DeterministicNormal rng(seed);
    GradedField u(b.m_max, b.k_max, grade);
    for (int m = 0; m <= b.m_max; ++m) {
        if (m % n != 0) continue;
        for (int k = 1; k <= b.k_max; ++k) {
            const double env = amplitude * std::exp(-decay * (m + k - 1)) / std::sqrt(b.lam(m, k));
            const double re = rng.normal() * env;
            const double im = (m == 0) ? 0.0 : rng.normal() * env;
            u.at(m, k) = cplx{re, im};
        }
    }
    // keep the canonical pivot well away from the isotropy tolerance
    if (std::abs(u.at(n, 1)) < 0.1 * amplitude / std::sqrt(b.lam(n, 1)))
        u.at(n, 1) = cplx{0.2 * amplitude / std::sqrt(b.lam(n, 1)), 0.1 * amplitude / std::sqrt(b.lam(n, 1))};
    u.enforce_reality();
    return u;
}

}  // namespace eulerdisc
