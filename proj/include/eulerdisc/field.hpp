#pragma once

// GradedField: spectral coefficients of a divergence-free velocity field,
// tagged with a Sobolev grade.  GridField: sampled Cartesian components on
// the quadrature grid (complex-valued so single non-real modes stage fine).

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eulerdisc/basis.hpp"

namespace eulerdisc {

struct FieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GradedField {
    int m_max = 0;
    int k_max = 0;
    double grade = 0.0;
    bool real_field = true;  // asserts c_{-m,k} = conj(c_{m,k})
    std::vector<cplx> c;

    GradedField() = default;
    GradedField(int m_max_, int k_max_, double grade_)
        : m_max(m_max_), k_max(k_max_), grade(grade_),
          c(static_cast<std::size_t>(2 * m_max_ + 1) * static_cast<std::size_t>(k_max_), cplx{0.0, 0.0}) {}

    std::size_t index(int m, int k) const {
        return static_cast<std::size_t>(m + m_max) * static_cast<std::size_t>(k_max) +
               static_cast<std::size_t>(k - 1);
    }
    cplx& at(int m, int k) { return c[index(m, k)]; }
    const cplx& at(int m, int k) const { return c[index(m, k)]; }

    GradedField with_grade(double s) const {
        GradedField out = *this;
        out.grade = s;
        return out;
    }

    double reality_defect() const {
        double d = 0.0;
        for (int m = 0; m <= m_max; ++m)
            for (int k = 1; k <= k_max; ++k)
                d = std::max(d, std::abs(at(-m, k) - std::conj(at(m, k))));
        return d;
    }

    // Folds c_{-m,k} = conj(c_{m,k}) in from the m >= 0 half.
    void enforce_reality() {
        for (int k = 1; k <= k_max; ++k) at(0, k) = cplx{at(0, k).real(), 0.0};
        for (int m = 1; m <= m_max; ++m)
            for (int k = 1; k <= k_max; ++k) at(-m, k) = std::conj(at(m, k));
        real_field = true;
    }

    bool finite() const {
        for (const auto& z : c)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }
};

inline GradedField zero_field(const BasisTable& b, double grade) {
    return GradedField(b.m_max, b.k_max, grade);
}

inline void check_same_basis(const BasisTable& b, const GradedField& u, const char* where) {
    if (u.m_max != b.m_max || u.k_max != b.k_max)
        throw FieldError(std::string(where) + ": field/basis mode-count mismatch");
}

// ---- linear coefficient algebra ------------------------------------------

inline GradedField operator+(const GradedField& a, const GradedField& b) {
    GradedField out = a;
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += b.c[i];
    out.real_field = a.real_field && b.real_field;
    out.grade = std::min(a.grade, b.grade);
    return out;
}

inline GradedField operator-(const GradedField& a, const GradedField& b) {
    GradedField out = a;
    for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] -= b.c[i];
    out.real_field = a.real_field && b.real_field;
    out.grade = std::min(a.grade, b.grade);
    return out;
}

inline GradedField operator*(double s, const GradedField& a) {
    GradedField out = a;
    for (auto& z : out.c) z *= s;
    return out;
}

struct GridField {
    int n_r = 0;
    int n_theta = 0;
    std::vector<cplx> ux, uy;

    GridField() = default;
    GridField(int n_r_, int n_theta_)
        : n_r(n_r_), n_theta(n_theta_),
          ux(static_cast<std::size_t>(n_r_) * static_cast<std::size_t>(n_theta_), cplx{0.0, 0.0}),
          uy(static_cast<std::size_t>(n_r_) * static_cast<std::size_t>(n_theta_), cplx{0.0, 0.0}) {}

    std::size_t at(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_theta) + static_cast<std::size_t>(j);
    }
};

inline void check_grid_shape(const BasisTable& b, const GridField& w, const char* where) {
    if (w.n_r != b.n_r() || w.n_theta != b.n_theta)
        throw FieldError(std::string(where) + ": grid/quadrature shape mismatch");
}

inline GridField operator+(const GridField& a, const GridField& b) {
    GridField out = a;
    for (std::size_t i = 0; i < out.ux.size(); ++i) {
        out.ux[i] += b.ux[i];
        out.uy[i] += b.uy[i];
    }
    return out;
}

inline GridField operator-(const GridField& a, const GridField& b) {
    GridField out = a;
    for (std::size_t i = 0; i < out.ux.size(); ++i) {
        out.ux[i] -= b.ux[i];
        out.uy[i] -= b.uy[i];
    }
    return out;
}

// ---- coefficient snapshots -------------------------------------------------
//
// Text format:
//   # disc-stream-v1 M_max K_max grade
//   m k re im          (one line per mode, lexicographic in (m, k))

inline std::string format_snapshot(const GradedField& u) {
    std::string out;
    char line[96];
    std::snprintf(line, sizeof line, "# disc-stream-v1 %d %d %.17g\n", u.m_max, u.k_max, u.grade);
    out += line;
    for (int m = -u.m_max; m <= u.m_max; ++m)
        for (int k = 1; k <= u.k_max; ++k) {
            const cplx z = u.at(m, k);
            std::snprintf(line, sizeof line, "%d %d %.17g %.17g\n", m, k, z.real(), z.imag());
            out += line;
        }
    return out;
}

inline void write_snapshot(const std::string& path, const GradedField& u) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw FieldError("write_snapshot: cannot open " + tmp);
        os << format_snapshot(u);
    }
    std::remove(path.c_str());
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw FieldError("write_snapshot: rename failed for " + path);
}

inline GradedField parse_snapshot(std::istream& is) {
    std::string tag;
    int m_max = -1, k_max = 0;
    double grade = 0.0;
    std::string header;
    if (!std::getline(is, header)) throw FieldError("snapshot: empty input");
    {
        std::istringstream hs(header);
        std::string hash;
        hs >> hash >> tag >> m_max >> k_max >> grade;
        if (hash != "#" || tag != "disc-stream-v1" || m_max < 0 || k_max < 1)
            throw FieldError("snapshot: bad header '" + header + "'");
    }
    GradedField u(m_max, k_max, grade);
    std::string line;
    std::size_t rows = 0;
    double max_abs = 0.0;
    std::vector<bool> seen(u.c.size(), false);
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        int m = 0, k = 0;
        double re = 0.0, im = 0.0;
        if (!(ls >> m >> k >> re >> im)) throw FieldError("snapshot: bad row '" + line + "'");
        if (m < -m_max || m > m_max || k < 1 || k > k_max)
            throw FieldError("snapshot: mode (" + std::to_string(m) + "," + std::to_string(k) +
                             ") outside declared basis");
        if (seen[u.index(m, k)])
            throw FieldError("snapshot: duplicate mode (" + std::to_string(m) + "," +
                             std::to_string(k) + ")");
        seen[u.index(m, k)] = true;
        u.at(m, k) = cplx{re, im};
        max_abs = std::max(max_abs, std::abs(u.at(m, k)));
        ++rows;
    }
    if (rows != u.c.size()) throw FieldError("snapshot: expected " + std::to_string(u.c.size()) +
                                             " rows, got " + std::to_string(rows));
    if (u.reality_defect() > 1e-12 * std::max(1.0, max_abs))
        throw FieldError("snapshot: reality constraint violated beyond 1e-12");
    u.real_field = true;
    return u;
}

inline GradedField read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FieldError("read_snapshot: cannot open " + path);
    return parse_snapshot(is);
}

}  // namespace eulerdisc
