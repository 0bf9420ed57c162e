#pragma once

// Experiment configuration: flat key-value text with dotted sections, no
// nesting beyond two levels.  Unknown keys and invalid values are collected
// field by field instead of failing at the first problem.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "eulerdisc/dynamics.hpp"
#include "eulerdisc/group.hpp"
#include "eulerdisc/presets.hpp"

namespace eulerdisc {

struct ConfigError : std::runtime_error {
    std::vector<std::string> issues;
    explicit ConfigError(std::vector<std::string> issues_)
        : std::runtime_error("invalid config: " + join(issues_)), issues(std::move(issues_)) {}
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : "; ") + e;
        return s;
    }
};

enum class InitialKind { SingleMode, Swirl, ZnSymmetric, Random, Zero };

struct ExperimentConfig {
    int m_max = 8, k_max = 8, quad_order = 0;
    double grade = 2.0;

    InitialKind initial = InitialKind::Swirl;
    std::vector<ModeAmp> modes;   // single_mode
    int zn = 2;                   // zn_symmetric
    std::uint64_t seed = 1;
    double decay = 0.6;
    double amplitude = 1.0;

    double dt = 1e-3;
    double t_final = 1.0;
    Scheme scheme = Scheme::RK4;

    SubgroupDescriptor monitor = SubgroupDescriptor::trivial();
    bool has_monitor = false;
    bool reduce = false;

    std::string out_dir = "out";
    int snapshot_every = 0;  // steps; 0 disables snapshots
    int record_every = 1;

    std::string raw_text;  // echoed into the manifest
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto z = s.find_last_not_of(" \t\r\n");
    return s.substr(a, z - a + 1);
}

inline std::vector<ModeAmp> parse_modes(const std::string& v) {
    // "m k re im; m k re im; ..."
    std::vector<ModeAmp> out;
    std::istringstream groups(v);
    std::string part;
    while (std::getline(groups, part, ';')) {
        part = trim(part);
        if (part.empty()) continue;
        std::istringstream ps(part);
        ModeAmp ma;
        if (!(ps >> ma.m >> ma.k >> ma.re >> ma.im))
            throw std::invalid_argument("bad mode entry '" + part + "'");
        out.push_back(ma);
    }
    if (out.empty()) throw std::invalid_argument("empty mode list");
    return out;
}

}  // namespace detail

/// Parses config text.  Throws ConfigError carrying every offending field.
inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    cfg.raw_text = text;
    std::vector<std::string> issues;
    std::map<std::string, std::string> kv;

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }

    auto take = [&](const char* key) -> std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };
    auto fail = [&](const char* key, const std::string& why) {
        issues.push_back(std::string(key) + ": " + why);
    };
    auto get_int = [&](const char* key, int& dst) {
        if (auto* v = take(key)) {
            try {
                dst = std::stoi(*v);
            } catch (...) {
                fail(key, "not an integer ('" + *v + "')");
            }
        }
    };
    auto get_u64 = [&](const char* key, std::uint64_t& dst) {
        if (auto* v = take(key)) {
            try {
                dst = std::stoull(*v);
            } catch (...) {
                fail(key, "not an unsigned integer ('" + *v + "')");
            }
        }
    };
    auto get_double = [&](const char* key, double& dst) {
        if (auto* v = take(key)) {
            try {
                dst = std::stod(*v);
            } catch (...) {
                fail(key, "not a number ('" + *v + "')");
            }
        }
    };
    auto get_bool = [&](const char* key, bool& dst) {
        if (auto* v = take(key)) {
            if (*v == "true" || *v == "1")
                dst = true;
            else if (*v == "false" || *v == "0")
                dst = false;
            else
                fail(key, "not a boolean ('" + *v + "')");
        }
    };

    get_int("basis.m_max", cfg.m_max);
    get_int("basis.k_max", cfg.k_max);
    get_int("basis.quad_order", cfg.quad_order);
    get_double("grade", cfg.grade);

    if (auto* v = take("initial.kind")) {
        if (*v == "single_mode")
            cfg.initial = InitialKind::SingleMode;
        else if (*v == "swirl")
            cfg.initial = InitialKind::Swirl;
        else if (*v == "zn_symmetric")
            cfg.initial = InitialKind::ZnSymmetric;
        else if (*v == "random")
            cfg.initial = InitialKind::Random;
        else if (*v == "zero")
            cfg.initial = InitialKind::Zero;
        else
            fail("initial.kind", "unknown preset '" + *v + "'");
    }
    if (auto* v = take("initial.modes")) {
        try {
            cfg.modes = detail::parse_modes(*v);
        } catch (const std::exception& e) {
            fail("initial.modes", e.what());
        }
    }
    get_int("initial.n", cfg.zn);
    get_u64("initial.seed", cfg.seed);
    get_double("initial.decay", cfg.decay);
    get_double("initial.amplitude", cfg.amplitude);

    get_double("time.dt", cfg.dt);
    get_double("time.t_final", cfg.t_final);
    if (auto* v = take("time.scheme")) {
        try {
            cfg.scheme = parse_scheme(*v);
        } catch (const std::exception& e) {
            fail("time.scheme", e.what());
        }
    }

    if (auto* v = take("symmetry.monitor")) {
        if (*v != "none") {
            try {
                cfg.monitor = SubgroupDescriptor::parse(*v);
                cfg.has_monitor = true;
            } catch (const std::exception& e) {
                fail("symmetry.monitor", e.what());
            }
        }
    }
    get_bool("symmetry.reduce", cfg.reduce);

    if (auto* v = take("output.dir")) cfg.out_dir = *v;
    get_int("output.snapshot_every", cfg.snapshot_every);
    get_int("output.record_every", cfg.record_every);

    static const char* known[] = {
        "basis.m_max",  "basis.k_max",   "basis.quad_order", "grade",
        "initial.kind", "initial.modes", "initial.n",        "initial.seed",
        "initial.decay", "initial.amplitude",
        "time.dt",      "time.t_final",  "time.scheme",      "symmetry.monitor",
        "symmetry.reduce", "output.dir", "output.snapshot_every", "output.record_every"};
    for (const auto& [key, val] : kv) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) issues.push_back(key + ": unknown key");
    }

    // validation
    if (cfg.m_max < 0) issues.push_back("basis.m_max: must be >= 0");
    if (cfg.k_max < 1) issues.push_back("basis.k_max: must be >= 1");
    if (cfg.grade < 0.0) issues.push_back("grade: must be >= 0");
    if (!(cfg.dt > 0.0)) issues.push_back("time.dt: must be > 0");
    if (cfg.t_final < 0.0) issues.push_back("time.t_final: must be >= 0");
    if (cfg.record_every < 1) issues.push_back("output.record_every: must be >= 1");
    if (cfg.snapshot_every < 0) issues.push_back("output.snapshot_every: must be >= 0");
    if (cfg.initial == InitialKind::SingleMode) {
        if (cfg.modes.empty()) issues.push_back("initial.modes: required for single_mode");
        for (const auto& ma : cfg.modes)
            if (std::abs(ma.m) > cfg.m_max || ma.k < 1 || ma.k > cfg.k_max)
                issues.push_back("initial.modes: mode (" + std::to_string(ma.m) + "," +
                                 std::to_string(ma.k) + ") outside basis");
    }
    if (cfg.initial == InitialKind::ZnSymmetric && (cfg.zn < 2 || cfg.zn > cfg.m_max))
        issues.push_back("initial.n: need 2 <= n <= basis.m_max");
    if (cfg.reduce && cfg.initial != InitialKind::ZnSymmetric && cfg.initial != InitialKind::SingleMode &&
        cfg.initial != InitialKind::Random)
        issues.push_back("symmetry.reduce: needs an initial condition with residual symmetry freedom");

    if (!issues.empty()) throw ConfigError(std::move(issues));
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError({"cannot open config file '" + path + "'"});
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

inline GradedField initial_field(const BasisTable& b, const ExperimentConfig& cfg) {
    switch (cfg.initial) {
        case InitialKind::SingleMode: return make_single_mode(b, cfg.modes, cfg.grade);
        case InitialKind::Swirl: return make_swirl(b, cfg.grade, cfg.amplitude);
        case InitialKind::ZnSymmetric:
            return make_zn_symmetric(b, cfg.zn, cfg.seed, cfg.grade, cfg.decay, cfg.amplitude);
        case InitialKind::Random: return make_random(b, cfg.seed, cfg.decay, cfg.grade, cfg.amplitude);
        case InitialKind::Zero: return zero_field(b, cfg.grade);
    }
    return zero_field(b, cfg.grade);
}

}  // namespace eulerdisc
