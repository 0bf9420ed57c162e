// Command-line front end: simulate / check / reduce / spectrum.
// Exit codes: 0 ok, 1 invariant failure, 2 config error, 3 runtime blow-up.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "eulerdisc/eulerdisc.hpp"

using namespace eulerdisc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariantFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeFailure = 3;

int exit_for_status(RunStatus s) {
    switch (s) {
        case RunStatus::Ok: return kExitOk;
        case RunStatus::Blowup: return kExitRuntimeFailure;
        case RunStatus::ChartFailure: return kExitRuntimeFailure;
    }
    return kExitOk;
}

int run_simulate(const std::string& config_path, bool force_reduce) {
    ExperimentConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error(s):\n");
        for (const auto& s : e.issues) std::fprintf(stderr, "  %s\n", s.c_str());
        return kExitConfigError;
    }
    try {
        RunManifest man = run_experiment(cfg, force_reduce);
        std::printf("status: %s\n", man.status == RunStatus::Ok ? "ok"
                    : man.status == RunStatus::Blowup           ? "blowup"
                                                                : "chart_failure");
        if (man.reduced_mode_discrepancy >= 0.0)
            std::printf("reduced mode sup-discrepancy: %.6e\n", man.reduced_mode_discrepancy);
        for (const auto& f : man.files) std::printf("wrote %s\n", f.c_str());
        return exit_for_status(man.status);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return kExitRuntimeFailure;
    }
}

int run_check(const std::string& selector, const std::string& config_path, int m_max, int k_max,
              const std::string& corrupt_zero, bool as_json) {
    int mm = m_max, kk = k_max, quad = 0;
    if (!config_path.empty()) {
        try {
            ExperimentConfig cfg = load_config(config_path);
            mm = cfg.m_max;
            kk = cfg.k_max;
            quad = cfg.quad_order;
        } catch (const ConfigError& e) {
            std::fprintf(stderr, "config error(s):\n");
            for (const auto& s : e.issues) std::fprintf(stderr, "  %s\n", s.c_str());
            return kExitConfigError;
        }
    }
    try {
        BasisTable basis = build_basis(mm, kk, quad);
        if (!corrupt_zero.empty()) {
            int cm = 0, ck = 0;
            double delta = 0.0;
            if (std::sscanf(corrupt_zero.c_str(), "%d,%d,%lf", &cm, &ck, &delta) != 3 || cm < 0 ||
                cm > mm || ck < 1 || ck > kk) {
                std::fprintf(stderr, "bad --corrupt-zero argument '%s' (want m,k,delta)\n",
                             corrupt_zero.c_str());
                return kExitConfigError;
            }
            basis.zeros[basis.mk(cm, ck)] += delta;
        }
        std::vector<CheckResult> results = run_check_suite(selector, basis);
        int failures = 0;
        if (as_json) {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& c : results) {
                arr.push_back({{"name", c.name},
                               {"measured", c.measured},
                               {"tol", c.tol},
                               {"pass", c.pass},
                               {"detail", c.detail}});
                if (!c.pass) ++failures;
            }
            std::printf("%s\n", arr.dump(2).c_str());
        } else {
            for (const auto& c : results) {
                std::printf("%-42s %s  measured=%.3e tol=%.3e%s%s\n", c.name.c_str(),
                            c.pass ? "PASS" : "FAIL", c.measured, c.tol,
                            c.detail.empty() ? "" : "  ", c.detail.c_str());
                if (!c.pass) ++failures;
            }
            std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failures,
                        results.size());
        }
        return failures == 0 ? kExitOk : kExitInvariantFailure;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime failure: %s\n", e.what());
        return kExitRuntimeFailure;
    }
}

int run_spectrum(const std::string& snapshot_path) {
    try {
        GradedField u = read_snapshot(snapshot_path);
        BasisTable basis = build_basis(u.m_max, u.k_max);
        std::printf("# m k energy\n");
        for (int m = -u.m_max; m <= u.m_max; ++m)
            for (int k = 1; k <= u.k_max; ++k) {
                const double e = basis.lam(m, k) * std::norm(u.at(m, k));
                std::printf("%d %d %.17g\n", m, k, e);
            }
        return kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfigError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Euler solver on the unit disc with SO(2) symmetry reduction"};
    app.require_subcommand(1);

    std::string config_path, selector = "all", snapshot_path, corrupt_zero;
    int m_max = 8, k_max = 8;
    bool as_json = false;

    auto* sim = app.add_subcommand("simulate", "run an experiment from a config file");
    sim->add_option("config", config_path, "config file path")->required();

    auto* chk = app.add_subcommand("check", "run the invariant suite");
    chk->add_option("selector", selector, "all|basis|action|slice|bracket|flow");
    chk->add_option("--config", config_path, "take the resolution from a config file");
    chk->add_option("--m-max", m_max, "angular resolution when no config is given");
    chk->add_option("--k-max", k_max, "radial resolution when no config is given");
    chk->add_option("--corrupt-zero", corrupt_zero, "negative control: perturb zero 'm,k,delta'");
    chk->add_flag("--json", as_json, "emit JSON instead of the table");

    auto* red = app.add_subcommand("reduce", "run both reduced-flow modes and compare them");
    red->add_option("config", config_path, "config file path")->required();

    auto* spm = app.add_subcommand("spectrum", "print per-mode energies of a snapshot");
    spm->add_option("snapshot", snapshot_path, "snapshot file path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfigError;
    }

    if (sim->parsed()) return run_simulate(config_path, false);
    if (chk->parsed()) return run_check(selector, config_path, m_max, k_max, corrupt_zero, as_json);
    if (red->parsed()) return run_simulate(config_path, true);
    if (spm->parsed()) return run_spectrum(snapshot_path);
    return kExitConfigError;
}
