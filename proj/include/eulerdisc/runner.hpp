#pragma once

// Experiment runner: builds the basis, runs the (reduced) flow, writes
// diagnostics.csv, snapshots, and the run manifest.  All file writes are
// write-temp-then-rename; data files carry no wall-clock content so identical
// configs produce byte-identical outputs.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "eulerdisc/config.hpp"
#include "eulerdisc/dynamics.hpp"
#include "eulerdisc/slice.hpp"

namespace eulerdisc {

inline const char* kVersion = "eulerdisc 1.0.0";

struct RunManifest {
    std::string config_echo;
    std::string version = kVersion;
    std::string started_at, finished_at;  // wall clock, manifest only
    RunStatus status = RunStatus::Ok;
    long failure_step = -1;
    std::vector<std::string> files;
    double reduced_mode_discrepancy = -1.0;  // set by reduced runs
    double killing_residual = 0.0;           // warning above 1e-6: momentum pairing is truncated
};

namespace detail {

inline std::string now_string() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::tm tm_utc{};
#if defined(_WIN32)
    gmtime_s(&tm_utc, &t);
#else
    gmtime_r(&t, &tm_utc);
#endif
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

inline void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw FieldError("cannot open " + tmp);
        os << content;
    }
    std::filesystem::rename(tmp, path);
}

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string diagnostics_csv(const std::vector<double>& times,
                                   const std::vector<DiagnosticsRecord>& recs) {
    std::string out =
        "t,energy,enstrophy,angular_momentum,div_residual,defect_n2,defect_n3,defect_n4,"
        "tail_fraction\n";
    for (std::size_t i = 0; i < times.size(); ++i) {
        const auto& d = recs[i];
        out += fmt_g(times[i]) + "," + fmt_g(d.energy) + "," + fmt_g(d.enstrophy) + "," +
               fmt_g(d.angular_momentum) + "," + fmt_g(d.div_residual) + "," + fmt_g(d.defect_n2) +
               "," + fmt_g(d.defect_n3) + "," + fmt_g(d.defect_n4) + "," + fmt_g(d.tail_fraction) +
               "\n";
    }
    return out;
}

inline const char* status_string(RunStatus s) {
    switch (s) {
        case RunStatus::Ok: return "ok";
        case RunStatus::Blowup: return "blowup";
        case RunStatus::ChartFailure: return "chart_failure";
    }
    return "ok";
}

}  // namespace detail

inline void write_manifest(const std::string& path, const RunManifest& m) {
    std::string out;
    out += std::string("version = ") + m.version + "\n";
    out += "status = " + std::string(detail::status_string(m.status)) + "\n";
    if (m.failure_step >= 0) out += "failure_step = " + std::to_string(m.failure_step) + "\n";
    out += "started_at = " + m.started_at + "\n";
    out += "finished_at = " + m.finished_at + "\n";
    if (m.reduced_mode_discrepancy >= 0.0)
        out += "reduced_mode_discrepancy = " + detail::fmt_g(m.reduced_mode_discrepancy) + "\n";
    out += "killing_truncation_residual = " + detail::fmt_g(m.killing_residual) + "\n";
    if (m.killing_residual > 1e-6)
        out += "warning = angular momentum pairs with a truncated Killing field\n";
    for (const auto& f : m.files) out += "file = " + f + "\n";
    out += "config_begin\n" + m.config_echo;
    if (!m.config_echo.empty() && m.config_echo.back() != '\n') out += "\n";
    out += "config_end\n";
    detail::atomic_write(path, out);
}

/// Runs the configured experiment.  With force_reduce (the `reduce`
/// subcommand) or symmetry.reduce = true, both reduced-flow modes run and
/// their sup-discrepancy is recorded in the manifest.
inline RunManifest run_experiment(const ExperimentConfig& cfg, bool force_reduce = false) {
    namespace fs = std::filesystem;
    RunManifest man;
    man.config_echo = cfg.raw_text;
    man.started_at = detail::now_string();

    fs::create_directories(cfg.out_dir);
    BasisTable basis = build_basis(cfg.m_max, cfg.k_max, cfg.quad_order);
    man.killing_residual = killing_truncation_residual(basis);
    GradedField u0 = initial_field(basis, cfg);

    Trajectory tr = flow(basis, u0, cfg.dt, cfg.t_final, cfg.scheme, cfg.record_every);
    man.status = tr.status;
    man.failure_step = tr.failure_step;

    const std::string diag_path = cfg.out_dir + "/diagnostics.csv";
    detail::atomic_write(diag_path, detail::diagnostics_csv(tr.times, tr.diag));
    man.files.push_back(diag_path);

    if (cfg.snapshot_every > 0) {
        for (std::size_t i = 0; i < tr.states.size();
             i += static_cast<std::size_t>(cfg.snapshot_every)) {
            char name[64];
            std::snprintf(name, sizeof name, "/snapshot_%06zu.txt", i);
            const std::string p = cfg.out_dir + name;
            write_snapshot(p, tr.states[i]);
            man.files.push_back(p);
        }
        char name[64];
        std::snprintf(name, sizeof name, "/snapshot_final.txt");
        const std::string p = cfg.out_dir + name;
        write_snapshot(p, tr.states.back());
        man.files.push_back(p);
    }

    if ((cfg.reduce || force_reduce) && tr.status == RunStatus::Ok) {
        SliceChart chart = make_slice_chart(basis, u0);
        ReducedPoint om0 = canonicalize(basis, u0, chart.H);
        om0.chart_id = chart.id;
        ReducedTrajectory qa = reduced_flow(basis, chart, om0, cfg.dt, cfg.t_final,
                                            ReducedMode::Quotient, cfg.scheme, cfg.record_every);
        ReducedTrajectory qb = reduced_flow(basis, chart, om0, cfg.dt, cfg.t_final,
                                            ReducedMode::Chart, cfg.scheme, cfg.record_every);
        const std::string pa = cfg.out_dir + "/reduced_quotient.csv";
        const std::string pb = cfg.out_dir + "/reduced_chart.csv";
        detail::atomic_write(pa, detail::diagnostics_csv(qa.times, qa.diag));
        detail::atomic_write(pb, detail::diagnostics_csv(qb.times, qb.diag));
        man.files.push_back(pa);
        man.files.push_back(pb);
        if (qa.status != RunStatus::Ok) {
            man.status = qa.status;
            man.failure_step = qa.failure_step;
        } else if (qb.status != RunStatus::Ok) {
            man.status = qb.status;
            man.failure_step = qb.failure_step;
        } else {
            double sup = 0.0;
            const std::size_t n = std::min(qa.points.size(), qb.points.size());
            for (std::size_t i = 0; i < n; ++i)
                sup = std::max(sup, norm(basis, qa.points[i].rep - qb.points[i].rep));
            man.reduced_mode_discrepancy = sup;
            detail::atomic_write(cfg.out_dir + "/reduced_discrepancy.txt",
                                 "sup_rep_discrepancy = " + detail::fmt_g(sup) + "\n");
            man.files.push_back(cfg.out_dir + "/reduced_discrepancy.txt");
        }
    }

    man.finished_at = detail::now_string();
    write_manifest(cfg.out_dir + "/manifest.txt", man);
    return man;
}

}  // namespace eulerdisc
