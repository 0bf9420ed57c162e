#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eulerdisc/checks.hpp"
#include "eulerdisc/config.hpp"
#include "eulerdisc/runner.hpp"

using namespace eulerdisc;

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string base_config(const std::string& out_dir) {
    return std::string("basis.m_max = 4\n") + "basis.k_max = 4\n" + "grade = 2.0\n" +
           "initial.kind = zn_symmetric\n" + "initial.n = 2\n" + "initial.seed = 7\n" +
           "time.dt = 2e-3\n" + "time.t_final = 0.05\n" + "time.scheme = rk4\n" +
           "symmetry.monitor = cyclic:2\n" + "output.dir = " + out_dir + "\n";
}

}  // namespace

TEST_CASE("config parsing", "[harness]") {
    ExperimentConfig cfg = parse_config(base_config("/tmp/eulerdisc_cfgtest"));
    REQUIRE(cfg.m_max == 4);
    REQUIRE(cfg.k_max == 4);
    REQUIRE(cfg.initial == InitialKind::ZnSymmetric);
    REQUIRE(cfg.zn == 2);
    REQUIRE(cfg.dt == 2e-3);
    REQUIRE(cfg.monitor == SubgroupDescriptor::cyclic(2));

    SECTION("field-by-field error reporting") {
        const std::string bad =
            "basis.m_max = 4\nbasis.k_max = 0\ntime.dt = -1\nmystery.key = 3\n"
            "initial.kind = single_mode\ninitial.modes = 9 1 1 0\n";
        try {
            (void)parse_config(bad);
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            REQUIRE(e.issues.size() >= 4);
            bool saw_k = false, saw_dt = false, saw_unknown = false, saw_mode = false;
            for (const auto& s : e.issues) {
                if (s.find("basis.k_max") != std::string::npos) saw_k = true;
                if (s.find("time.dt") != std::string::npos) saw_dt = true;
                if (s.find("mystery.key") != std::string::npos) saw_unknown = true;
                if (s.find("initial.modes") != std::string::npos) saw_mode = true;
            }
            REQUIRE(saw_k);
            REQUIRE(saw_dt);
            REQUIRE(saw_unknown);
            REQUIRE(saw_mode);
        }
    }

    SECTION("comments and blank lines are tolerated") {
        ExperimentConfig c = parse_config("# a comment\n\nbasis.m_max = 3 # trailing\n");
        REQUIRE(c.m_max == 3);
    }
}

TEST_CASE("run_experiment determinism and outputs", "[harness]") {
    const std::string dir1 = "/tmp/eulerdisc_run1";
    const std::string dir2 = "/tmp/eulerdisc_run2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);

    ExperimentConfig c1 = parse_config(base_config(dir1));
    ExperimentConfig c2 = parse_config(base_config(dir2));
    RunManifest m1 = run_experiment(c1);
    RunManifest m2 = run_experiment(c2);
    REQUIRE(m1.status == RunStatus::Ok);
    REQUIRE(m2.status == RunStatus::Ok);

    const std::string d1 = read_file(dir1 + "/diagnostics.csv");
    const std::string d2 = read_file(dir2 + "/diagnostics.csv");
    REQUIRE(!d1.empty());
    REQUIRE(d1 == d2);  // byte-identical

    REQUIRE(d1.rfind("t,energy,enstrophy,angular_momentum,div_residual,defect_n2,defect_n3,"
                     "defect_n4,tail_fraction\n",
                     0) == 0);

    // Z_2-symmetric run keeps the defect column at zero
    std::istringstream rows(d1);
    std::string line;
    std::getline(rows, line);  // header
    while (std::getline(rows, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        REQUIRE(vals.size() == 9);
        REQUIRE(vals[5] < 1e-10);  // defect_n2
    }

    REQUIRE(fs::exists(dir1 + "/manifest.txt"));
    REQUIRE(!fs::exists(dir1 + "/manifest.txt.tmp"));
    const std::string man = read_file(dir1 + "/manifest.txt");
    REQUIRE(man.find("status = ok") != std::string::npos);
    REQUIRE(man.find("config_begin") != std::string::npos);

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("zero initial condition gives all-zero diagnostics", "[harness]") {
    const std::string dir = "/tmp/eulerdisc_runzero";
    fs::remove_all(dir);
    ExperimentConfig cfg = parse_config(
        "basis.m_max = 3\nbasis.k_max = 3\ninitial.kind = zero\ntime.dt = 1e-2\n"
        "time.t_final = 0.03\noutput.dir = " + dir + "\n");
    RunManifest m = run_experiment(cfg);
    REQUIRE(m.status == RunStatus::Ok);
    std::istringstream rows(read_file(dir + "/diagnostics.csv"));
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) vals.push_back(std::stod(cell));
        for (std::size_t i = 1; i < vals.size(); ++i) REQUIRE(vals[i] == 0.0);
    }
    fs::remove_all(dir);
}

TEST_CASE("reduced run reports the mode discrepancy", "[harness]") {
    const std::string dir = "/tmp/eulerdisc_runreduce";
    fs::remove_all(dir);
    ExperimentConfig cfg = parse_config(base_config(dir) + "symmetry.reduce = true\n");
    RunManifest m = run_experiment(cfg);
    REQUIRE(m.status == RunStatus::Ok);
    REQUIRE(m.reduced_mode_discrepancy >= 0.0);
    REQUIRE(m.reduced_mode_discrepancy < 1e-6);
    REQUIRE(fs::exists(dir + "/reduced_quotient.csv"));
    REQUIRE(fs::exists(dir + "/reduced_chart.csv"));
    fs::remove_all(dir);
}

TEST_CASE("snapshots are emitted on cadence", "[harness]") {
    const std::string dir = "/tmp/eulerdisc_runsnap";
    fs::remove_all(dir);
    ExperimentConfig cfg = parse_config(base_config(dir) + "output.snapshot_every = 10\n");
    RunManifest m = run_experiment(cfg);
    REQUIRE(m.status == RunStatus::Ok);
    REQUIRE(fs::exists(dir + "/snapshot_000000.txt"));
    REQUIRE(fs::exists(dir + "/snapshot_final.txt"));
    GradedField snap = read_snapshot(dir + "/snapshot_final.txt");
    REQUIRE(snap.m_max == 4);
    fs::remove_all(dir);
}

TEST_CASE("blow-up is recorded in the manifest with partial outputs kept", "[harness]") {
    const std::string dir = "/tmp/eulerdisc_runblow";
    fs::remove_all(dir);
    ExperimentConfig cfg = parse_config(
        "basis.m_max = 4\nbasis.k_max = 4\ninitial.kind = random\ninitial.seed = 3\n"
        "initial.amplitude = 50\ninitial.decay = 0.2\ntime.dt = 0.05\ntime.t_final = 5\n"
        "output.dir = " + dir + "\n");
    RunManifest m = run_experiment(cfg);
    REQUIRE(m.status == RunStatus::Blowup);
    REQUIRE(m.failure_step >= 1);
    REQUIRE(fs::exists(dir + "/diagnostics.csv"));
    const std::string man = read_file(dir + "/manifest.txt");
    REQUIRE(man.find("status = blowup") != std::string::npos);
    REQUIRE(man.find("failure_step") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("check suite selectors", "[harness]") {
    BasisTable b = build_basis(4, 4);

    auto basis_checks = run_check_suite("basis", b);
    REQUIRE(!basis_checks.empty());
    for (const auto& c : basis_checks) {
        INFO(c.name << " measured=" << c.measured << " tol=" << c.tol << " " << c.detail);
        REQUIRE(c.pass);
    }

    auto action_checks = run_check_suite("action", b);
    for (const auto& c : action_checks) {
        INFO(c.name << " measured=" << c.measured << " tol=" << c.tol << " " << c.detail);
        REQUIRE(c.pass);
    }

    REQUIRE_THROWS_AS(run_check_suite("bogus", b), std::invalid_argument);
}

TEST_CASE("corrupted basis is caught with the offending mode", "[harness]") {
    BasisTable bad = build_basis(4, 4);
    bad.zeros[bad.mk(1, 1)] += 1e-3;  // perturb one zero, keep everything else
    auto checks = run_basis_checks(bad);
    bool failed = false;
    std::string where;
    for (const auto& c : checks)
        if (c.name == "basis.zero_residual" && !c.pass) {
            failed = true;
            where = c.detail;
        }
    REQUIRE(failed);
    REQUIRE(where.find("m=1") != std::string::npos);
    REQUIRE(where.find("k=1") != std::string::npos);
}
