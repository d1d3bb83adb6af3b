#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qmcar/ar_sampler.hpp"
#include "qmcar/criterion.hpp"
#include "qmcar/density.hpp"
#include "qmcar/discrepancy.hpp"
#include "qmcar/driver.hpp"
#include "qmcar/io.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        std::string tmpl = (fs::temp_directory_path() / "qmcar_cli_XXXXXX").string();
        char* p = mkdtemp(tmpl.data());
        REQUIRE(p != nullptr);
        return fs::path(p);
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    const fs::path err_path = scratch_dir() / "stderr.txt";
    const std::string cmd =
        std::string(QMCAR_CLI_PATH) + " " + args + " 2>" + err_path.string();
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    const int status = pclose(pipe);
    std::ifstream es(err_path);
    std::stringstream err;
    err << es.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is.good());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("driver CSV matches the in-process generator bit for bit") {
    const RunResult r = run_cli("driver --family fibonacci --k 4");
    CHECK(r.exit_code == 0);
    std::istringstream is(r.out);
    const auto pts = qmcar::read_points_csv(is);
    const qmcar::DriverSet t = qmcar::fibonacci_lattice(4);
    REQUIRE(pts.size() == t.points.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(pts[i].x1 == t.points[i].x1);
        CHECK(pts[i].x2 == t.points[i].x2);
    }
}

TEST_CASE("exit codes") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("driver --help").exit_code == 0);
    CHECK(run_cli("frobnicate").exit_code == 1);          // unknown subcommand
    CHECK(run_cli("driver --nope 3").exit_code == 1);     // unknown flag
    CHECK(run_cli("driver --family fibonacci").exit_code == 2);       // missing --k
    CHECK(run_cli("driver --family fibonacci --k 2").exit_code == 2); // out of range
    CHECK(run_cli("driver --family halton --m 7").exit_code == 2);

    const RunResult bad_density = run_cli("sample --density nosuch --family fibonacci --k 5");
    CHECK(bad_density.exit_code == 2);
    CHECK(bad_density.err.find("example1") != std::string::npos);
    CHECK(bad_density.err.find("error: domain:") != std::string::npos);

    const RunResult missing = run_cli("experiment --config /nonexistent/cfg.json --out " +
                                      (scratch_dir() / "x").string());
    CHECK(missing.exit_code == 3);
    CHECK(missing.err.rfind("error: io:", 0) == 0);
}

TEST_CASE("criterion subcommand resolves the default cutoff") {
    const RunResult r = run_cli("criterion --family fibonacci --k 12 --R auto");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["R"] == 21);
    CHECK(j["M"] == 144);
    CHECK(j["method"] == "fibonacci-fast");
    CHECK(j["value"].get<double>() ==
          doctest::Approx(qmcar::qr_fibonacci(12, 21).value).epsilon(1e-15));

    CHECK(run_cli("criterion --family kronecker --m 100 --R auto").exit_code == 2);
    const RunResult g = run_cli("criterion --family kronecker --m 100 --R 8");
    REQUIRE(g.exit_code == 0);
    CHECK(json::parse(g.out)["method"] == "general");
}

TEST_CASE("CSV round trip: driver file to 2d discrepancy equals in-process") {
    const fs::path pts_path = scratch_dir() / "pts.csv";
    CHECK(run_cli("driver --family fibonacci --k 10 --out " + pts_path.string()).exit_code == 0);
    const RunResult r = run_cli("discrepancy --mode 2d --input " + pts_path.string());
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    const auto direct = qmcar::star_discrepancy_2d_uniform(qmcar::fibonacci_lattice(10));
    CHECK(j["value"].get<double>() == direct.value);
    CHECK(j["N"] == 55);
    CHECK(j["method"] == "exact-2d");
}

TEST_CASE("sample emits CSV plus sidecar, and 1d discrepancy agrees end to end") {
    const fs::path samples_path = scratch_dir() / "samples.csv";
    const RunResult s = run_cli("sample --density example1 --family fibonacci --k 14 --out " +
                                samples_path.string());
    REQUIRE(s.exit_code == 0);
    const json meta = json::parse(slurp(samples_path.string() + ".json"));
    const qmcar::Density d = qmcar::make_builtin("example1");
    const qmcar::SampleSet direct =
        qmcar::ar_deterministic(d, qmcar::fibonacci_lattice(14));
    CHECK(meta["M"] == direct.m_proposed);
    CHECK(meta["N"] == direct.n_accepted);
    CHECK(meta["L"].get<double>() == d.bound_l());
    CHECK(meta["C"].get<double>() == d.norm_c());
    CHECK(meta["rate"].get<double>() ==
          doctest::Approx(d.norm_c() / d.bound_l()).epsilon(0.02));

    const RunResult r = run_cli("discrepancy --mode 1d --density example1 --input " +
                                samples_path.string());
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out)["value"].get<double>() ==
          qmcar::star_discrepancy_1d(d, direct).value);

    const RunResult o = run_cli("discrepancy --mode oracle --density example1 --grid 2000 --input " +
                                samples_path.string());
    REQUIRE(o.exit_code == 0);
    CHECK(json::parse(o.out)["method"] == "grid-oracle");
}

TEST_CASE("integrate subcommand reports a bound that holds") {
    const RunResult r =
        run_cli("integrate --f x --density example1 --family fibonacci --k 14");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j["abs_error"].get<double>() <= j["bound"].get<double>() + 1e-9);
    CHECK(j["variation"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(j["N"].get<long long>() > 0);
}

TEST_CASE("experiment subcommand writes deterministic CSV") {
    const fs::path cfg_path = scratch_dir() / "cfg.json";
    {
        std::ofstream os(cfg_path);
        os << R"({"density": "example1", "family": "fibonacci", "k_range": [8, 14]})";
    }
    const fs::path out1 = scratch_dir() / "exp1";
    const fs::path out2 = scratch_dir() / "exp2";
    const RunResult r1 =
        run_cli("experiment --config " + cfg_path.string() + " --out " + out1.string());
    REQUIRE(r1.exit_code == 0);
    const RunResult r2 =
        run_cli("experiment --config " + cfg_path.string() + " --out " + out2.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(out1 / "rows.csv") == slurp(out2 / "rows.csv"));
    const json rep = json::parse(slurp(out1 / "report.json"));
    CHECK(rep["fit"]["slope"].is_number());
    CHECK(run_cli("experiment --out /tmp/whatever_dir").exit_code == 2);  // neither config nor figures
}
