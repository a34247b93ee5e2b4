#include "clusterdyn/io.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CLUSTERDYN_CLI_PATH) + " " + args;
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

const char* kKinkConfig = R"(system = "qpg"
n_sites = 3
z = 0.3
seed = 5
clusters = [1, 2]

[integrator]
t1 = 2.0
sample_every = 0.1
)";

} // namespace

TEST_CASE("simulate writes deterministic trajectory files") {
    write_file("cli_kink.toml", kKinkConfig);
    fs::remove_all("cli_out_a");
    fs::remove_all("cli_out_b");
    REQUIRE(run_cli("simulate --config cli_kink.toml --out cli_out_a > /dev/null") == 0);
    REQUIRE(run_cli("simulate --config cli_kink.toml --out cli_out_b > /dev/null") == 0);
    for (const char* name : {"trajectory.csv", "trajectory.json", "report.json"}) {
        CHECK(fs::exists(fs::path("cli_out_a") / name));
        CHECK(slurp(fs::path("cli_out_a") / name) == slurp(fs::path("cli_out_b") / name));
    }
}

TEST_CASE("simulated trajectories reload from disk") {
    REQUIRE(fs::exists("cli_out_a/trajectory.json"));
    const nlohmann::ordered_json j =
        nlohmann::ordered_json::parse(slurp("cli_out_a/trajectory.json"));
    const clusterdyn::Trajectory tr = clusterdyn::trajectory_from_json(j);
    CHECK(tr.n_sites == 3);
    CHECK(tr.tracked_clusters == std::vector<int>{1, 2});
    CHECK(tr.times.size() == 21);
    CHECK(tr.times.back() == 2.0);
}

TEST_CASE("svg output is produced on request") {
    REQUIRE(run_cli("simulate --config cli_kink.toml --out cli_out_svg --format svg "
                    "> /dev/null") == 0);
    CHECK(fs::exists("cli_out_svg/cluster_m1.svg"));
    CHECK(fs::exists("cli_out_svg/cluster_m2.svg"));
    CHECK(!fs::exists("cli_out_svg/trajectory.csv"));
}

TEST_CASE("constant configurations report zero drift") {
    write_file("cli_const.toml", R"(system = "cg"
n_sites = 2

[integrator]
t1 = 1.0
sample_every = 0.25

[[site]]
s3 = 0.4
splus = 0
sminus = 0

[[site]]
s3 = -0.1
splus = 0
sminus = 0
)");
    REQUIRE(run_cli("simulate --config cli_const.toml --out cli_out_const > /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_const/report.json"));
    CHECK(rep.at("max_drift").get<double>() == 0.0);
}

TEST_CASE("invalid configurations exit with code 2 and name the key") {
    write_file("cli_bad.toml", "system = \"qrs\"\nn_sites = 2\nz = 0.2\nkappa = 1\n");
    const int code =
        run_cli("simulate --config cli_bad.toml --out cli_out_bad > /dev/null 2> cli_bad.err");
    CHECK(code == 2);
    CHECK(slurp("cli_bad.err").find("kappa") != std::string::npos);

    CHECK(run_cli("simulate --config no_such_file.toml > /dev/null 2> /dev/null") == 2);
    CHECK(run_cli("definitely-not-a-subcommand > /dev/null 2> /dev/null") == 2);
}

TEST_CASE("seed and set overrides reach the run") {
    REQUIRE(run_cli("simulate --config cli_kink.toml --seed 11 --set label=alt "
                    "--out cli_out_seed > /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_seed/report.json"));
    CHECK(rep.at("config").at("seed").get<int>() == 11);
    CHECK(rep.at("config").at("label").get<std::string>() == "alt");
    CHECK(slurp("cli_out_seed/trajectory.csv") != slurp("cli_out_a/trajectory.csv"));
}

TEST_CASE("compare passes on the kink system") {
    REQUIRE(run_cli("compare --config cli_kink.toml --out cli_out_cmp > /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_cmp/report.json"));
    CHECK(rep.at("all_pass").get<bool>());
    for (const auto& row : rep.at("clusters"))
        CHECK(row.at("max_abs_dev").get<double>() <= 1e-6);
}

TEST_CASE("group-check passes and writes a suite report") {
    REQUIRE(run_cli("group-check --z 0.3 --kappa 1 --points 50 --out cli_out_grp "
                    "> /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_grp/report.json"));
    CHECK(rep.at("all_pass").get<bool>());
    CHECK(rep.at("suites").size() == 4);
}

const char* kPeriodicQcgConfig = R"(system = "qcg"
n_sites = 5
z = 0.2
seed = 42
clusters = [1, 2, 3]

[ranges]
s3 = [-0.4, 0.4]
splus = [0.2, 0.8]
sminus = [-0.8, -0.2]

[integrator]
t1 = 20.0
sample_every = 0.05
)";

TEST_CASE("long deformed run in the periodic regime conserves the tower") {
    write_file("cli_qcg.toml", kPeriodicQcgConfig);
    REQUIRE(run_cli("simulate --config cli_qcg.toml --out cli_out_qcg > /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_qcg/report.json"));
    CHECK(rep.at("max_drift").get<double>() <= 1e-7);
    for (const auto& row : rep.at("invariant_drift"))
        CHECK(row.at("max_relative_drift").get<double>() <= 1e-7);

    REQUIRE(run_cli("compare --config cli_qcg.toml --out cli_out_qcg_cmp > /dev/null") == 0);
    const nlohmann::ordered_json cmp =
        nlohmann::ordered_json::parse(slurp("cli_out_qcg_cmp/report.json"));
    CHECK(cmp.at("all_pass").get<bool>());
}

TEST_CASE("compare reports per-cluster closed-form failures and exits 4") {
    write_file("cli_qrs.toml", R"(system = "qrs"
n_sites = 4
z = 0.2
seed = 2
clusters = [1, 2, 3]

[integrator]
t1 = 6.0
sample_every = 0.02
)");
    REQUIRE(run_cli("compare --config cli_qrs.toml --out cli_out_qrs > /dev/null") == 0);

    const int code = run_cli("compare --config cli_qrs.toml --set clusters=[1,4] "
                             "--out cli_out_qrs_n > /dev/null");
    CHECK(code == 4);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_qrs_n/report.json"));
    CHECK(!rep.at("all_pass").get<bool>());
    bool found_error_row = false;
    for (const auto& row : rep.at("clusters"))
        if (row.at("m").get<int>() == 4) {
            found_error_row = true;
            CHECK(!row.at("pass").get<bool>());
            CHECK(row.contains("error"));
        }
    CHECK(found_error_row);
}

TEST_CASE("z scan converges linearly toward the undeformed solution") {
    write_file("cli_zscan.toml", R"(system = "qcg"
n_sites = 3
z = 0.2
seed = 7
clusters = [1]

[ranges]
s3 = [-0.4, 0.4]
splus = [0.2, 0.8]
sminus = [-0.8, -0.2]

[integrator]
t1 = 2.0
sample_every = 0.05
)");
    REQUIRE(run_cli("scan --axis z --values 1e-2,1e-4,1e-6 --config cli_zscan.toml "
                    "--out cli_out_zscan > /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_zscan/report.json"));
    std::vector<double> devs;
    for (const auto& row : rep.at("points"))
        devs.push_back(row.at("dev_vs_undeformed").get<double>());
    REQUIRE(devs.size() == 3);
    CHECK(devs[0] > devs[1]);
    CHECK(devs[1] > devs[2]);
    CHECK(devs[0] / devs[1] >= 80.0);
    CHECK(devs[0] / devs[1] <= 120.0);
    CHECK(devs[1] / devs[2] >= 80.0);
    CHECK(devs[1] / devs[2] <= 120.0);
}

TEST_CASE("energy scan measures the common period across the window") {
    write_file("cli_escan.toml", R"(system = "qcg"
n_sites = 3
z = 0.5
seed = 11
clusters = [1]

[integrator]
t1 = 10.0
sample_every = 0.005
)");
    REQUIRE(run_cli("scan --axis energy --values=-1,-2 --config cli_escan.toml "
                    "--out cli_out_escan > /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_escan/report.json"));
    CHECK(rep.at("failed_points").get<int>() == 0);
    for (const auto& row : rep.at("points")) {
        CHECK(row.at("rel_error").get<double>() <= 1e-4);
        CHECK(row.at("period_measured").get<double>() > 0.0);
    }
}

TEST_CASE("bench gates on correctness and reports positive timings") {
    write_file("cli_bench.toml", R"(system = "qcg"
n_sites = 2
z = 0.2
seed = 3
clusters = [1]

[ranges]
s3 = [-0.4, 0.4]
splus = [0.2, 0.8]
sminus = [-0.8, -0.2]

[integrator]
t1 = 2.0
sample_every = 0.05
)");
    REQUIRE(run_cli("bench --n-values 2,4 --config cli_bench.toml --out cli_out_bench "
                    "> /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_bench/report.json"));
    for (const auto& row : rep.at("rows")) {
        CHECK(row.at("wall_numeric_s").get<double>() > 0.0);
        CHECK(row.at("wall_closed_s").get<double>() > 0.0);
        CHECK(row.at("max_closed_dev").get<double>() <= 1e-6);
    }
    const std::string csv = slurp("cli_out_bench/bench.csv");
    CHECK(csv.find("n,wall_numeric_s,wall_closed_s,max_drift,max_closed_dev") == 0);
}

TEST_CASE("scans record every point and keep going") {
    write_file("cli_scan.toml", R"(system = "kappa"
n_sites = 2
z = 0.35
kappa = 1.0
seed = 3

[integrator]
t1 = 1.0
sample_every = 0.25
)");
    REQUIRE(run_cli("scan --axis kappa --values 0,0.5,1 --config cli_scan.toml "
                    "--out cli_out_scan > /dev/null") == 0);
    const nlohmann::ordered_json rep =
        nlohmann::ordered_json::parse(slurp("cli_out_scan/report.json"));
    CHECK(rep.at("points").size() == 3);
    CHECK(rep.at("failed_points").get<int>() == 0);
    for (const auto& row : rep.at("points"))
        CHECK(row.at("affine_residual").get<double>() <= 1e-12);
    const std::string csv = slurp("cli_out_scan/scan.csv");
    CHECK(csv.find("kappa,max_drift,affine_residual") == 0);
}
