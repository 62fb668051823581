#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kCli = ADREG_CLI_PATH;
const fs::path kScenarios = ADREG_SCENARIO_DIR;

fs::path work_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / "adreg_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cmd(const std::string& args, const fs::path& capture = {}) {
    std::string cmd = kCli + " " + args;
    if (!capture.empty()) cmd += " > " + capture.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    REQUIRE(f.good());
    f << text;
}

}  // namespace

TEST_CASE("run subcommand produces trajectory and summary") {
    const auto out = work_dir("run_ok");
    const int rc = run_cmd("run " + (kScenarios / "example_rho02.cfg").string() + " --out " +
                           out.string());
    CHECK(rc == 0);

    const std::string csv = slurp(out / "trajectory.csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "t,w1,w2,z1,z2,x,eta_1,eta_2,theta_hat_1,xi_hat_1,xi_hat_2,sigma_hat,u,y_e");
    CHECK(std::count(csv.begin(), csv.end(), '\n') > 100);

    const auto j = json::parse(slurp(out / "summary.json"));
    CHECK(j["model"] == "example");
    CHECK(j["rho"] == 0.2);
    CHECK(j["diverged"] == false);
    CHECK(j["verdicts"]["output_ok"] == true);
    CHECK(j["verdicts"]["param_ok"] == true);
    CHECK(j["final_output_error"].get<double>() < 1e-2);
    CHECK(std::abs(j["theta_hat_final"][0].get<double>() - 0.2) < 5e-2);
    CHECK(j["resolved"].contains("sat_levels"));

    SUBCASE("summary round-trips byte-identically through the same serializer") {
        const std::string text = slurp(out / "summary.json");
        CHECK(json::parse(text).dump(2) + "\n" == text);
    }
}

TEST_CASE("run accepts overrides and the seedless flag") {
    const auto out = work_dir("run_override");
    const int rc = run_cmd("--seedless run " + (kScenarios / "example_rho02.cfg").string() +
                           " --out " + out.string() + " --dt 2e-4 --t-final 5");
    CHECK(rc == 0);
    const auto j = json::parse(slurp(out / "summary.json"));
    CHECK(j["dt_used"] == 2e-4);
    CHECK(j["stop_time"] == 5.0);
}

TEST_CASE("determinism across repeated invocations") {
    const auto out1 = work_dir("det1");
    const auto out2 = work_dir("det2");
    const std::string base = "run " + (kScenarios / "example_rho02.cfg").string() +
                             " --t-final 5 --out ";
    REQUIRE(run_cmd(base + out1.string()) == 0);
    REQUIRE(run_cmd(base + out2.string()) == 0);
    CHECK(slurp(out1 / "trajectory.csv") == slurp(out2 / "trajectory.csv"));
    CHECK(slurp(out1 / "summary.json") == slurp(out2 / "summary.json"));
}

TEST_CASE("configuration errors exit with code 2") {
    const auto out = work_dir("cfg_err");
    CHECK(run_cmd("run /nonexistent.cfg --out " + out.string(), out / "log.txt") == 2);
    CHECK(run_cmd("run " + (kScenarios / "example_unstable_gains.cfg").string() + " --out " +
                      out.string(),
                  out / "log2.txt") == 2);
    CHECK(slurp(out / "log2.txt").find("configuration error") != std::string::npos);

    const auto bad = out / "bad.cfg";
    write_file(bad, "not a key value line\n");
    CHECK(run_cmd("run " + bad.string() + " --out " + out.string(), out / "log3.txt") == 2);

    // CLI misuse (missing required subcommand/options) is a config error too
    CHECK(run_cmd("", out / "log4.txt") == 2);
    CHECK(run_cmd("run", out / "log5.txt") == 2);
}

TEST_CASE("runtime divergence exits with code 3") {
    const auto out = work_dir("diverge");
    const auto cfg = out / "no_stabilizer.cfg";
    write_file(cfg, "model = example\nrho = 0.2\nkappa = 0\nt_final = 20\n");
    const int rc = run_cmd("run " + cfg.string() + " --out " + out.string(), out / "log.txt");
    CHECK(rc == 3);
}

TEST_CASE("check subcommand reports every assumption") {
    const auto out = work_dir("check");
    const int rc = run_cmd("check " + (kScenarios / "example_rho02.cfg").string(),
                           out / "log.txt");
    CHECK(rc == 0);
    const std::string log = slurp(out / "log.txt");
    for (const char* name : {"monotonicity", "persistent_excitation", "attractor_bound",
                             "b_lower_bound", "immersion_identity"}) {
        CHECK(log.find(name) != std::string::npos);
    }
    CHECK(log.find("[FAIL]") == std::string::npos);
    CHECK(run_cmd("check /nonexistent.cfg", out / "log2.txt") == 2);
}

TEST_CASE("sweep subcommand") {
    const auto out = work_dir("sweep");
    SUBCASE("rho sweep writes one row per value") {
        const int rc = run_cmd("sweep " + (kScenarios / "example_rho02.cfg").string() +
                               " --param rho --values -0.2,0,0.2 --out " + out.string() +
                               " --t-final 10");
        CHECK(rc == 0);
        const std::string csv = slurp(out / "sweep.csv");
        CHECK(csv.substr(0, csv.find('\n')) ==
              "rho,final_output_error,output_settle_time,final_param_error,diverged,stop_time,"
              "error");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    }
    SUBCASE("unknown parameter is rejected before any run") {
        const int rc = run_cmd("sweep " + (kScenarios / "example_rho02.cfg").string() +
                                   " --param bogus --values 1,2 --out " + out.string(),
                               out / "log.txt");
        CHECK(rc == 2);
        CHECK(!fs::exists(out / "sweep.csv"));
    }
}
