#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "hcn/runconfig.hpp"

using namespace hcn;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(HCN_CLI_PATH) + " " + args + " >/tmp/hcn_cli_out.txt 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("config: unknown keys are hard errors with the key name") {
    write_file("/tmp/hcn_bad.json", "{\"lambda_m\": 1e-4, \"bogus_key\": 3}\n");
    CHECK_THROWS_WITH_AS(RunConfig::from_file("/tmp/hcn_bad.json"),
                         doctest::Contains("bogus_key"), ConfigError);
    const int rc = run_cli("sample --config /tmp/hcn_bad.json --out /tmp/hcn_x.csv");
    CHECK(rc == 2);
    CHECK(slurp("/tmp/hcn_cli_out.txt").find("bogus_key") != std::string::npos);
}

TEST_CASE("config: type errors and dB conversion at the boundary") {
    write_file("/tmp/hcn_bad2.json", "{\"lambda_m\": \"high\"}\n");
    CHECK_THROWS_AS(RunConfig::from_file("/tmp/hcn_bad2.json"), ConfigError);
    auto cfg = RunConfig::from_json({{"P_m_dbm", 30.0}, {"beta_m_db", 0.0}});
    const RadioParams r = cfg.radio();
    CHECK(r.power_mbs == doctest::Approx(1.0));  // 30 dBm = 1 W
    CHECK(r.beta_m == doctest::Approx(1.0));     // 0 dB
}

TEST_CASE("config: model construction per variant") {
    auto cfg = RunConfig::from_file(std::string(HCN_CONFIG_DIR) + "/fig3.json");
    const HcnModel ppp = cfg.model_as(SbsVariant::PPP);
    CHECK(ppp.sbs_density() == doctest::Approx(1.2e-4));
    const HcnModel mcp = cfg.model_as(SbsVariant::MCP);
    CHECK(mcp.sbs_density() == doctest::Approx(1.2e-4));
    const HcnModel socp = cfg.model_as(SbsVariant::SOCP);
    CHECK(socp.mbs_density == doctest::Approx(7.96e-6));
    CHECK(socp.sbs_density() == doctest::Approx(7.96e-6 * 45.0));
}

TEST_CASE("sha256 known vectors") {
    CHECK(sha256_hex("", 0) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc", 3) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("sample command writes a pattern, a manifest, and is replayable") {
    const std::string cfg = std::string(HCN_CONFIG_DIR) + "/fig1_mcp.json";
    REQUIRE(run_cli("sample --config " + cfg + " --out /tmp/hcn_fig1.csv") == 0);
    const std::string first = slurp("/tmp/hcn_fig1.csv");
    CHECK(first.rfind("x,y,tier,parent_id,first_order_id\n", 0) == 0);
    CHECK(first.find("MBS") != std::string::npos);
    CHECK(first.find("SBS") != std::string::npos);

    const RunManifest man = RunManifest::from_file("/tmp/hcn_fig1.csv.manifest.json");
    CHECK(man.command == "sample");
    REQUIRE(man.outputs.size() == 1);
    CHECK(man.outputs[0].sha256 == sha256_file("/tmp/hcn_fig1.csv"));

    REQUIRE(run_cli("replay /tmp/hcn_fig1.csv.manifest.json") == 0);
    CHECK(slurp("/tmp/hcn_fig1.csv") == first);
}

TEST_CASE("zeta-sweep: identical seeds give identical bytes, c=0 collapses to ppp") {
    write_file("/tmp/hcn_zeta.json",
               "{\"lambda_M0\":0.1,\"R_M\":5,\"alpha\":4,\"eps\":0.01,"
               "\"c_grid\":[0,3],\"u_grid\":[0,2],\"trials\":1000,\"seed\":7}\n");
    REQUIRE(run_cli("zeta-sweep --config /tmp/hcn_zeta.json --out /tmp/hcn_zeta1.csv") == 0);
    REQUIRE(run_cli("zeta-sweep --config /tmp/hcn_zeta.json --out /tmp/hcn_zeta2.csv") == 0);
    const std::string a = slurp("/tmp/hcn_zeta1.csv");
    CHECK(a == slurp("/tmp/hcn_zeta2.csv"));
    CHECK(a.rfind("method,u,c,R,alpha,eps,zeta,F,theta,theta_prime,stderr\n", 0) == 0);

    // c = 0 rows: the cluster coefficient equals the PPP one
    std::istringstream lines(a);
    std::string line;
    double zeta_ppp_u0 = -1.0, zeta_cluster_u0 = -2.0;
    while (std::getline(lines, line)) {
        std::istringstream f(line);
        std::string method, u, c, R, al, ep, zeta;
        std::getline(f, method, ',');
        std::getline(f, u, ',');
        std::getline(f, c, ',');
        std::getline(f, R, ',');
        std::getline(f, al, ',');
        std::getline(f, ep, ',');
        std::getline(f, zeta, ',');
        if (u == "0" && c == "0" && method == "ppp") zeta_ppp_u0 = std::stod(zeta);
        if (u == "0" && c == "0" && method == "cluster-exact") zeta_cluster_u0 = std::stod(zeta);
    }
    CHECK(zeta_ppp_u0 == doctest::Approx(zeta_cluster_u0).epsilon(1e-12));
}

TEST_CASE("bounds command emits the jsp csv schema") {
    write_file("/tmp/hcn_b.json",
               "{\"lambda_m\":7.96e-6,\"lambda_P\":1.2e-4,\"lambda_M0\":4e-5,\"c_M\":3,"
               "\"R_M\":10,\"lambda_S0\":7.96e-6,\"c_S1\":15,\"R_S1\":90,\"sigma\":50,"
               "\"c_S\":3,\"R_S\":10,\"beta_db_grid\":[-2,2],\"n_grid\":[1],\"seed\":3}\n");
    REQUIRE(run_cli("bounds --config /tmp/hcn_b.json --out /tmp/hcn_b.csv") == 0);
    const std::string text = slurp("/tmp/hcn_b.csv");
    CHECK(text.rfind("user,model,n,beta_db,value,lower,upper,method\n", 0) == 0);
    CHECK(text.find("MU,PPP,1,-2") != std::string::npos);
    CHECK(text.find("SU,SOCP,1,2") != std::string::npos);
}

TEST_CASE("validate subcommand runs the selected criterion exactly once") {
    REQUIRE(run_cli("validate --only A11") == 0);
    const std::string out = slurp("/tmp/hcn_cli_out.txt");
    CHECK(out.find("A11 PASS") != std::string::npos);
    CHECK(out.find("VALIDATE PASS") != std::string::npos);
    // exactly one line mentions A11
    std::istringstream lines(out);
    std::string line;
    int count = 0;
    while (std::getline(lines, line))
        if (line.rfind("A11 ", 0) == 0) ++count;
    CHECK(count == 1);
}

TEST_CASE("validate negative control: a density nudge trips the interference criterion") {
    const int rc = run_cli("validate --only A5 --trials-scale 0.2 --nudge-density 1.15");
    CHECK(rc == 1);
    const std::string out = slurp("/tmp/hcn_cli_out.txt");
    CHECK(out.find("A5 FAIL") != std::string::npos);
}
