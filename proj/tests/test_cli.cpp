#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "roadfield_cli_test";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int cli(const std::string& args) {
    const std::string cmd = std::string(ROADFIELD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("speed subcommand writes the expected row") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "speed.conf";
    put(cfg, "[model]\nd = 1\nD = 2\nmu = 1\nnu = 1\nq = 0\n[road]\nkind = zero\n");
    const fs::path out = kWork / "speed_out";
    REQUIRE(cli("speed --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string csv = slurp(out / "speed.csv");
    CHECK(csv ==
          "d,D,mu,nu,q,fp0,gp0,direction,w_star,at_kpp,beta_star,alpha_star\n"
          "1,2,1,1,0,1,0,1,2,true,nan,nan\n");
}

TEST_CASE("bad config exits with the config code") {
    const fs::path cfg = kWork / "bad.conf";
    fs::create_directories(kWork);
    put(cfg, "[model]\nd = -1\n");
    CHECK(cli("speed --config " + cfg.string() + " --out " + kWork.string()) == 2);
    CHECK(cli("speed --config " + (kWork / "missing.conf").string()) == 2);
    CHECK(cli("nosuchcommand") == 2);
}

TEST_CASE("sweep output is byte-identical across runs and worker counts") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "sweep.conf";
    put(cfg,
        "[road]\nkind = mortality\nrho = 0.5\n"
        "[sweep]\nD = 0.5:3:6\nq = -1:1:3\nseed = 7\n");
    const fs::path o1 = kWork / "sweep1";
    const fs::path o2 = kWork / "sweep2";
    REQUIRE(cli("sweep --config " + cfg.string() + " --out " + o1.string() +
                " --workers 1") == 0);
    REQUIRE(cli("sweep --config " + cfg.string() + " --out " + o2.string() +
                " --workers 4") == 0);
    CHECK(slurp(o1 / "sweep.csv") == slurp(o2 / "sweep.csv"));
    REQUIRE(cli("sweep --config " + cfg.string() + " --out " + o2.string() +
                " --workers 4") == 0);
    CHECK(slurp(o1 / "sweep.csv") == slurp(o2 / "sweep.csv"));  // rerun: same bytes
}

TEST_CASE("thresholds boundary flip lands at D = 3 for unit mortality") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "thr.conf";
    put(cfg, "[road]\nkind = mortality\nrho = 1\n[sweep]\nD = 1:4:13\n");
    const fs::path out = kWork / "thr_out";
    REQUIRE(cli("thresholds --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string csv = slurp(out / "thresholds.csv");
    CHECK(csv.find("1,3,1,1,0,1,-1,1,3,3,true") != std::string::npos);
    CHECK(csv.find("1,3.25,1,1,0,1,-1,1,3.25,3,false") != std::string::npos);
}

TEST_CASE("stationary, limits and geometry artifacts") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "stat.conf";
    put(cfg, "[model]\nd = 1\nD = 3\nmu = 1\nnu = 1\n[road]\nkind = mortality\nrho = 1\n");
    const fs::path out = kWork / "stat_out";
    REQUIRE(cli("stationary --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string stat = slurp(out / "stationary.csv");
    CHECK(stat.find("U,V0,V_prime_0,converged,minimal_candidate\n") == 0);
    CHECK(stat.find("0.31750042677") != std::string::npos);
    CHECK(stat.find("\ny,V\n") != std::string::npos);

    REQUIRE(cli("limits --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string lim = slurp(out / "limits.csv");
    CHECK(lim.find("d,mu,nu,fp0,gp0,h,k\n") == 0);

    // enhanced regime (threshold 2 + rho = 2.5 < D) so all three plots exist
    const fs::path gcfg = kWork / "geom.conf";
    put(gcfg, "[model]\nd = 1\nD = 3\nmu = 1\nnu = 1\n[road]\nkind = mortality\nrho = 0.5\n");
    REQUIRE(cli("geometry --config " + gcfg.string() + " --out " + out.string()) == 0);
    const std::string at = slurp(out / "geometry_at.svg");
    const std::string above = slurp(out / "geometry_above.svg");
    const std::string below = slurp(out / "geometry_below.svg");
    CHECK(at.find("<svg") == 0);
    CHECK(at.find("id=\"contact\"") != std::string::npos);     // tangency marker
    CHECK(above.find("id=\"overlap\"") != std::string::npos);  // open overlap region
    CHECK(below.find("id=\"overlap\"") == std::string::npos);  // disjoint below w*
    CHECK(below.find("id=\"gamma\"") != std::string::npos);
}

TEST_CASE("simulate on a toy grid") {
    fs::create_directories(kWork);
    const fs::path cfg = kWork / "sim.conf";
    put(cfg,
        "[model]\nd = 1\nD = 1\nmu = 1\nnu = 1\nq = 0\n"
        "[road]\nkind = zero\n"
        "[grid]\nLx = 20\nLy = 8\ndx = 0.5\ndy = 0.5\nT = 4\nrecord_dt = 0.5\n"
        "snapshots = 2\n");
    const fs::path out = kWork / "sim_out";
    REQUIRE(cli("simulate --config " + cfg.string() + " --out " + out.string()) == 0);
    const std::string ts = slurp(out / "timeseries.csv");
    CHECK(ts.find("t,x_front_plus,x_front_minus,u_max,mass\n") == 0);
    size_t lines = 0;
    for (char ch : ts)
        if (ch == '\n') ++lines;
    CHECK(lines >= 9);
    CHECK(fs::exists(out / "snapshot_t2.csv"));
    const std::string snap = slurp(out / "snapshot_t2.csv");
    CHECK(snap.find("x,y,v\n") == 0);
}
