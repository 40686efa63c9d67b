#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "slicemkt/sweep.hpp"
#include "slicemkt/svg.hpp"

using namespace slicemkt;

namespace {

std::string run_to_string(const SweepSpec& spec) {
    std::ostringstream os;
    run_sweep(spec, os);
    return os.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

int count_lines(const std::string& s) {
    int n = 0;
    for (char ch : s)
        if (ch == '\n') ++n;
    return n;
}

#ifdef SLICEMKT_CLI_PATH
int run_cli(const std::string& args, const std::string& out_file) {
    const std::string cmd =
        std::string(SLICEMKT_CLI_PATH) + " " + args + " >" + out_file + " 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
#endif

}  // namespace

TEST_CASE("paper defaults") {
    const auto [q, m] = defaults();
    CHECK(m.c == 1.0);
    CHECK(q.mu == 1.0);
    CHECK(q.lambda_d == 0.01);
}

TEST_CASE("baseline sweep schema and content") {
    SweepSpec spec;
    std::tie(spec.queue, spec.market) = defaults();
    spec.kind = SweepKind::baseline;
    spec.alpha1s = {0.2, 0.6, 1.0};
    const std::string out = run_to_string(spec);
    CHECK(first_line(out) == "c,mu,lambda_d,alpha1,p1_star,n1_star,pi0_star,status");
    CHECK(count_lines(out) == 4);
    CHECK(out.find("ok") != std::string::npos);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
    SweepSpec spec;
    std::tie(spec.queue, spec.market) = defaults();
    spec.kind = SweepKind::monopolistic;
    spec.gammas = {0.1, 0.3, 0.5};
    spec.alpha2s = {0.4, 0.8};
    spec.threads = 1;
    const std::string a = run_to_string(spec);
    spec.threads = 4;
    const std::string b = run_to_string(spec);
    REQUIRE(a == b);
    CHECK(first_line(a) ==
          "c,mu,lambda_d,alpha1,gamma,alpha2,p1_star,p2_star,n1_star,n2_star,case,"
          "pi_m_star,status");
    CHECK(count_lines(a) == 7);

    SweepSpec sim_spec;
    std::tie(sim_spec.queue, sim_spec.market) = defaults();
    sim_spec.kind = SweepKind::sim;
    sim_spec.queue.lambda_d = 0.3;
    sim_spec.gammas = {0.0};
    sim_spec.load = Load{1.0, 1.0};
    sim_spec.departures = 5000;
    sim_spec.replications = 3;
    sim_spec.seed = 99;
    const std::string s1 = run_to_string(sim_spec);
    const std::string s2 = run_to_string(sim_spec);
    REQUIRE(s1 == s2);
    CHECK(first_line(s1) ==
          "replication,mean_T1,mean_T2,analytic_T1,analytic_T2,rel_err_T1,rel_err_T2");
    CHECK(count_lines(s1) == 1 + 3 + 1); // header + replications + summary
    CHECK(s1.find("summary") != std::string::npos);
}

TEST_CASE("strategic sweep schema") {
    SweepSpec spec;
    std::tie(spec.queue, spec.market) = defaults();
    spec.kind = SweepKind::strategic;
    spec.gammas = {0.2};
    spec.alpha2s = {0.6};
    spec.deltas = {0.15};
    const std::string out = run_to_string(spec);
    CHECK(first_line(out) ==
          "c,mu,lambda_d,alpha1,gamma,alpha2,p1_star,p2_star,n1_star,n2_star,case,delta,"
          "pi1_star,pi2_star,converged,pset_lo1,pset_hi1,pset_lo2,pset_hi2,status");
    CHECK(count_lines(out) == 2);
    CHECK(out.find(",ok") != std::string::npos);
}

TEST_CASE("feasibility sweep schema") {
    SweepSpec spec;
    std::tie(spec.queue, spec.market) = defaults();
    spec.kind = SweepKind::feasibility;
    spec.gammas = {0.2};
    spec.alpha2s = {0.6};
    spec.deltas = {0.15};
    const std::string out = run_to_string(spec);
    CHECK(first_line(out) ==
          "c,mu,lambda_d,alpha1,gamma,alpha2,delta,pi0_star,pi_m_star,pi1_star,pi2_star,"
          "monopolistic_feasible,strategic_feasible,lump_lo,lump_hi,"
          "n_total_monopolistic,n_total_strategic,strat_exceeds,status");
    CHECK(count_lines(out) == 2);
}

TEST_CASE("regionmap sweep matches the solver cell by cell") {
    SweepSpec spec;
    std::tie(spec.queue, spec.market) = defaults();
    spec.kind = SweepKind::regionmap;
    spec.gammas = {0.1};
    spec.alpha1s = {0.8};
    spec.alpha2s = {0.8};
    for (int i = 0; i <= 12; ++i) {
        spec.p1_grid.push_back(1.2 * i / 12.0);
        spec.p2_grid.push_back(1.2 * i / 12.0);
    }
    const std::string out = run_to_string(spec);
    CHECK(first_line(out) == "p1,p2,case,n1,n2");
    CHECK(count_lines(out) == 1 + 13 * 13);

    QueueConfig q = spec.queue;
    q.gamma = 0.1;
    MarketParams m = spec.market;
    m.alpha1 = 0.8;
    m.alpha2 = 0.8;
    // Spot-check one coexistence row against wardrop_duopoly.
    const WardropOutcome w = wardrop_duopoly(q, m, PricePair{0.5, 0.2});
    std::ostringstream expect;
    expect << "0.5,0.2," << to_string(w.which) << ",";
    CHECK(out.find(expect.str()) != std::string::npos);
}

TEST_CASE("sweep spec validation") {
    SweepSpec spec;
    std::tie(spec.queue, spec.market) = defaults();
    spec.kind = SweepKind::monopolistic; // missing axes
    std::ostringstream os;
    CHECK_THROWS_AS(run_sweep(spec, os), InvalidConfig);
    spec.kind = SweepKind::regionmap;
    CHECK_THROWS_AS(run_sweep(spec, os), InvalidConfig);
}

#ifdef SLICEMKT_CLI_PATH

TEST_CASE("cli: wardrop eval round trip") {
    const std::string out_file = "cli_eval_out.txt";
    const int rc = run_cli("eval --scenario wardrop --gamma 0.1 --alpha1 0.8 --alpha2 0.8 "
                           "--p1 0.5 --p2 0.25",
                           out_file);
    REQUIRE(rc == 0);
    const std::string out = slurp(out_file);
    CHECK(out.find(",I,") != std::string::npos);
    CHECK(out.find("53.05960157") != std::string::npos);
    std::remove(out_file.c_str());
}

TEST_CASE("cli: invalid specs exit with code 2") {
    CHECK(run_cli("sweep --scenario bogus", "cli_err1.txt") == 2);
    CHECK(run_cli("eval --scenario baseline --alpha1 1.5", "cli_err2.txt") == 2);
    CHECK(run_cli("sweep --scenario regionmap --p-grid 1:0:-1", "cli_err3.txt") == 2);
    std::remove("cli_err1.txt");
    std::remove("cli_err2.txt");
    std::remove("cli_err3.txt");
}

TEST_CASE("cli: unstable simulation exits with code 4") {
    const int rc = run_cli("sim --lambda-d 0.3 --n1 4 --n2 0 --departures 1000", "cli_err4.txt");
    CHECK(rc == 4);
    std::remove("cli_err4.txt");
}

TEST_CASE("cli: a point with no pure equilibrium is flushed with a status and exit 3") {
    // This parameter point sits on a best-response discontinuity seam where
    // no pure-strategy equilibrium survives the deviation audit.
    const std::string out_file = "cli_noeq.csv";
    const int rc = run_cli("sweep --scenario strategic --gamma 0.02 --alpha2 0.4 "
                           "--delta 0.1 -o " + out_file,
                           "cli_noeq.log");
    CHECK(rc == 3);
    const std::string out = slurp(out_file);
    CHECK(count_lines(out) == 2); // header + the flushed row
    CHECK(out.find("no_equilibrium") != std::string::npos);
    const std::string log = slurp("cli_noeq.log");
    CHECK(log.find("error code=3") != std::string::npos);
    std::remove(out_file.c_str());
    std::remove("cli_noeq.log");
}

TEST_CASE("cli: single-point feasibility report") {
    const std::string out_file = "cli_feas.csv";
    const int rc = run_cli("feasibility --gamma 0.2 --alpha2 0.6 --delta 0.15 -o " + out_file,
                           out_file + ".log");
    REQUIRE(rc == 0);
    const std::string out = slurp(out_file);
    CHECK(first_line(out).rfind("c,mu,lambda_d,alpha1,gamma,alpha2,delta,pi0_star", 0) == 0);
    CHECK(count_lines(out) == 2);
    CHECK(out.find(",ok") != std::string::npos);
    std::remove(out_file.c_str());
    std::remove((out_file + ".log").c_str());
}

TEST_CASE("cli: baseline sweep renders a line SVG") {
    const int rc = run_cli("sweep --scenario baseline --alpha1 0.2:1:0.2 "
                           "-o cli_base.csv --svg cli_base.svg",
                           "cli_base.log");
    REQUIRE(rc == 0);
    const std::string svgtext = slurp("cli_base.svg");
    CHECK(svgtext.find("<polyline") != std::string::npos);
    std::remove("cli_base.csv");
    std::remove("cli_base.svg");
    std::remove("cli_base.log");
}

TEST_CASE("cli: sim validation run against the strict-priority closed forms") {
    const std::string out_file = "cli_sim_out.csv";
    const int rc = run_cli("sim --gamma 0 --n1 1 --n2 1 --lambda-d 0.3 "
                           "--departures 20000 --replications 4 --seed 5 -o " +
                               out_file,
                           out_file + ".log");
    REQUIRE(rc == 0);
    const std::string out = slurp(out_file);
    CHECK(first_line(out) ==
          "replication,mean_T1,mean_T2,analytic_T1,analytic_T2,rel_err_T1,rel_err_T2");
    CHECK(out.find("summary") != std::string::npos);
    CHECK(out.find("1.42857") != std::string::npos); // analytic T1 = 10/7
    std::remove(out_file.c_str());
    std::remove((out_file + ".log").c_str());
}

TEST_CASE("cli: regionmap with SVG rendering") {
    const int rc = run_cli("regionmap --gamma 0.1 --alpha1 0.8 --alpha2 0.8 "
                           "--p-grid 0:1.2:0.1 -o cli_rm.csv --svg cli_rm.svg",
                           "cli_rm.log");
    REQUIRE(rc == 0);
    const std::string csvtext = slurp("cli_rm.csv");
    CHECK(first_line(csvtext) == "p1,p2,case,n1,n2");
    const std::string svgtext = slurp("cli_rm.svg");
    CHECK(svgtext.find("<svg") != std::string::npos);
    std::remove("cli_rm.csv");
    std::remove("cli_rm.svg");
    std::remove("cli_rm.log");
}

TEST_CASE("cli: config file mirrors flags, flags win") {
    {
        std::ofstream cfg("cli_cfg.ini");
        cfg << "gamma=0.1\nalpha1=0.8\nalpha2=0.8\np1=0.5\np2=0.25\nscenario=wardrop\n";
    }
    const int rc = run_cli("eval --config cli_cfg.ini --p2 0.5", "cli_cfg_out.txt");
    REQUIRE(rc == 0);
    const std::string out = slurp("cli_cfg_out.txt");
    CHECK(out.find(",II,") != std::string::npos); // flag override pushed p2 above the band
    std::remove("cli_cfg.ini");
    std::remove("cli_cfg_out.txt");
}

#endif // SLICEMKT_CLI_PATH
