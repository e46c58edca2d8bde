#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "preypred/cli.hpp"
#include "preypred/errors.hpp"

using namespace preypred;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const char* name) {
    return std::string("preypred_test_") + name + ".csv";
}

} // namespace

TEST_CASE("simulate writes a well-formed file for every integrator") {
    for (const char* integrator : {"ode", "diffusion", "jump", "hybrid"}) {
        cli::RunConfig cfg;
        cfg.integrator = integrator;
        cfg.params.omega = 1e4; // keep the jump cheap
        cfg.horizon = 0.5;
        cfg.sample_stride = 0.1;
        cfg.init_x = 0.2;
        cfg.init_y = 0.6;
        cfg.out = tmp_path(integrator);
        if (cfg.integrator == "hybrid") cfg.hybrid_threshold = 100.0;
        CHECK(cli::run_simulate(cfg) == 0);
        const auto text = slurp(cfg.out);
        CHECK(text.rfind("# preypred simulate", 0) == 0);
        CHECK(text.find("t,x,y,xi\n") != std::string::npos);
        CHECK(text.find("run_footer") != std::string::npos);
        std::remove(cfg.out.c_str());
    }
}

TEST_CASE("unknown integrator and missing hybrid threshold are validation errors") {
    cli::RunConfig cfg;
    cfg.integrator = "rk4";
    CHECK_THROWS_AS((void)cli::run_simulate(cfg), ValidationError);
    cfg.integrator = "hybrid";
    cfg.out = tmp_path("none");
    CHECK_THROWS_AS((void)cli::run_simulate(cfg), ValidationError);
}

TEST_CASE("table1 reruns are byte-identical") {
    cli::RunConfig cfg;
    cfg.n_runs = 10;
    cfg.horizon = 200.0;
    cfg.seed = 99;
    cfg.out = tmp_path("t1a");
    cfg.jsonl_out = tmp_path("t1a_jsonl");
    const std::vector<double> omegas{1e5};
    CHECK(cli::run_table1(cfg, omegas) == 0);
    const auto a = slurp(cfg.out);
    const auto ja = slurp(cfg.jsonl_out);

    cfg.out = tmp_path("t1b");
    cfg.jsonl_out = tmp_path("t1b_jsonl");
    CHECK(cli::run_table1(cfg, omegas) == 0);
    CHECK(slurp(cfg.out) == a);
    CHECK(slurp(cfg.jsonl_out) == ja);
    CHECK(a.find("100000,10,1,") != std::string::npos);

    std::remove(tmp_path("t1a").c_str());
    std::remove(tmp_path("t1b").c_str());
    std::remove(tmp_path("t1a_jsonl").c_str());
    std::remove(tmp_path("t1b_jsonl").c_str());
}

TEST_CASE("table2 marks an out-of-range omega and still succeeds") {
    cli::RunConfig cfg;
    cfg.out = tmp_path("t2");
    const std::vector<double> omegas{1000.0}; // alpha = 1 >= x*
    CHECK(cli::run_table2(cfg, omegas) == 0);
    const auto text = slurp(cfg.out);
    CHECK(text.find("1000,error,error,error,error,error\n") != std::string::npos);
    std::remove(cfg.out.c_str());
}

TEST_CASE("compare emits one row per omega and checkpoint") {
    cli::RunConfig cfg;
    cfg.n_runs = 5;
    cfg.horizon = 2.0;
    cfg.init_x = 0.2;
    cfg.init_y = 0.6;
    cfg.out = tmp_path("cmp");
    CHECK(cli::run_compare(cfg, {1e4}, {1.0, 2.0}) == 0);
    const auto text = slurp(cfg.out);
    int rows = 0;
    for (std::size_t pos = 0; (pos = text.find("\n10000,", pos)) != std::string::npos; ++pos)
        ++rows;
    CHECK(rows == 2);
    std::remove(cfg.out.c_str());
}

TEST_CASE("seasonal runs the cosine schedule per omega") {
    cli::RunConfig cfg;
    cfg.horizon = 2.0;
    cfg.sample_stride = 0.5;
    cfg.out = tmp_path("sea");
    CHECK(cli::run_seasonal(cfg, {1e12}) == 0);
    const std::string path = "preypred_test_sea_omega1000000000000.csv";
    const auto text = slurp(path);
    CHECK(text.find("t,x_ode,y_ode,x_diff,y_diff\n") != std::string::npos);
    CHECK(text.find("m_a0=0.61750000000000005") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("canard rejects a one-sided bracket") {
    cli::RunConfig cfg;
    cfg.out = tmp_path("can");
    CHECK_THROWS_AS((void)cli::run_canard(cfg, 0.60, 0.61), BracketError);
}

TEST_CASE("binary exit codes") {
    const std::string bin = PREYPRED_CLI_BIN;
    auto run = [&](const std::string& args) {
        const int rc = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(rc);
    };
    const std::string out = tmp_path("exitcodes");
    CHECK(run("simulate --integrator ode --horizon 0.1 --out " + out) == 0);
    CHECK(run("simulate --integrator rk4 --horizon 0.1 --out " + out) == 1);      // validation
    CHECK(run("simulate --integrator ode --omega 1.5 --out " + out) == 1);        // bad params
    CHECK(run("canard --m-lo 0.60 --m-hi 0.61 --out " + out) == 1);               // bad bracket
    CHECK(run("simulate --integrator jump --omega 1e8 --horizon 10 --budget 1000 --out " + out) ==
          2); // event budget (numeric)
    CHECK(run("simulate --integrator ode --horizon 0.1 --out /nonexistent_dir/x.csv") == 3);
    std::remove(out.c_str());
}
