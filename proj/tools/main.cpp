#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "preypred/cli.hpp"
#include "preypred/config.hpp"
#include "preypred/errors.hpp"

namespace {

using preypred::cli::RunConfig;

// Model/run flags shared by every subcommand. Flags override file values.
struct Flags {
    std::string params_file;
    double r = 0, K = 0, a = 0, eps = 0, omega = 0, m = 0;
    double m_a0 = 0, m_b0 = 0, m_rate = 0;
    CLI::App* cmd = nullptr;

    void attach(CLI::App* app, RunConfig& cfg) {
        cmd = app;
        app->add_option("--params", params_file, "model config file (key = value lines)");
        app->add_option("--r", r, "prey growth coefficient");
        app->add_option("--K", K, "prey carrying capacity");
        app->add_option("--a", a, "functional-response half-saturation");
        app->add_option("--eps", eps, "time-scale separation");
        app->add_option("--omega", omega, "individuals per prey unit");
        app->add_option("--m", m, "constant predator mortality");
        app->add_option("--m-a0", m_a0, "cosine mortality offset");
        app->add_option("--m-b0", m_b0, "cosine mortality amplitude");
        app->add_option("--m-rate", m_rate, "cosine mortality angular rate");

        app->add_option("--dt", cfg.dt, "integrator time step");
        app->add_option("--horizon", cfg.horizon, "run duration");
        app->add_option("--stride", cfg.sample_stride, "sampling stride");
        app->add_option("--seed", cfg.seed, "master seed");
        app->add_option("--runs", cfg.n_runs, "ensemble size");
        app->add_option("--init-x", cfg.init_x, "initial prey concentration");
        app->add_option("--init-y", cfg.init_y, "initial predator concentration");
        app->add_option("--noise-scale", cfg.noise_scale, "noise multiplier (0 = deterministic)");
        app->add_option("--budget", cfg.event_budget, "jump event budget per run");
        app->add_option("--out", cfg.out, "output file ('-' = stdout)");
        app->add_option("--jsonl", cfg.jsonl_out, "JSON-lines sidecar for summary records");
    }

    void resolve(RunConfig& cfg) const {
        if (!params_file.empty()) cfg.params = preypred::load_params_file(params_file);
        auto given = [&](const std::string& name) { return cmd->count(name) > 0; };
        if (given("--r")) cfg.params.r = r;
        if (given("--K")) cfg.params.K = K;
        if (given("--a")) cfg.params.a = a;
        if (given("--eps")) cfg.params.eps = eps;
        if (given("--omega")) cfg.params.omega = omega;
        const bool has_cos = given("--m-a0") || given("--m-b0") || given("--m-rate");
        if (given("--m") && has_cos)
            throw preypred::ValidationError("--m conflicts with --m-a0/--m-b0/--m-rate");
        if (given("--m")) {
            cfg.params.mortality = preypred::MortalitySchedule::constant(m);
        } else if (has_cos) {
            if (!(given("--m-a0") && given("--m-b0") && given("--m-rate")))
                throw preypred::ValidationError("cosine mortality needs --m-a0, --m-b0 and --m-rate");
            cfg.params.mortality = preypred::MortalitySchedule::cosine(m_a0, m_b0, m_rate);
        }
        cfg.params.validate();
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prey-predator birth-death / diffusion / ODE simulation toolkit"};
    app.require_subcommand(1);

    RunConfig sim_cfg, t1_cfg, t2_cfg, can_cfg, cmp_cfg, sea_cfg;
    Flags sim_flags, t1_flags, t2_flags, can_flags, cmp_flags, sea_flags;

    auto* sim = app.add_subcommand("simulate", "one trajectory to CSV");
    sim_flags.attach(sim, sim_cfg);
    sim->add_option("--integrator", sim_cfg.integrator, "jump | diffusion | hybrid | ode");
    double threshold = 0.0;
    auto* thr_opt = sim->add_option("--threshold", threshold, "hybrid hand-off prey count");

    auto* t1 = app.add_subcommand("table1", "extinction probabilities per omega");
    t1_cfg.horizon = 1000.0;
    t1_flags.attach(t1, t1_cfg);
    std::vector<double> t1_omegas{1e5, 1e6, 1e7, 2e7};
    t1->add_option("--omegas", t1_omegas, "omega grid");

    auto* t2 = app.add_subcommand("table2", "funnel width per omega");
    t2_flags.attach(t2, t2_cfg);
    std::vector<double> t2_omegas{1e9, 1e8, 1e7, 1e6};
    t2->add_option("--omegas", t2_omegas, "omega grid");

    auto* can = app.add_subcommand("canard", "bisect the canard mortality value");
    can_flags.attach(can, can_cfg);
    double m_lo = 0.6644, m_hi = 0.6645;
    can->add_option("--m-lo", m_lo, "large-cycle end of the bracket");
    can->add_option("--m-hi", m_hi, "small-cycle end of the bracket");

    auto* cmp = app.add_subcommand("compare", "jump vs diffusion checkpoint table");
    cmp_cfg.horizon = 20.0;
    cmp_cfg.n_runs = 10;
    cmp_cfg.init_x = 0.2;
    cmp_cfg.init_y = 0.6;
    cmp_flags.attach(cmp, cmp_cfg);
    std::vector<double> cmp_omegas{1e4, 1e5, 1e6};
    std::vector<double> checkpoints{1.0, 5.0, 10.0};
    cmp->add_option("--omegas", cmp_omegas, "omega grid");
    cmp->add_option("--checkpoints", checkpoints, "comparison times");

    auto* sea = app.add_subcommand("seasonal", "ode + diffusion under cosine mortality");
    sea_flags.attach(sea, sea_cfg);
    std::vector<double> sea_omegas{1e12, 1e9, 1e8, 1e7};
    sea->add_option("--omegas", sea_omegas, "omega grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) {
            sim_flags.resolve(sim_cfg);
            if (thr_opt->count() > 0) sim_cfg.hybrid_threshold = threshold;
            return preypred::cli::run_simulate(sim_cfg);
        }
        if (t1->parsed()) {
            t1_flags.resolve(t1_cfg);
            return preypred::cli::run_table1(t1_cfg, t1_omegas);
        }
        if (t2->parsed()) {
            t2_flags.resolve(t2_cfg);
            return preypred::cli::run_table2(t2_cfg, t2_omegas);
        }
        if (can->parsed()) {
            can_flags.resolve(can_cfg);
            return preypred::cli::run_canard(can_cfg, m_lo, m_hi);
        }
        if (cmp->parsed()) {
            cmp_flags.resolve(cmp_cfg);
            return preypred::cli::run_compare(cmp_cfg, cmp_omegas, checkpoints);
        }
        if (sea->parsed()) {
            sea_flags.resolve(sea_cfg);
            return preypred::cli::run_seasonal(sea_cfg, sea_omegas);
        }
        std::cerr << "no subcommand\n";
        return 1;
    } catch (const preypred::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const preypred::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const preypred::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
