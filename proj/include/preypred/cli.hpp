#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "preypred/diffusion.hpp"
#include "preypred/model.hpp"

namespace preypred::cli {

// Fully resolved invocation; flags mirror config keys one-to-one and
// override file values. All commands are pure functions of this struct.
struct RunConfig {
    ModelParams params;
    std::string integrator = "diffusion"; // jump | diffusion | hybrid | ode
    double dt = 1e-4;
    double horizon = 200.0;
    double sample_stride = 0.01;
    std::uint64_t seed = 1;
    int n_runs = 200;
    double init_x = 2.0;
    double init_y = 0.5;
    double noise_scale = 1.0;
    std::optional<double> hybrid_threshold;
    std::uint64_t event_budget = 1'000'000'000;
    std::string out = "-"; // '-' writes to stdout
    std::string jsonl_out;  // optional JSON-lines sidecar for summary records

    DiffusionConfig diffusion() const {
        DiffusionConfig cfg;
        cfg.dt = dt;
        cfg.noise_scale = noise_scale;
        cfg.hybrid_threshold = hybrid_threshold;
        cfg.jump_event_budget = event_budget;
        return cfg;
    }

    State init() const { return State{0.0, init_x, init_y}; }
};

// Each command writes its file(s) and returns 0; errors are thrown and mapped
// to exit codes by the binary (1 validation, 2 numeric, 3 I/O).
int run_simulate(const RunConfig& cfg);
int run_table1(const RunConfig& cfg, const std::vector<double>& omegas);
int run_table2(const RunConfig& cfg, const std::vector<double>& omegas);
int run_canard(const RunConfig& cfg, double m_lo, double m_hi);
int run_compare(const RunConfig& cfg, const std::vector<double>& omegas,
                const std::vector<double>& checkpoints);
int run_seasonal(const RunConfig& cfg, const std::vector<double>& omegas);

} // namespace preypred::cli
