#pragma once

#include <cstdint>
#include <optional>

#include "preypred/model.hpp"
#include "preypred/rng.hpp"
#include "preypred/trajectory.hpp"

namespace preypred {

struct DiffusionConfig {
    double dt = 1e-4;
    // Multiplies both noise amplitudes; 0 forces the deterministic Euler limit.
    double noise_scale = 1.0;
    // Prey count below which the hybrid integrator hands over to the exact
    // jump process (hysteresis: jump runs until the count re-exceeds twice
    // this). Disabled by default.
    std::optional<double> hybrid_threshold;
    std::uint64_t jump_event_budget = 1'000'000'000;

    void validate() const;
};

// One Euler-Maruyama step of the degenerate diffusion. A single standard
// normal W drives both coordinates (-sigma_x*W on prey, +sigma_y*W on
// predator): a capture removes prey and feeds the predator, so the two
// stochastic increments are perfectly anticorrelated. States at or below the
// barrier x <= 1/omega are absorbed (x = 0, y decays exactly).
State step_diffusion(const ModelParams& p, const DiffusionConfig& cfg, const State& s,
                     RngStream& rng);

// Euler-Maruyama run. Terminates at the horizon or flags predator extinction
// at the first step whose end state has y <= 1/omega (time recorded as T,
// quantized to the step grid). After prey absorption, y follows its exact
// decay on the same grid.
Trajectory simulate_diffusion(const ModelParams& p, const DiffusionConfig& cfg, State init,
                              double horizon, double sample_stride, RngStream& rng);

// Diffusion with a jump-process hand-off below cfg.hybrid_threshold prey
// individuals; identical to simulate_diffusion when the threshold is
// disabled. The stitched trajectory is time-continuous.
Trajectory simulate_hybrid(const ModelParams& p, const DiffusionConfig& cfg, State init,
                           double horizon, double sample_stride, RngStream& rng);

} // namespace preypred
