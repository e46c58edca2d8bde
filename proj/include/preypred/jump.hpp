#pragma once

#include <cstdint>

#include "preypred/model.hpp"
#include "preypred/rng.hpp"
#include "preypred/trajectory.hpp"

namespace preypred {

// Exact birth-and-death state: n = omega*x prey individuals, continuous
// predator concentration.
struct JumpState {
    double t = 0.0;
    std::int64_t n = 0;
    double y = 0.0;

    double x(const ModelParams& p) const { return static_cast<double>(n) / p.omega; }
};

struct JumpConfig {
    // Fail fast when a run is expected (or observed) to need more events.
    std::uint64_t event_budget = 1'000'000'000;
};

// One event of the birth-and-death process: samples the exponential waiting
// time at rate lambda, decays y exactly over it, then applies a birth
// (n -> n+1) or a capture (n -> n-1, y += eps/omega).
// Requires n >= 1 and lambda > 0; absorbed states take the decay-only path.
JumpState step_jump(const ModelParams& p, const JumpState& s, RngStream& rng);

// Event-by-event simulation until the horizon or prey absorption; after
// absorption y follows its closed-form decay until the horizon or predator
// extinction (y <= 1/omega).
Trajectory simulate_jump(const ModelParams& p, State init, double horizon,
                         double sample_stride, RngStream& rng, const JumpConfig& cfg = {});

namespace detail {

// Jump engine shared by simulate_jump and the hybrid integrator.
struct JumpSegmentEnd {
    enum class Reason { Horizon, Absorbed, CountReached, Extinct };
    Reason reason;
    JumpState state;
};

// Runs events until t_end, absorption, (resume_count > 0) n >= resume_count,
// or - when watch_predator is set - y <= 1/omega at an event epoch. Appends
// stride samples to traj and accounts events against `budget_left`.
JumpSegmentEnd run_jump_segment(const ModelParams& p, JumpState s, double t_end,
                                double sample_origin, double stride,
                                std::uint64_t& next_sample, std::int64_t resume_count,
                                bool watch_predator, std::uint64_t budget_left,
                                Trajectory& traj, RngStream& rng);

} // namespace detail

} // namespace preypred
