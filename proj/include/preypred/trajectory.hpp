#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "preypred/model.hpp"

namespace preypred {

enum class Termination {
    RanToHorizon,    // reached the requested horizon
    PreyAbsorbed,    // prey hit zero, predator still above 1/omega at horizon
    PredatorExtinct, // y reached 1/omega (extinction time T recorded)
};

const char* to_string(Termination t);

// Time-sampled run: states at multiples of the sample stride plus the final
// state, with bookkeeping shared by all integrators.
struct Trajectory {
    std::vector<State> samples;
    Termination termination = Termination::RanToHorizon;
    std::optional<double> extinction_time; // first t with y <= 1/omega
    std::optional<double> absorption_time; // first t with prey at zero
    std::optional<double> absorption_y;    // y at the absorption instant
    std::uint64_t event_count = 0;         // jump events simulated
    std::uint64_t capture_count = 0;       // jump captures (predation events)
    std::uint64_t clamp_count = 0;         // diffusion y < 0 clamps

    const State& final_state() const { return samples.back(); }
};

} // namespace preypred
