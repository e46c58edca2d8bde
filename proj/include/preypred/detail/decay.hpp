#pragma once

#include <cstdint>

#include "preypred/model.hpp"
#include "preypred/trajectory.hpp"

namespace preypred::detail {

// exp(-v) with a cheap exact-to-rounding Taylor branch for the tiny exponents
// that dominate inter-event predator decay.
inline double decay_factor(double v) {
    if (v < 1e-4) return 1.0 - v + 0.5 * v * v - (1.0 / 6.0) * v * v * v;
    return std::exp(-v);
}

// Finishes a trajectory whose prey population hit zero at (t_abs, y_abs):
// y decays as y_abs * exp(-integral of m), samples are appended at stride
// multiples, and the run ends at the predator-extinction crossing y = 1/omega
// or at t_end, whichever comes first.
//
// grid_dt > 0 quantizes the crossing to the step grid (diffusion semantics,
// error <= dt); grid_dt <= 0 uses the exact crossing time (jump semantics).
void finish_absorbed(const ModelParams& p, Trajectory& traj, double sample_origin,
                     double stride, std::uint64_t& next_sample, double t_abs,
                     double y_abs, double t_end, double grid_dt);

} // namespace preypred::detail
