#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "preypred/diffusion.hpp"
#include "preypred/model.hpp"
#include "preypred/trajectory.hpp"

namespace preypred {

// Cycles dipping below this prey level are "large" (they follow the y axis
// for an O(1) time); above it they are "small" (circling the equilibrium,
// min_x around 0.3-0.5). The canard explosion carries min_x across this
// level within an m-window below 1e-6, so the large/small flip locates the
// canard value sharply.
inline constexpr double kCycleSplitMinX = 1e-3;

// Launch abscissa of safety trajectories ("2 is a good infinite" for this
// parameter family: the initial sweep is essentially horizontal).
inline constexpr double kSafetyLaunchX = 2.0;

// Standard ensemble initial condition for extinction tables.
inline constexpr State kEnsembleInit{0.0, 2.0, 0.5};

// --- extinction ensembles -------------------------------------------------

struct ExtinctionStats {
    double omega = 0.0;
    int n_runs = 0;
    int n_extinct = 0;
    double p_ext = 0.0;
    double mean_T = 0.0; // NaN when no run went extinct
    double std_T = 0.0;  // NaN when fewer than two runs went extinct
    double horizon = 0.0;
};

// n_runs independent diffusion runs from `init`; T is the first time
// y <= 1/omega. Mean/std use extinct runs only (n-1 denominator).
// Deterministic given master_seed; runs execute on the worker pool.
ExtinctionStats ensemble_extinction(const ModelParams& p, const DiffusionConfig& cfg,
                                    State init, int n_runs, double horizon,
                                    std::uint64_t master_seed);

// --- limit cycles and the canard value ------------------------------------

enum class CycleKind { Large, Small };

struct Cycle {
    std::vector<State> points; // one closed loop, step resolution
    double period = 0.0;
    double min_x = 0.0;
    CycleKind kind = CycleKind::Small;
};

// Settles from seed_state, then detects successive crossings of the section
// {x = x*, y > y*} (the top of each loop, where dy/dt changes sign) until
// consecutive crossing heights differ by less than tol. Throws NoCycleError
// for the attracting-equilibrium regime or if returns do not converge.
Cycle find_limit_cycle(const ModelParams& p, State seed_state, double settle_time,
                       double tol = 1e-8, int max_returns = 400, double dt = 1e-4);

struct CanardStep {
    double lo, hi, mid;
    bool mid_large;
};

struct CanardSearch {
    double m_star = 0.0;
    double bracket_lo = 0.0, bracket_hi = 0.0; // final bracket (width <= 1e-9)
    std::vector<CanardStep> history;
};

// Bisects mortality between a large-cycle m_lo and a small-cycle m_hi down to
// a bracket of width 1e-9; the cycle classification flips inside it.
CanardSearch find_canard_m(const ModelParams& p, double m_lo, double m_hi);

// --- prey minima and the safety funnel ------------------------------------

struct PreyMinimum {
    double min_x = 0.0;
    double t_at_min = 0.0;
    bool below_floor = false; // xi hit the underflow floor before turning
    bool local = true;        // false: no local minimum before the horizon
};

// First local minimum of x along the deterministic trajectory from `init`,
// integrated in log-chart coordinates so exponentially small minima are
// resolved without underflow. xi is floored at xi_floor (x = exp(floor/eps)).
PreyMinimum min_prey_of_trajectory(const ModelParams& p, State init, double horizon,
                                   double xi_floor = -3.0, double dt = 1e-4);

// Dichotomy for the y0 whose trajectory from (kSafetyLaunchX, y0) first dips
// exactly to alpha. Bracket endpoints must straddle: min(y_lo) > alpha >
// min(y_hi). Stops at 0.1% relative error on the minimum or bracket width
// 1e-12 (the dip depth is exponentially sensitive to y0 near the split).
double find_safety_trajectory(const ModelParams& p, double alpha, double y_lo, double y_hi);

struct FunnelReport {
    double omega = 0.0;
    double alpha = 0.0;   // prey threshold 1000/omega in concentration units
    double y0_star = 0.0; // safety-trajectory intercept
    double rho = 0.0;     // funnel width
    double sigma_x_local = 0.0, sigma_y_local = 0.0; // step-noise amplitudes at the gap
};

// Funnel width at this omega: minimum distance between the limit cycle and
// the alpha-safety trajectory over their climbing arcs (x >= x*, dy/dt > 0),
// plus the local noise amplitudes at the closest approach (dt = 1e-4).
FunnelReport funnel_width(const ModelParams& p, double omega);

// --- jump vs diffusion ------------------------------------------------------

struct CheckpointRow {
    double omega = 0.0;
    double t = 0.0;
    double mean_x_jump = 0.0, sd_x_jump = 0.0;
    double mean_y_jump = 0.0, sd_y_jump = 0.0;
    double mean_x_diff = 0.0, sd_x_diff = 0.0;
    double mean_y_diff = 0.0, sd_y_diff = 0.0;
    double z_x = 0.0, z_y = 0.0; // standardized mean differences
};

// For each omega, n_runs jump and n_runs diffusion runs from `init`; reports
// per-checkpoint means, standard deviations, and standardized differences.
std::vector<CheckpointRow> compare_processes(const ModelParams& p,
                                             std::span<const double> omegas, int n_runs,
                                             State init, double horizon,
                                             std::span<const double> checkpoints,
                                             std::uint64_t master_seed,
                                             const DiffusionConfig& cfg = {});

} // namespace preypred
