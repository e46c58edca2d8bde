#include "preypred/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "preypred/errors.hpp"
#include "preypred/jump.hpp"
#include "preypred/ode.hpp"
#include "preypred/parallel.hpp"
#include "preypred/rng.hpp"

namespace preypred {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MeanSd {
    double mean = kNaN;
    double sd = kNaN;
};

MeanSd mean_sd(const std::vector<double>& v) {
    MeanSd out;
    if (v.empty()) return out;
    double sum = 0.0;
    for (double x : v) sum += x;
    out.mean = sum / static_cast<double>(v.size());
    if (v.size() < 2) return out;
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    return out;
}

// --- cycle tracing ----------------------------------------------------------

struct CycleTrace {
    bool converged = false;
    bool any_loop = false;
    double last_loop_min_x = std::numeric_limits<double>::infinity();
    Cycle cycle;
};

// Settle, then watch crossings of the section {x = x*, y > y*} taken from the
// right (the top of each loop, where dy/dt flips sign). Crossing heights of
// consecutive loops converge geometrically onto the attracting cycle.
CycleTrace trace_cycle(const ModelParams& p, State seed, double settle_time, double tol,
                       int max_returns, double dt) {
    p.validate();
    const double m = p.mortality.constant_value();
    const auto eq = equilibrium(p);
    if (!eq) throw NoCycleError("trace_cycle: no coexistence equilibrium");
    if (!(prey_nullcline_slope(p, eq->x) > 0.0))
        throw NoCycleError("trace_cycle: attracting equilibrium, no limit cycle (m past the nullcline maximum)");
    const double xs = eq->x;
    const double ys = eq->y;

    const double inv_eps_dt = dt / p.eps;
    double x = seed.x, y = seed.y;
    auto step = [&] {
        const double f = p.r * x * (p.K - x);
        const double mu = x / (p.a + x);
        x += inv_eps_dt * (f - mu * y);
        y += dt * (mu - m) * y;
    };

    const auto settle_steps = static_cast<std::uint64_t>(std::ceil(settle_time / dt));
    for (std::uint64_t k = 0; k < settle_steps; ++k) step();
    if (std::isnan(x) || std::isnan(y)) throw NumericError("trace_cycle: NaN during settle");

    CycleTrace trace;
    double t = 0.0;                      // time since settle; only differences matter
    double t_last_cross = 0.0;
    double y_last_cross = kNaN;
    double loop_min_x = x;
    int returns = 0;
    bool recording = false;
    double record_t_start = 0.0;

    const double max_loop_time = 200.0;  // far beyond any period in this family

    double x_prev = x, y_prev = y;
    for (;;) {
        x_prev = x;
        y_prev = y;
        step();
        t += dt;
        if (std::isnan(x) || std::isnan(y)) throw NumericError("trace_cycle: NaN");
        loop_min_x = std::min(loop_min_x, x);
        if (recording) trace.cycle.points.push_back(State{t, x, y});

        const bool crossing = x_prev > xs && x <= xs && y > ys;
        if (crossing) {
            const double frac = (x_prev - xs) / (x_prev - x);
            const double y_c = y_prev + frac * (y - y_prev);
            const double t_c = (t - dt) + frac * dt;

            if (recording) {
                trace.converged = true;
                trace.cycle.period = t_c - record_t_start;
                trace.cycle.min_x = loop_min_x;
                trace.cycle.kind =
                    loop_min_x < kCycleSplitMinX ? CycleKind::Large : CycleKind::Small;
                return trace;
            }

            if (returns > 0) {
                trace.any_loop = true;
                trace.last_loop_min_x = loop_min_x;
                if (std::abs(y_c - y_last_cross) < tol) {
                    recording = true;
                    record_t_start = t_c;
                    trace.cycle.points.clear();
                }
            }
            if (!recording && ++returns > max_returns) return trace; // non-converged
            y_last_cross = y_c;
            t_last_cross = t_c;
            loop_min_x = x;
        }

        if (t - t_last_cross > max_loop_time)
            throw NoCycleError("trace_cycle: no section return within " +
                               std::to_string(max_loop_time) + " time units");
    }
}

} // namespace

Cycle find_limit_cycle(const ModelParams& p, State seed_state, double settle_time,
                       double tol, int max_returns, double dt) {
    auto trace = trace_cycle(p, seed_state, settle_time, tol, max_returns, dt);
    if (!trace.converged)
        throw NoCycleError("find_limit_cycle: Poincare returns did not converge within " +
                           std::to_string(max_returns) + " loops");
    return trace.cycle;
}

CanardSearch find_canard_m(const ModelParams& p, double m_lo, double m_hi) {
    p.validate();
    if (!(m_lo > 0.0) || !(m_hi < 1.0) || !(m_lo < m_hi))
        throw ValidationError("find_canard_m: need 0 < m_lo < m_hi < 1");

    auto classify_large = [&](double m) {
        ModelParams pm = p;
        pm.mortality = MortalitySchedule::constant(m);
        auto trace = trace_cycle(pm, State{0.0, 2.0, 0.5}, 200.0, 1e-8, 400, 1e-4);
        if (trace.converged) return trace.cycle.min_x < kCycleSplitMinX;
        // Right at the canard value the returns converge slowly; the most
        // recent completed loop still classifies the regime.
        if (trace.any_loop) return trace.last_loop_min_x < kCycleSplitMinX;
        throw NoCycleError("find_canard_m: no section returns at m = " + std::to_string(m));
    };

    if (!classify_large(m_lo) || classify_large(m_hi))
        throw BracketError(
            "find_canard_m: bracket must be large-cycle at m_lo and small-cycle at m_hi");

    CanardSearch out;
    double lo = m_lo, hi = m_hi;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        const bool large = classify_large(mid);
        out.history.push_back(CanardStep{lo, hi, mid, large});
        (large ? lo : hi) = mid;
    }
    out.bracket_lo = lo;
    out.bracket_hi = hi;
    out.m_star = 0.5 * (lo + hi);
    return out;
}

PreyMinimum min_prey_of_trajectory(const ModelParams& p, State init, double horizon,
                                   double xi_floor, double dt) {
    p.validate();
    if (!(init.x > 0.0)) throw DomainError("min_prey_of_trajectory: needs x > 0");
    if (!(dt > 0.0)) throw ValidationError("min_prey_of_trajectory: dt must be > 0");

    LogState s{init.t, p.eps * std::log(init.x), init.y};

    // A start at (or numerically on) the equilibrium never moves: the minimum
    // is the initial prey level itself.
    {
        const LogState probe = step_euler_log(p, s, dt);
        if (std::abs(probe.xi - s.xi) < 1e-13 && std::abs(probe.y - s.y) < 1e-13)
            return PreyMinimum{init.x, init.t, false, true};
    }

    const auto n_steps = static_cast<std::uint64_t>(std::ceil(horizon / dt));
    double best_xi = s.xi;
    double best_t = s.t;
    bool descending = false;
    for (std::uint64_t k = 0; k < n_steps; ++k) {
        const LogState next = step_euler_log(p, s, dt);
        if (std::isnan(next.xi) || std::isnan(next.y))
            throw NumericError("min_prey_of_trajectory: NaN");
        if (next.xi <= xi_floor)
            return PreyMinimum{std::exp(xi_floor / p.eps), next.t, true, false};
        if (next.xi < s.xi) {
            descending = true;
        } else if (descending && next.xi > s.xi) {
            return PreyMinimum{std::exp(s.xi / p.eps), s.t, false, true};
        }
        if (next.xi < best_xi) {
            best_xi = next.xi;
            best_t = next.t;
        }
        s = next;
    }
    return PreyMinimum{std::exp(best_xi / p.eps), best_t, false, false};
}

double find_safety_trajectory(const ModelParams& p, double alpha, double y_lo, double y_hi) {
    p.validate();
    const auto eq = equilibrium(p);
    if (!eq || !(alpha > 0.0) || !(alpha < eq->x))
        throw DomainError("find_safety_trajectory: alpha must lie in (0, x*)");
    if (!(y_lo < y_hi)) throw BracketError("find_safety_trajectory: need y_lo < y_hi");

    const double horizon = 100.0;
    auto dip = [&](double y0) {
        return min_prey_of_trajectory(p, State{0.0, kSafetyLaunchX, y0}, horizon).min_x;
    };

    double lo = y_lo, hi = y_hi;
    const double at_lo = dip(lo);
    const double at_hi = dip(hi);
    if (!(at_lo > alpha) || !(at_hi < alpha))
        throw BracketError("find_safety_trajectory: bracket endpoints do not straddle alpha "
                           "(min(y_lo) must exceed alpha, min(y_hi) must undercut it)");

    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double v = dip(mid);
        if (std::abs(v - alpha) < 1e-3 * alpha) return mid;
        (v > alpha ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

// Contiguous sub-arc of a closed loop with x >= xs, walked in flow order
// (bottom crossing up to the top crossing).
std::vector<State> cycle_climbing_arc(const std::vector<State>& loop, double xs) {
    const std::size_t n = loop.size();
    std::size_t start = n;
    for (std::size_t i = 0; i < n; ++i) {
        const State& prev = loop[(i + n - 1) % n];
        if (prev.x < xs && loop[i].x >= xs) {
            start = i;
            break;
        }
    }
    if (start == n) throw NumericError("funnel: cycle never enters x >= x*");
    std::vector<State> arc;
    for (std::size_t k = 0, j = start; k < n && loop[j].x >= xs; ++k, j = (j + 1) % n)
        arc.push_back(loop[j]);
    if (arc.size() < 2) throw NumericError("funnel: degenerate cycle arc");
    return arc;
}

// Funnel wall on the safety-trajectory side: the approach arc from the
// launch point up to the first crossing of x = x* (the trajectory wraps
// around the outside of the cycle and clears its top there, after which it
// falls toward the dip). On this arc x > x*, hence dy/dt > 0: the arc climbs.
std::vector<State> safety_climbing_arc(const ModelParams& p, double y0, double xs, double dt) {
    const double m = p.mortality.constant_value();
    const double inv_eps_dt = dt / p.eps;
    double x = kSafetyLaunchX, y = y0;
    double t = 0.0;
    const double t_cap = 200.0;

    std::vector<State> arc;
    arc.push_back(State{0.0, x, y});
    while (t < t_cap) {
        const double f = p.r * x * (p.K - x);
        const double mu = x / (p.a + x);
        x += inv_eps_dt * (f - mu * y);
        y += dt * (mu - m) * y;
        t += dt;
        if (std::isnan(x) || std::isnan(y)) throw NumericError("funnel: NaN on safety trajectory");
        if (x < xs) return arc;
        arc.push_back(State{t, x, y});
    }
    throw NumericError("funnel: safety trajectory never crossed x = x*");
}

double point_segment_dist(const State& a, const State& b, const State& q) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double tt = 0.0;
    if (len2 > 0.0) {
        tt = ((q.x - a.x) * dx + (q.y - a.y) * dy) / len2;
        tt = std::clamp(tt, 0.0, 1.0);
    }
    const double ex = a.x + tt * dx - q.x;
    const double ey = a.y + tt * dy - q.y;
    return std::sqrt(ex * ex + ey * ey);
}

// Minimum distance from points of A to segments of B; both arcs are strictly
// climbing in y, so a merge walk finds the y-bracketing segment in O(|A|+|B|).
// best_a, when given, receives the query point of A at the minimum.
void min_points_to_arc(const std::vector<State>& A, const std::vector<State>& B, double& best,
                       const State** best_a) {
    std::size_t j = 0;
    for (const State& q : A) {
        while (j + 2 < B.size() && B[j + 1].y < q.y) ++j;
        const std::size_t first = j > 0 ? j - 1 : 0;
        const std::size_t last = std::min(j + 1, B.size() - 2);
        for (std::size_t k = first; k <= last; ++k) {
            const double d = point_segment_dist(B[k], B[k + 1], q);
            if (d < best) {
                best = d;
                if (best_a) *best_a = &q;
            }
        }
    }
}

} // namespace

FunnelReport funnel_width(const ModelParams& base, double omega) {
    ModelParams p = base;
    p.omega = omega;
    p.validate();
    const auto eq = equilibrium(p);
    if (!eq) throw DomainError("funnel_width: no coexistence equilibrium");
    const double alpha = 1000.0 / omega; // the "1000 individuals" convention
    if (!(alpha < eq->x))
        throw DomainError("funnel_width: alpha = 1000/omega is not below x*");

    const Cycle cycle = find_limit_cycle(p, State{0.0, 2.0, 0.5}, 300.0);
    const double y0_star = find_safety_trajectory(p, alpha, 0.45, 1.2);

    const auto cyc_arc = cycle_climbing_arc(cycle.points, eq->x);
    const auto saf_arc = safety_climbing_arc(p, y0_star, eq->x, 1e-4);
    if (saf_arc.size() < 2) throw NumericError("funnel_width: degenerate safety arc");

    double rho = std::numeric_limits<double>::infinity();
    min_points_to_arc(saf_arc, cyc_arc, rho, nullptr);
    // Second pass queries from the cycle side, which also pins the cycle
    // point where the local noise is evaluated.
    double rho_cyc = std::numeric_limits<double>::infinity();
    const State* at_cycle = nullptr;
    min_points_to_arc(cyc_arc, saf_arc, rho_cyc, &at_cycle);
    rho = std::min(rho, rho_cyc);
    if (!(rho > 0.0) || !at_cycle) throw NumericError("funnel_width: no positive gap found");

    const auto na = noise_amplitudes(p, State{0.0, at_cycle->x, at_cycle->y}, 1e-4);
    return FunnelReport{omega, alpha, y0_star, rho, na.sigma_x, na.sigma_y};
}

ExtinctionStats ensemble_extinction(const ModelParams& p, const DiffusionConfig& cfg,
                                    State init, int n_runs, double horizon,
                                    std::uint64_t master_seed) {
    p.validate();
    cfg.validate();
    if (n_runs < 1) throw ValidationError("ensemble_extinction: n_runs must be >= 1");
    if (!(horizon > 0.0)) throw ValidationError("ensemble_extinction: horizon must be > 0");

    std::vector<double> T(static_cast<std::size_t>(n_runs), kNaN);
    parallel_for(static_cast<std::size_t>(n_runs), [&](std::size_t i) {
        RngStream rng = RngStream::substream(master_seed, i);
        const auto traj = simulate_diffusion(p, cfg, init, horizon, /*stride=*/horizon, rng);
        if (traj.extinction_time) T[i] = *traj.extinction_time;
    });

    std::vector<double> extinct;
    extinct.reserve(T.size());
    for (double ti : T)
        if (!std::isnan(ti)) extinct.push_back(ti);

    const auto ms = mean_sd(extinct);
    ExtinctionStats stats;
    stats.omega = p.omega;
    stats.n_runs = n_runs;
    stats.n_extinct = static_cast<int>(extinct.size());
    stats.p_ext = static_cast<double>(extinct.size()) / static_cast<double>(n_runs);
    stats.mean_T = ms.mean;
    stats.std_T = extinct.size() == 1 ? 0.0 : ms.sd;
    stats.horizon = horizon;
    return stats;
}

namespace {

double float_gcd(std::span<const double> vals) {
    double g = vals[0];
    for (std::size_t i = 1; i < vals.size(); ++i) {
        double a = std::max(g, vals[i]);
        double b = std::min(g, vals[i]);
        while (b > 1e-9) {
            const double r = std::fmod(a, b);
            a = b;
            b = r;
        }
        g = a;
    }
    return g;
}

State state_at(const Trajectory& traj, double t) {
    for (const State& s : traj.samples)
        if (s.t >= t - 1e-9) return s;
    // Run ended earlier (extinct); the terminal state persists.
    return traj.final_state();
}

} // namespace

std::vector<CheckpointRow> compare_processes(const ModelParams& p,
                                             std::span<const double> omegas, int n_runs,
                                             State init, double horizon,
                                             std::span<const double> checkpoints,
                                             std::uint64_t master_seed,
                                             const DiffusionConfig& cfg) {
    p.validate();
    cfg.validate();
    if (n_runs < 0) throw ValidationError("compare_processes: n_runs must be >= 0");
    if (checkpoints.empty()) throw ValidationError("compare_processes: no checkpoints");
    for (std::size_t i = 0; i < checkpoints.size(); ++i) {
        if (!(checkpoints[i] > 0.0) || checkpoints[i] > horizon + 1e-12)
            throw ValidationError("compare_processes: checkpoints must lie in (0, horizon]");
        if (i > 0 && !(checkpoints[i] > checkpoints[i - 1]))
            throw ValidationError("compare_processes: checkpoints must be increasing");
    }
    if (n_runs == 0) return {};

    const double stride = float_gcd(checkpoints);
    for (double c : checkpoints) {
        const double k = c / stride;
        if (std::abs(k - std::round(k)) > 1e-6)
            throw ValidationError("compare_processes: checkpoints have no common stride");
    }
    if (stride + 1e-12 < cfg.dt)
        throw ValidationError("compare_processes: checkpoint stride below the diffusion dt");

    const std::size_t nc = checkpoints.size();
    const auto n = static_cast<std::size_t>(n_runs);
    std::vector<CheckpointRow> rows;

    for (double omega : omegas) {
        ModelParams pw = p;
        pw.omega = omega;
        pw.validate();

        // [run][checkpoint] for each process/coordinate
        std::vector<double> xj(n * nc), yj(n * nc), xd(n * nc), yd(n * nc);
        const JumpConfig jump_cfg{cfg.jump_event_budget};

        parallel_for(n, [&](std::size_t i) {
            RngStream rj = RngStream::substream(master_seed, 2 * i);
            const auto tj = simulate_jump(pw, init, horizon, stride, rj, jump_cfg);
            RngStream rd = RngStream::substream(master_seed, 2 * i + 1);
            const auto td = simulate_diffusion(pw, cfg, init, horizon, stride, rd);
            for (std::size_t c = 0; c < nc; ++c) {
                const double tc = init.t + checkpoints[c];
                const State sj = state_at(tj, tc);
                const State sd = state_at(td, tc);
                xj[i * nc + c] = sj.x;
                yj[i * nc + c] = sj.y;
                xd[i * nc + c] = sd.x;
                yd[i * nc + c] = sd.y;
            }
        });

        for (std::size_t c = 0; c < nc; ++c) {
            std::vector<double> vxj(n), vyj(n), vxd(n), vyd(n);
            for (std::size_t i = 0; i < n; ++i) {
                vxj[i] = xj[i * nc + c];
                vyj[i] = yj[i * nc + c];
                vxd[i] = xd[i * nc + c];
                vyd[i] = yd[i * nc + c];
            }
            const auto mxj = mean_sd(vxj), myj = mean_sd(vyj);
            const auto mxd = mean_sd(vxd), myd = mean_sd(vyd);
            auto z = [&](const MeanSd& a, const MeanSd& b) {
                if (n < 2) return kNaN;
                const double se =
                    std::sqrt((a.sd * a.sd + b.sd * b.sd) / static_cast<double>(n));
                if (se == 0.0) return a.mean == b.mean ? 0.0 : kNaN;
                return (a.mean - b.mean) / se;
            };
            CheckpointRow row;
            row.omega = omega;
            row.t = checkpoints[c];
            row.mean_x_jump = mxj.mean;
            row.sd_x_jump = mxj.sd;
            row.mean_y_jump = myj.mean;
            row.sd_y_jump = myj.sd;
            row.mean_x_diff = mxd.mean;
            row.sd_x_diff = mxd.sd;
            row.mean_y_diff = myd.mean;
            row.sd_y_diff = myd.sd;
            row.z_x = z(mxj, mxd);
            row.z_y = z(myj, myd);
            rows.push_back(row);
        }
    }
    return rows;
}

} // namespace preypred
