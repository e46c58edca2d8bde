#include "preypred/jump.hpp"

#include <cmath>
#include <string>

#include "preypred/detail/decay.hpp"
#include "preypred/errors.hpp"

namespace preypred {

JumpState step_jump(const ModelParams& p, const JumpState& s, RngStream& rng) {
    if (s.n < 1)
        throw DomainError("step_jump: n = 0 is absorbed; use the decay-only path");
    const double x = s.x(p);
    const double f = clamped_growth(p, x);
    const double mu = functional_response(p, x);
    const double flux = f + mu * s.y;
    if (!(flux > 0.0)) throw DomainError("step_jump: total event rate is zero");

    const double lambda = (p.omega / p.eps) * flux;
    const double tau = -std::log(rng.uniform_open()) / lambda;
    const double t_new = s.t + tau;
    const double mi = p.mortality.is_constant() ? p.mortality.constant_value() * tau
                                                : p.mortality.integral(s.t, t_new);
    const double y_decayed = s.y * detail::decay_factor(mi);

    JumpState out{t_new, s.n, y_decayed};
    const double p_birth = f / (f + mu * y_decayed);
    if (rng.uniform() < p_birth) {
        out.n = s.n + 1;
    } else {
        out.n = s.n - 1;
        out.y = y_decayed + p.eps / p.omega;
    }
    return out;
}

namespace detail {

JumpSegmentEnd run_jump_segment(const ModelParams& p, JumpState s, double t_end,
                                double sample_origin, double stride,
                                std::uint64_t& next_sample, std::int64_t resume_count,
                                bool watch_predator, std::uint64_t budget_left,
                                Trajectory& traj, RngStream& rng) {
    const double inv_omega = 1.0 / p.omega;
    const double rate_pref = p.omega / p.eps;
    const bool const_m = p.mortality.is_constant();
    const double m_const = const_m ? p.mortality.constant_value() : 0.0;

    auto emit_through = [&](double t_from, double y_from, double t_limit) {
        // States at stride multiples inside (t_from, t_limit]; n is constant
        // between events and y decays in closed form.
        const double x = s.x(p);
        for (;;) {
            const double ts = sample_origin + static_cast<double>(next_sample) * stride;
            if (ts > t_limit + 1e-12) break;
            const double mi = const_m ? m_const * (ts - t_from)
                                      : p.mortality.integral(t_from, ts);
            traj.samples.push_back(State{ts, x, y_from * decay_factor(mi)});
            ++next_sample;
        }
    };

    std::uint64_t events = 0;
    for (;;) {
        if (s.n <= 0) {
            traj.event_count += events;
            return {JumpSegmentEnd::Reason::Absorbed, s};
        }
        if (resume_count > 0 && s.n >= resume_count) {
            traj.event_count += events;
            return {JumpSegmentEnd::Reason::CountReached, s};
        }
        if (watch_predator && s.y <= inv_omega) {
            traj.event_count += events;
            return {JumpSegmentEnd::Reason::Extinct, s};
        }

        const double x = static_cast<double>(s.n) * inv_omega;
        const double f_raw = p.r * x * (p.K - x);
        const double f = f_raw > 0.0 ? f_raw : 0.0;
        const double mu = x / (p.a + x);
        const double flux = f + mu * s.y;
        if (!(flux > 0.0)) {
            // x >= K with y = 0: both channels dead, state frozen to horizon.
            emit_through(s.t, s.y, t_end);
            s.t = t_end;
            traj.event_count += events;
            return {JumpSegmentEnd::Reason::Horizon, s};
        }

        const double lambda = rate_pref * flux;
        const double tau = -std::log(rng.uniform_open()) / lambda;
        const double t_new = s.t + tau;

        if (t_new >= t_end) {
            // Next event falls past the horizon; decay y to the horizon.
            emit_through(s.t, s.y, t_end);
            const double mi = const_m ? m_const * (t_end - s.t)
                                      : p.mortality.integral(s.t, t_end);
            s.y *= decay_factor(mi);
            s.t = t_end;
            traj.event_count += events;
            return {JumpSegmentEnd::Reason::Horizon, s};
        }

        emit_through(s.t, s.y, t_new);
        const double mi = const_m ? m_const * tau : p.mortality.integral(s.t, t_new);
        const double y_decayed = s.y * decay_factor(mi);

        if (rng.uniform() < f / (f + mu * y_decayed)) {
            s.n += 1;
            s.y = y_decayed;
        } else {
            s.n -= 1;
            s.y = y_decayed + p.eps / p.omega;
            ++traj.capture_count;
        }
        s.t = t_new;

        if (++events > budget_left) {
            traj.event_count += events;
            throw EventBudgetError(
                "jump event budget exceeded (" + std::to_string(budget_left) +
                " events); consider the diffusion integrator for this omega");
        }
    }
}

} // namespace detail

Trajectory simulate_jump(const ModelParams& p, State init, double horizon,
                         double sample_stride, RngStream& rng, const JumpConfig& cfg) {
    p.validate();
    if (horizon < 0.0) throw ValidationError("simulate_jump: horizon must be >= 0");
    if (!(sample_stride > 0.0)) throw ValidationError("simulate_jump: sample_stride must be > 0");
    if (init.x < 0.0 || init.y < 0.0) throw ValidationError("simulate_jump: negative initial state");

    JumpState s{init.t, static_cast<std::int64_t>(std::llround(init.x * p.omega)), init.y};

    Trajectory traj;
    traj.samples.push_back(State{s.t, s.x(p), s.y});
    if (horizon == 0.0) return traj;

    const double t_end = init.t + horizon;

    // A-priori cost guard: expected event count at the initial rate.
    const double lambda0 = total_event_rate(p, State{s.t, s.x(p), s.y});
    if (lambda0 * horizon > static_cast<double>(cfg.event_budget))
        throw EventBudgetError(
            "simulate_jump: expected event count lambda*horizon exceeds the budget; "
            "use the diffusion integrator at this omega");

    std::uint64_t next_sample = 1;
    if (s.n == 0) {
        detail::finish_absorbed(p, traj, init.t, sample_stride, next_sample, s.t, s.y,
                                t_end, /*grid_dt=*/0.0);
        return traj;
    }

    const auto end = detail::run_jump_segment(p, s, t_end, init.t, sample_stride,
                                              next_sample, /*resume_count=*/0,
                                              /*watch_predator=*/false, cfg.event_budget,
                                              traj, rng);
    switch (end.reason) {
    case detail::JumpSegmentEnd::Reason::Absorbed:
        detail::finish_absorbed(p, traj, init.t, sample_stride, next_sample,
                                end.state.t, end.state.y, t_end, /*grid_dt=*/0.0);
        break;
    case detail::JumpSegmentEnd::Reason::Horizon: {
        traj.termination = Termination::RanToHorizon;
        const State fin{end.state.t, end.state.x(p), end.state.y};
        if (traj.samples.back().t != fin.t) traj.samples.push_back(fin);
        break;
    }
    default:
        throw NumericError("simulate_jump: unexpected segment end");
    }
    return traj;
}

} // namespace preypred
