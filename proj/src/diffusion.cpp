#include "preypred/diffusion.hpp"

#include <cmath>

#include "preypred/detail/decay.hpp"
#include "preypred/errors.hpp"
#include "preypred/jump.hpp"
#include "preypred/ode.hpp"

namespace preypred {

void DiffusionConfig::validate() const {
    if (!(dt > 0.0)) throw ValidationError("diffusion: dt must be > 0");
    if (!(noise_scale >= 0.0)) throw ValidationError("diffusion: noise_scale must be >= 0");
    if (hybrid_threshold && !(*hybrid_threshold >= 1.0))
        throw ValidationError("diffusion: hybrid_threshold must be >= 1 when enabled");
}

namespace {

struct DiffSegmentEnd {
    enum class Reason { Horizon, Absorbed, Extinct, SwitchLow };
    Reason reason;
    State state;
};

// Steps the diffusion from `start` until t_end, the absorbing barrier,
// predator extinction, or (switch_x > 0) prey falling to the hand-off
// concentration. Stride samples are appended to traj.
DiffSegmentEnd run_diffusion_segment(const ModelParams& p, const DiffusionConfig& cfg,
                                     const State& start, double t_end, double sample_origin,
                                     double stride, std::uint64_t& next_sample,
                                     double switch_x, Trajectory& traj, RngStream& rng) {
    const double dt = cfg.dt;
    const double inv_omega = 1.0 / p.omega;
    const bool const_m = p.mortality.is_constant();
    const double m_const = const_m ? p.mortality.constant_value() : 0.0;
    const double cx = std::sqrt(4.0 * dt / (p.omega * p.eps)) * cfg.noise_scale;
    const double cy = (cx * p.eps) / 2.0;
    const bool with_noise = cfg.noise_scale != 0.0;

    const double t0 = start.t;
    double x = start.x;
    double y = start.y;
    const auto n_steps =
        static_cast<std::uint64_t>(std::ceil((t_end - t0) / dt - 1e-9));

    for (std::uint64_t k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        if (x <= inv_omega) return {DiffSegmentEnd::Reason::Absorbed, State{t, x, y}};
        if (switch_x > 0.0 && x <= switch_x)
            return {DiffSegmentEnd::Reason::SwitchLow, State{t, x, y}};

        const double m_t = const_m ? m_const : p.mortality.value(t);
        double dx, dy;
        euler_increment(p, m_t, x, y, dt, dx, dy);
        if (with_noise) {
            const double shared = noise_shared_factor(p, x, y);
            const double w = rng.normal();
            x = x + dx - cx * shared * w;
            y = y + dy + cy * shared * w;
            if (y < 0.0) {
                y = 0.0;
                ++traj.clamp_count;
            }
        } else {
            x = x + dx;
            y = y + dy;
        }
        if (std::isnan(x) || std::isnan(y))
            throw NumericError("diffusion: state became NaN");

        const double t_new = t0 + static_cast<double>(k + 1) * dt;
        if (t_new + 1e-12 >= sample_origin + static_cast<double>(next_sample) * stride) {
            traj.samples.push_back(State{t_new, x, y});
            while (t_new + 1e-12 >= sample_origin + static_cast<double>(next_sample) * stride)
                ++next_sample;
        }
        if (y <= inv_omega) return {DiffSegmentEnd::Reason::Extinct, State{t_new, x, y}};
    }
    const double t_fin = t0 + static_cast<double>(n_steps) * dt;
    return {DiffSegmentEnd::Reason::Horizon, State{t_fin, x, y}};
}

void push_final(Trajectory& traj, const State& s) {
    if (traj.samples.empty() || traj.samples.back().t != s.t) traj.samples.push_back(s);
}

void validate_run_inputs(const ModelParams& p, const DiffusionConfig& cfg, const State& init,
                         double horizon, double sample_stride) {
    p.validate();
    cfg.validate();
    if (horizon < 0.0) throw ValidationError("horizon must be >= 0");
    if (!(sample_stride > 0.0)) throw ValidationError("sample_stride must be > 0");
    if (init.x < 0.0 || init.y < 0.0) throw ValidationError("negative initial state");
}

} // namespace

State step_diffusion(const ModelParams& p, const DiffusionConfig& cfg, const State& s,
                     RngStream& rng) {
    if (s.y < 0.0) throw ValidationError("step_diffusion: y must be >= 0");
    const double dt = cfg.dt;
    if (s.x <= 1.0 / p.omega) {
        const double y = s.y * detail::decay_factor(p.mortality.integral(s.t, s.t + dt));
        return State{s.t + dt, 0.0, y};
    }
    const double m_t = p.mortality.value(s.t);
    double dx, dy;
    euler_increment(p, m_t, s.x, s.y, dt, dx, dy);
    double x_new, y_new;
    if (cfg.noise_scale != 0.0) {
        const double cx = std::sqrt(4.0 * dt / (p.omega * p.eps)) * cfg.noise_scale;
        const double cy = (cx * p.eps) / 2.0;
        const double shared = noise_shared_factor(p, s.x, s.y);
        const double w = rng.normal();
        x_new = s.x + dx - cx * shared * w;
        y_new = s.y + dy + cy * shared * w;
        if (y_new < 0.0) y_new = 0.0;
    } else {
        x_new = s.x + dx;
        y_new = s.y + dy;
    }
    if (std::isnan(x_new) || std::isnan(y_new))
        throw NumericError("step_diffusion: state became NaN");
    return State{s.t + dt, x_new, y_new};
}

Trajectory simulate_diffusion(const ModelParams& p, const DiffusionConfig& cfg, State init,
                              double horizon, double sample_stride, RngStream& rng) {
    validate_run_inputs(p, cfg, init, horizon, sample_stride);

    Trajectory traj;
    traj.samples.push_back(init);
    if (horizon == 0.0) return traj;

    const double t_end = init.t + horizon;
    std::uint64_t next_sample = 1;
    const auto end = run_diffusion_segment(p, cfg, init, t_end, init.t, sample_stride,
                                           next_sample, /*switch_x=*/-1.0, traj, rng);
    switch (end.reason) {
    case DiffSegmentEnd::Reason::Absorbed:
        detail::finish_absorbed(p, traj, init.t, sample_stride, next_sample, end.state.t,
                                end.state.y, t_end, cfg.dt);
        break;
    case DiffSegmentEnd::Reason::Extinct:
        traj.extinction_time = end.state.t;
        traj.termination = Termination::PredatorExtinct;
        push_final(traj, end.state);
        break;
    case DiffSegmentEnd::Reason::Horizon:
        traj.termination = Termination::RanToHorizon;
        push_final(traj, end.state);
        break;
    default:
        throw NumericError("simulate_diffusion: unexpected segment end");
    }
    return traj;
}

Trajectory simulate_hybrid(const ModelParams& p, const DiffusionConfig& cfg, State init,
                           double horizon, double sample_stride, RngStream& rng) {
    if (!cfg.hybrid_threshold) return simulate_diffusion(p, cfg, init, horizon, sample_stride, rng);
    validate_run_inputs(p, cfg, init, horizon, sample_stride);

    const double threshold = *cfg.hybrid_threshold;
    const double switch_x = threshold / p.omega;
    const auto resume_count = static_cast<std::int64_t>(std::llround(2.0 * threshold));

    Trajectory traj;
    traj.samples.push_back(init);
    if (horizon == 0.0) return traj;

    const double t_end = init.t + horizon;
    std::uint64_t next_sample = 1;
    State s = init;
    bool jump_mode = p.omega * s.x <= threshold;

    for (;;) {
        if (!jump_mode) {
            const auto end = run_diffusion_segment(p, cfg, s, t_end, init.t, sample_stride,
                                                   next_sample, switch_x, traj, rng);
            s = end.state;
            switch (end.reason) {
            case DiffSegmentEnd::Reason::Absorbed:
                detail::finish_absorbed(p, traj, init.t, sample_stride, next_sample, s.t,
                                        s.y, t_end, cfg.dt);
                return traj;
            case DiffSegmentEnd::Reason::Extinct:
                traj.extinction_time = s.t;
                traj.termination = Termination::PredatorExtinct;
                push_final(traj, s);
                return traj;
            case DiffSegmentEnd::Reason::Horizon:
                traj.termination = Termination::RanToHorizon;
                push_final(traj, s);
                return traj;
            case DiffSegmentEnd::Reason::SwitchLow:
                jump_mode = true;
                break;
            }
        } else {
            JumpState js{s.t, static_cast<std::int64_t>(std::llround(s.x * p.omega)), s.y};
            if (js.n == 0) {
                detail::finish_absorbed(p, traj, init.t, sample_stride, next_sample, js.t,
                                        js.y, t_end, /*grid_dt=*/0.0);
                return traj;
            }
            const std::uint64_t spent = traj.event_count;
            if (spent >= cfg.jump_event_budget)
                throw EventBudgetError("simulate_hybrid: jump event budget exhausted");
            const auto end = detail::run_jump_segment(
                p, js, t_end, init.t, sample_stride, next_sample, resume_count,
                /*watch_predator=*/true, cfg.jump_event_budget - spent, traj, rng);
            s = State{end.state.t, end.state.x(p), end.state.y};
            switch (end.reason) {
            case detail::JumpSegmentEnd::Reason::Absorbed:
                detail::finish_absorbed(p, traj, init.t, sample_stride, next_sample, s.t,
                                        s.y, t_end, /*grid_dt=*/0.0);
                return traj;
            case detail::JumpSegmentEnd::Reason::Extinct:
                traj.extinction_time = s.t;
                traj.termination = Termination::PredatorExtinct;
                push_final(traj, s);
                return traj;
            case detail::JumpSegmentEnd::Reason::Horizon:
                traj.termination = Termination::RanToHorizon;
                push_final(traj, s);
                return traj;
            case detail::JumpSegmentEnd::Reason::CountReached:
                jump_mode = false;
                break;
            }
        }
    }
}

} // namespace preypred
