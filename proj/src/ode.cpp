#include "preypred/ode.hpp"

#include <cmath>

#include "preypred/errors.hpp"

namespace preypred {

namespace {

// Number of Euler steps to cover `horizon` (last step may land past it).
std::uint64_t step_count(double horizon, double dt) {
    if (horizon <= 0.0) return 0;
    return static_cast<std::uint64_t>(std::ceil(horizon / dt - 1e-9));
}

} // namespace

Trajectory simulate_ode(const ModelParams& p, State init, double horizon, double dt,
                        double sample_stride) {
    p.validate();
    if (!(dt > 0.0)) throw ValidationError("simulate_ode: dt must be > 0");
    if (!(sample_stride > 0.0)) throw ValidationError("simulate_ode: sample_stride must be > 0");
    if (init.x < 0.0 || init.y < 0.0) throw ValidationError("simulate_ode: negative initial state");

    Trajectory traj;
    traj.samples.push_back(init);

    const std::uint64_t n_steps = step_count(horizon, dt);
    const double t0 = init.t;
    double x = init.x;
    double y = init.y;
    std::uint64_t next_sample = 1;

    for (std::uint64_t k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        double dx, dy;
        euler_increment(p, p.mortality.value(t), x, y, dt, dx, dy);
        x += dx;
        y += dy;
        if (std::isnan(x) || std::isnan(y))
            throw NumericError("simulate_ode: state became NaN");
        const double t_new = t0 + static_cast<double>(k + 1) * dt;
        if (t_new + 1e-12 >= t0 + static_cast<double>(next_sample) * sample_stride) {
            traj.samples.push_back(State{t_new, x, y});
            while (t_new + 1e-12 >= t0 + static_cast<double>(next_sample) * sample_stride)
                ++next_sample;
        }
    }

    const double t_end = t0 + static_cast<double>(n_steps) * dt;
    if (traj.samples.back().t != t_end) traj.samples.push_back(State{t_end, x, y});
    traj.termination = Termination::RanToHorizon;
    return traj;
}

LogChart to_log_chart(const ModelParams& p, const Trajectory& traj) {
    LogChart chart;
    chart.points.reserve(traj.samples.size());
    for (const State& s : traj.samples) {
        if (s.x > 0.0) {
            chart.points.push_back(LogState{s.t, p.eps * std::log(s.x), s.y});
        } else {
            ++chart.dropped;
        }
    }
    return chart;
}

ReducedMinimum reduced_log_minimum(const ModelParams& p, double xi0, double y0) {
    p.validate();
    const double m = p.mortality.constant_value();
    if (!(y0 > 0.0)) throw ValidationError("reduced_log_minimum: y0 must be > 0");
    // Premise of the reduction is xi << eps, i.e. x far below the scale of a.
    if (std::exp(xi0 / p.eps) >= p.eps)
        throw DomainError("reduced_log_minimum: start too far from the axis (need exp(xi0/eps) < eps)");

    const double growth = p.r * p.K;      // dxi/dt at y = 0
    const double y_turn = growth * p.a;   // y where dxi/dt changes sign
    if (y0 <= y_turn) {
        return ReducedMinimum{0.0, xi0, std::exp(xi0 / p.eps)};
    }
    const double t_star = std::log(y0 / y_turn) / m;
    const double xi_star =
        xi0 + growth * t_star - (y0 / (p.a * m)) * (1.0 - std::exp(-m * t_star));
    return ReducedMinimum{t_star, xi_star, std::exp(xi_star / p.eps)};
}

} // namespace preypred
