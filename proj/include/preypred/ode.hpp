#pragma once

#include <cstddef>
#include <vector>

#include "preypred/model.hpp"
#include "preypred/trajectory.hpp"

namespace preypred {

// Log-chart coordinates: xi = eps*ln(x) magnifies the neighborhood of the
// y axis where x becomes exponentially small.
struct LogState {
    double t = 0.0;
    double xi = 0.0;
    double y = 0.0;
};

// Euler increments of the slow-fast system
//   dx/dt = (1/eps)*(f(x) - mu(x)*y),  dy/dt = (mu(x) - m(t))*y
// over one step of length dt, with mortality m_t already evaluated.
// Single source of the drift arithmetic: the stochastic stepper adds its
// noise on top of exactly these increments, which is what makes the
// zero-noise diffusion bit-identical to the Euler scheme.
inline void euler_increment(const ModelParams& p, double m_t, double x, double y,
                            double dt, double& dx, double& dy) {
    const double f = prey_growth(p, x);
    const double mu = functional_response(p, x);
    dx = (dt / p.eps) * (f - mu * y);
    dy = dt * (mu - m_t) * y;
}

inline State step_euler(const ModelParams& p, const State& s, double dt) {
    double dx, dy;
    euler_increment(p, p.mortality.value(s.t), s.x, s.y, dt, dx, dy);
    return State{s.t + dt, s.x + dx, s.y + dy};
}

// Same system in (xi, y); exact for x > 0 and free of underflow as x -> 0:
//   dxi/dt = r*(K-x) - y/(a+x),  x = exp(xi/eps).
inline LogState step_euler_log(const ModelParams& p, const LogState& s, double dt) {
    const double x = std::exp(s.xi / p.eps);
    const double m_t = p.mortality.value(s.t);
    const double dxi = dt * (p.r * (p.K - x) - s.y / (p.a + x));
    const double dy = dt * (x / (p.a + x) - m_t) * s.y;
    return LogState{s.t + dt, s.xi + dxi, s.y + dy};
}

// Deterministic trajectory of the Euler scheme. No absorbing barrier: the
// continuous model cannot reach zero, which is the point of contrasting it
// with the stochastic integrators.
Trajectory simulate_ode(const ModelParams& p, State init, double horizon, double dt,
                        double sample_stride);

struct LogChart {
    std::vector<LogState> points;
    std::size_t dropped = 0; // samples with x = 0 (xi undefined)
};

LogChart to_log_chart(const ModelParams& p, const Trajectory& traj);

struct ReducedMinimum {
    double t_star = 0.0;  // time of the first xi minimum
    double xi_star = 0.0; // minimum log-chart value
    double x_star = 0.0;  // exp(xi_star/eps)
};

// Closed-form first minimum of xi for the reduced near-axis system
//   dxi/dt = r*K - y/a,  dy/dt = -m*y
// valid when x << a (premise xi << eps):
//   y(t) = y0*exp(-m t),  t* = ln(y0/(r*K*a))/m,
//   xi(t) = xi0 + r*K*t - (y0/(a*m))*(1 - exp(-m t)).
// If y0 <= r*K*a, xi is nondecreasing from the start and t* = 0.
ReducedMinimum reduced_log_minimum(const ModelParams& p, double xi0, double y0);

} // namespace preypred
