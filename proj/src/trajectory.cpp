#include "preypred/trajectory.hpp"

#include <cmath>
#include <cstdint>

#include "preypred/detail/decay.hpp"
#include "preypred/errors.hpp"

namespace preypred {

const char* to_string(Termination t) {
    switch (t) {
    case Termination::RanToHorizon: return "ran-to-horizon";
    case Termination::PreyAbsorbed: return "prey-absorbed";
    case Termination::PredatorExtinct: return "predator-extinct";
    }
    return "unknown";
}

namespace detail {

namespace {

void emit_decay_samples(const ModelParams& p, Trajectory& traj, double sample_origin,
                        double stride, std::uint64_t& next_sample, double t_abs,
                        double y_abs, double t_limit) {
    for (;;) {
        const double ts = sample_origin + static_cast<double>(next_sample) * stride;
        if (ts > t_limit + 1e-12) break;
        const double y = y_abs * std::exp(-p.mortality.integral(t_abs, ts));
        traj.samples.push_back(State{ts, 0.0, y});
        ++next_sample;
    }
}

void push_final(Trajectory& traj, const State& s) {
    if (traj.samples.empty() || traj.samples.back().t != s.t) traj.samples.push_back(s);
}

} // namespace

void finish_absorbed(const ModelParams& p, Trajectory& traj, double sample_origin,
                     double stride, std::uint64_t& next_sample, double t_abs,
                     double y_abs, double t_end, double grid_dt) {
    traj.absorption_time = t_abs;
    traj.absorption_y = y_abs;
    const double inv_omega = 1.0 / p.omega;

    if (y_abs <= inv_omega) {
        traj.extinction_time = t_abs;
        traj.termination = Termination::PredatorExtinct;
        push_final(traj, State{t_abs, 0.0, y_abs});
        return;
    }

    // Crossing of y(t) = y_abs * exp(-integral m) with 1/omega, i.e. the first
    // t with integral(t_abs, t) >= log(y_abs * omega).
    const double needed = std::log(y_abs * p.omega);
    double t_cross;
    bool crosses;
    if (grid_dt > 0.0) {
        const auto k_end =
            static_cast<std::uint64_t>(std::ceil((t_end - t_abs) / grid_dt - 1e-9));
        auto reached = [&](std::uint64_t k) {
            return p.mortality.integral(t_abs, t_abs + static_cast<double>(k) * grid_dt) >= needed;
        };
        crosses = k_end > 0 && reached(k_end);
        std::uint64_t k = k_end;
        if (crosses) {
            std::uint64_t lo = 0, hi = k_end; // reached(lo) false, reached(hi) true
            while (hi - lo > 1) {
                const std::uint64_t mid = lo + (hi - lo) / 2;
                (reached(mid) ? hi : lo) = mid;
            }
            k = hi;
        }
        t_cross = t_abs + static_cast<double>(k) * grid_dt;
    } else {
        crosses = p.mortality.integral(t_abs, t_end) >= needed;
        if (crosses) {
            if (p.mortality.is_constant()) {
                t_cross = t_abs + needed / p.mortality.constant_value();
            } else {
                double lo = t_abs, hi = t_end;
                for (int i = 0; i < 200 && hi - lo > 1e-13 * (1.0 + hi); ++i) {
                    const double mid = 0.5 * (lo + hi);
                    (p.mortality.integral(t_abs, mid) >= needed ? hi : lo) = mid;
                }
                t_cross = 0.5 * (lo + hi);
            }
        } else {
            t_cross = t_end;
        }
    }

    if (crosses && t_cross <= t_end + 1e-12) {
        emit_decay_samples(p, traj, sample_origin, stride, next_sample, t_abs, y_abs,
                           t_cross - 1e-12);
        const double y_final = y_abs * std::exp(-p.mortality.integral(t_abs, t_cross));
        traj.extinction_time = t_cross;
        traj.termination = Termination::PredatorExtinct;
        push_final(traj, State{t_cross, 0.0, y_final});
    } else {
        emit_decay_samples(p, traj, sample_origin, stride, next_sample, t_abs, y_abs, t_end);
        const double y_final = y_abs * std::exp(-p.mortality.integral(t_abs, t_end));
        traj.termination = Termination::PreyAbsorbed;
        push_final(traj, State{t_end, 0.0, y_final});
    }
}

} // namespace detail

} // namespace preypred
