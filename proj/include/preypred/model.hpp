#pragma once

#include <cmath>
#include <optional>

#include "preypred/errors.hpp"

namespace preypred {

// One point of a run: time, prey concentration, predator concentration.
// omega * x is the underlying number of prey individuals.
struct State {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

// Predator mortality m, either constant or seasonally forced
// m(t) = a0 + b0*cos(rate*t). Exposes the exact integral so integrators can
// decay y over an interval without quadrature.
class MortalitySchedule {
public:
    static MortalitySchedule constant(double m) {
        MortalitySchedule s;
        s.constant_ = true;
        s.a0_ = m;
        return s;
    }

    static MortalitySchedule cosine(double a0, double b0, double rate) {
        MortalitySchedule s;
        s.constant_ = false;
        s.a0_ = a0;
        s.b0_ = b0;
        s.rate_ = rate;
        return s;
    }

    double value(double t) const {
        if (constant_) return a0_;
        return a0_ + b0_ * std::cos(rate_ * t);
    }

    // Exact integral of m over [t0, t1].
    double integral(double t0, double t1) const {
        if (constant_) return a0_ * (t1 - t0);
        return a0_ * (t1 - t0) + (b0_ / rate_) * (std::sin(rate_ * t1) - std::sin(rate_ * t0));
    }

    bool is_constant() const { return constant_; }

    double constant_value() const {
        if (!constant_)
            throw ValidationError("mortality schedule is time-varying; no constant m");
        return a0_;
    }

    double a0() const { return a0_; }
    double b0() const { return b0_; }
    double rate() const { return rate_; }

    // m(t) must stay inside (0,1) for every t >= 0.
    void validate() const {
        const double lo = constant_ ? a0_ : a0_ - std::abs(b0_);
        const double hi = constant_ ? a0_ : a0_ + std::abs(b0_);
        if (!(lo > 0.0) || !(hi < 1.0))
            throw ValidationError("mortality must satisfy 0 < m(t) < 1 for all t");
        if (!constant_ && !(rate_ > 0.0))
            throw ValidationError("cosine mortality needs rate > 0");
    }

private:
    bool constant_ = true;
    double a0_ = 0.6645;
    double b0_ = 0.0;
    double rate_ = 0.0;
};

// All model constants. Defaults are the reference parameter set used
// throughout the experiments: f(x) = 0.5*x*(2-x), mu(x) = x/(0.4+x),
// eps = 0.02, m = 0.6645.
struct ModelParams {
    double r = 0.5;     // prey growth coefficient
    double K = 2.0;     // prey carrying capacity
    double a = 0.4;     // half-saturation of the functional response
    double eps = 0.02;  // prey/predator time-scale separation (yield factor)
    MortalitySchedule mortality = MortalitySchedule::constant(0.6645);
    double omega = 1e6; // individuals per unit of prey concentration

    void validate() const {
        if (!(r > 0.0)) throw ValidationError("r must be > 0");
        if (!(K > 0.0)) throw ValidationError("K must be > 0");
        if (!(a > 0.0)) throw ValidationError("a must be > 0");
        if (!(eps > 0.0) || !(eps <= 1.0)) throw ValidationError("eps must be in (0,1]");
        if (!(omega >= 1.0)) throw ValidationError("omega must be >= 1");
        if (omega != std::floor(omega))
            throw ValidationError("omega must be integer-valued");
        mortality.validate();
    }
};

// Prey growth f(x) = r*x*(K-x). Negative for x > K.
inline double prey_growth(const ModelParams& p, double x) {
    return p.r * x * (p.K - x);
}

// Holling type II functional response mu(x) = x/(a+x).
inline double functional_response(const ModelParams& p, double x) {
    return x / (p.a + x);
}

// Birth channel of the event rate. f < 0 (x beyond K) would make the birth
// rate negative, so it is clamped at zero inside all rate and probability
// computations; the ODE drift keeps the raw f.
inline double clamped_growth(const ModelParams& p, double x) {
    const double f = prey_growth(p, x);
    return f > 0.0 ? f : 0.0;
}

// Total event rate lambda = (omega/eps) * (f(x) + mu(x)*y) of the birth and
// death process; zero when no prey.
inline double total_event_rate(const ModelParams& p, const State& s) {
    return (p.omega / p.eps) * (clamped_growth(p, s.x) + functional_response(p, s.x) * s.y);
}

// P(next event is a birth) = f / (f + mu*y).
inline double birth_probability(const ModelParams& p, const State& s) {
    const double f = clamped_growth(p, s.x);
    const double denom = f + functional_response(p, s.x) * s.y;
    if (denom <= 0.0)
        throw DomainError("birth_probability: f(x) + mu(x)*y is zero");
    return f / denom;
}

struct NoiseAmplitudes {
    double sigma_x = 0.0;
    double sigma_y = 0.0;
};

// State-dependent shared factor sqrt(f*mu*y / (f + mu*y)) of both noise
// amplitudes; zero when there is no event flux.
inline double noise_shared_factor(const ModelParams& p, double x, double y) {
    const double f = clamped_growth(p, x);
    const double muy = functional_response(p, x) * y;
    const double flux = f + muy;
    if (flux <= 0.0) return 0.0;
    return std::sqrt(f * muy / flux);
}

// Euler-Maruyama noise amplitudes for one step of length dt:
//   sigma_x = sqrt(4*dt/(omega*eps)) * shared,  sigma_y = sigma_x * eps / 2.
// sigma_y is derived from sigma_x so the rank-1 ratio sigma_x/sigma_y = 2/eps
// holds exactly in floating point.
inline NoiseAmplitudes noise_amplitudes(const ModelParams& p, const State& s, double dt) {
    if (!(dt > 0.0)) throw ValidationError("noise_amplitudes: dt must be > 0");
    const double shared = noise_shared_factor(p, s.x, s.y);
    NoiseAmplitudes na;
    na.sigma_x = std::sqrt(4.0 * dt / (p.omega * p.eps)) * shared;
    na.sigma_y = (na.sigma_x * p.eps) / 2.0;
    return na;
}

// Prey nullcline y = f(x)/mu(x) = r*(K-x)*(a+x); a parabola with maximum at
// x = (K-a)/2. Undefined at x = 0 where mu vanishes.
inline double prey_nullcline(const ModelParams& p, double x) {
    if (!(x > 0.0)) throw DomainError("prey_nullcline: undefined for x <= 0");
    return p.r * (p.K - x) * (p.a + x);
}

struct Equilibrium {
    double x = 0.0;
    double y = 0.0;
};

// Coexistence equilibrium x* = a*m/(1-m), y* = prey_nullcline(x*).
// Requires a constant mortality schedule. Returns nothing when y* <= 0
// (predator nullcline beyond the carrying capacity).
inline std::optional<Equilibrium> equilibrium(const ModelParams& p) {
    const double m = p.mortality.constant_value();
    const double xs = p.a * m / (1.0 - m);
    const double ys = p.r * (p.K - xs) * (p.a + xs);
    if (!(ys > 0.0)) return std::nullopt;
    return Equilibrium{xs, ys};
}

// Slope of the prey nullcline at x; the coexistence equilibrium is unstable
// exactly when this is positive at x* (x* left of the parabola maximum).
inline double prey_nullcline_slope(const ModelParams& p, double x) {
    return p.r * (p.K - p.a - 2.0 * x);
}

inline bool equilibrium_unstable(const ModelParams& p) {
    const auto eq = equilibrium(p);
    if (!eq) return false;
    return prey_nullcline_slope(p, eq->x) > 0.0;
}

} // namespace preypred
