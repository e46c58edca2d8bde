#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "preypred/model.hpp"
#include "preypred/rng.hpp"

using namespace preypred;

namespace {
ModelParams reference() { return ModelParams{}; } // r=0.5 K=2 a=0.4 eps=0.02 m=0.6645 omega=1e6
} // namespace

TEST_CASE("prey growth") {
    const auto p = reference();
    CHECK(prey_growth(p, 0.0) == 0.0);
    CHECK(prey_growth(p, 2.0) == 0.0);
    CHECK(prey_growth(p, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(prey_growth(p, 2.5) < 0.0); // raw f goes negative past K
}

TEST_CASE("functional response") {
    const auto p = reference();
    CHECK(functional_response(p, 0.0) == 0.0);
    CHECK(functional_response(p, 0.4) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(functional_response(p, 0.8) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("total event rate") {
    auto p = reference();
    CHECK(total_event_rate(p, State{0, 1.0, 0.5}) ==
          doctest::Approx(42857142.857142857).epsilon(1e-12));
    CHECK(total_event_rate(p, State{0, 0.0, 1.0}) == 0.0);
    p.omega = 1e5;
    CHECK(total_event_rate(p, State{0, 0.4, 0.72}) == doctest::Approx(3.4e6).epsilon(1e-12));
    // birth channel clamped beyond K: rate stays nonnegative
    CHECK(total_event_rate(p, State{0, 2.5, 0.1}) >= 0.0);
}

TEST_CASE("birth probability") {
    const auto p = reference();
    CHECK(birth_probability(p, State{0, 1.0, 0.5}) ==
          doctest::Approx(7.0 / 12.0).epsilon(1e-15));
    CHECK(birth_probability(p, State{0, 1.0, 0.0}) == 1.0);
    CHECK(birth_probability(p, State{0, 2.0, 0.3}) == 0.0);
    CHECK_THROWS_AS((void)birth_probability(p, State{0, 0.0, 0.0}), DomainError);
}

TEST_CASE("noise amplitudes") {
    const auto p = reference();
    const auto na = noise_amplitudes(p, State{0, 1.0, 0.5}, 1e-4);
    CHECK(na.sigma_x == doctest::Approx(6.4549722436790281e-5).epsilon(1e-14));
    CHECK(na.sigma_y == doctest::Approx(6.4549722436790281e-7).epsilon(1e-14));
    // no events, no noise
    const auto quiet = noise_amplitudes(p, State{0, 0.7, 0.0}, 1e-4);
    CHECK(quiet.sigma_x == 0.0);
    CHECK(quiet.sigma_y == 0.0);
}

TEST_CASE("rank-1 identity sigma_x * eps == 2 sigma_y holds exactly") {
    const auto p = reference();
    RngStream rng(123);
    for (int i = 0; i < 1000; ++i) {
        const State s{0, 2.0 * rng.uniform(), 2.0 * rng.uniform()};
        const auto na = noise_amplitudes(p, s, 1e-4);
        CHECK(na.sigma_x * p.eps == 2.0 * na.sigma_y); // bitwise
    }
}

TEST_CASE("rate and probability stay in range over the state space") {
    const auto p = reference();
    RngStream rng(7);
    for (int i = 0; i < 2000; ++i) {
        const State s{0, p.K * rng.uniform(), 2.0 * rng.uniform()};
        CHECK(total_event_rate(p, s) >= 0.0);
        if (clamped_growth(p, s.x) + functional_response(p, s.x) * s.y > 0.0) {
            const double pb = birth_probability(p, s);
            CHECK(pb >= 0.0);
            CHECK(pb <= 1.0);
        }
    }
}

TEST_CASE("prey nullcline") {
    const auto p = reference();
    CHECK(prey_nullcline(p, 0.8) == doctest::Approx(0.72).epsilon(1e-15));
    CHECK(prey_nullcline(p, 2.0) == 0.0);
    CHECK(prey_nullcline(p, 0.4) == doctest::Approx(0.64).epsilon(1e-15));
    CHECK_THROWS_AS((void)prey_nullcline(p, 0.0), DomainError);

    // unique maximum at (K-a)/2 = 0.8
    const double peak = prey_nullcline(p, 0.8);
    for (double x : {0.1, 0.5, 0.7, 0.79, 0.81, 0.9, 1.5, 1.9})
        CHECK(prey_nullcline(p, x) < peak);
    CHECK(prey_nullcline_slope(p, 0.8) == doctest::Approx(0.0));
}

TEST_CASE("equilibrium") {
    auto p = reference();
    const auto eq = equilibrium(p);
    REQUIRE(eq.has_value());
    CHECK(eq->x == doctest::Approx(0.79225037257824143).epsilon(1e-14));
    CHECK(eq->y == doctest::Approx(0.71996997163741196).epsilon(1e-14));

    p.mortality = MortalitySchedule::constant(0.6);
    const auto eq6 = equilibrium(p);
    REQUIRE(eq6.has_value());
    CHECK(eq6->x == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(eq6->y == doctest::Approx(0.7).epsilon(1e-14));

    p.mortality = MortalitySchedule::constant(2.0 / 3.0);
    CHECK(equilibrium(p)->x == doctest::Approx(0.8).epsilon(1e-14)); // parabola maximum

    // x* beyond the carrying capacity: no coexistence
    p.mortality = MortalitySchedule::constant(0.9);
    CHECK_FALSE(equilibrium(p).has_value());

    // x* strictly increasing in m
    double prev = 0.0;
    for (double m : {0.2, 0.4, 0.6, 0.6645, 0.75}) {
        p.mortality = MortalitySchedule::constant(m);
        const double xs = equilibrium(p)->x;
        CHECK(xs > prev);
        prev = xs;
    }
}

TEST_CASE("equilibrium stability switches at m = 2/3") {
    auto p = reference();
    CHECK(equilibrium_unstable(p)); // m = 0.6645 < 2/3
    p.mortality = MortalitySchedule::constant(0.75);
    CHECK_FALSE(equilibrium_unstable(p));
}

TEST_CASE("mortality schedule") {
    const auto c = MortalitySchedule::constant(0.6645);
    CHECK(c.value(0.0) == 0.6645);
    CHECK(c.value(123.0) == 0.6645);
    CHECK(c.integral(1.0, 3.5) == doctest::Approx(0.6645 * 2.5).epsilon(1e-15));

    // m(t) = 0.6645 - 0.047*(1 - cos(0.1 t)), stored as a0 + b0 cos(rate t)
    const auto s = MortalitySchedule::cosine(0.6175, 0.047, 0.1);
    CHECK(s.value(0.0) == doctest::Approx(0.6645).epsilon(1e-15));
    CHECK(s.value(M_PI / 0.1) == doctest::Approx(0.6175 - 0.047).epsilon(1e-12));

    // exact integral vs midpoint quadrature
    double acc = 0.0;
    const int n = 200000;
    const double t1 = 37.0;
    for (int i = 0; i < n; ++i) acc += s.value((i + 0.5) * t1 / n) * (t1 / n);
    CHECK(s.integral(0.0, t1) == doctest::Approx(acc).epsilon(1e-9));

    CHECK_THROWS_AS(MortalitySchedule::constant(0.0).validate(), ValidationError);
    CHECK_THROWS_AS(MortalitySchedule::constant(1.0).validate(), ValidationError);
    CHECK_THROWS_AS(MortalitySchedule::cosine(0.5, 0.6, 0.1).validate(), ValidationError);
    CHECK_THROWS_AS((void)s.constant_value(), ValidationError);
}

TEST_CASE("params validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.omega = 0.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.omega = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.omega = 1e6;
    p.eps = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p.eps = 1.5;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}
