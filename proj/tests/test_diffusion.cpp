#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "preypred/diffusion.hpp"
#include "preypred/errors.hpp"
#include "preypred/ode.hpp"

using namespace preypred;

TEST_CASE("drift-only step equals the hand-computed Euler step") {
    ModelParams p;
    DiffusionConfig cfg;
    cfg.noise_scale = 0.0;
    RngStream rng(1);
    const State s = step_diffusion(p, cfg, State{0, 2.0, 0.5}, rng);
    CHECK(s.x == doctest::Approx(1.9979166666666667).epsilon(1e-14));
    CHECK(s.y == doctest::Approx(0.50000844166666667).epsilon(1e-14));
    // and is bit-identical to the Euler scheme
    const State e = step_euler(p, State{0, 2.0, 0.5}, cfg.dt);
    CHECK(s.x == e.x);
    CHECK(s.y == e.y);
}

TEST_CASE("absorbing barrier zeroes prey regardless of the draw") {
    ModelParams p;
    DiffusionConfig cfg;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        RngStream rng(seed);
        const State s = step_diffusion(p, cfg, State{0, 0.5 / p.omega, 0.7}, rng);
        CHECK(s.x == 0.0);
        CHECK(s.y < 0.7); // deterministic decay
    }
    // absorption is permanent
    RngStream rng(9);
    State s{0, 0.0, 0.7};
    for (int i = 0; i < 100; ++i) {
        const State next = step_diffusion(p, cfg, s, rng);
        CHECK(next.x == 0.0);
        CHECK(next.y < s.y);
        s = next;
    }
}

TEST_CASE("one shared normal drives both coordinates on a fixed line") {
    ModelParams p;
    DiffusionConfig cfg;
    RngStream rng(17);
    const State base{0, 1.1, 0.6};
    const double m_t = p.mortality.value(0.0);
    double dx, dy;
    euler_increment(p, m_t, base.x, base.y, cfg.dt, dx, dy);
    for (int i = 0; i < 50; ++i) {
        const State s = step_diffusion(p, cfg, base, rng);
        const double nx = s.x - (base.x + dx);
        const double ny = s.y - (base.y + dy);
        if (std::abs(nx) < 1e-5) continue; // too small to extract cleanly
        CHECK(nx * ny < 0.0); // anticorrelated: capture removes prey, feeds predator
        // extraction of the noise part cancels ~12 digits against the base state
        CHECK(std::abs(nx / ny) == doctest::Approx(2.0 / p.eps).epsilon(1e-9));
    }
}

TEST_CASE("zero-noise diffusion is bit-identical to the Euler scheme") {
    ModelParams p;
    DiffusionConfig cfg;
    cfg.noise_scale = 0.0;
    RngStream rng(2);
    const State init{0, 2.0, 0.5};
    const auto d = simulate_diffusion(p, cfg, init, 10.0, 0.5, rng);
    const auto o = simulate_ode(p, init, 10.0, cfg.dt, 0.5);
    REQUIRE(d.samples.size() == o.samples.size());
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        CHECK(d.samples[i].t == o.samples[i].t);
        CHECK(d.samples[i].x == o.samples[i].x); // bitwise
        CHECK(d.samples[i].y == o.samples[i].y);
    }
}

TEST_CASE("extinction bookkeeping and the analytic decay tail") {
    ModelParams p;
    p.omega = 1e5;
    DiffusionConfig cfg;
    const double m = p.mortality.constant_value();
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        RngStream rng = RngStream::substream(321, seed);
        const auto traj = simulate_diffusion(p, cfg, State{0, 2.0, 0.5}, 200.0, 200.0, rng);
        REQUIRE(traj.termination == Termination::PredatorExtinct);
        REQUIRE(traj.extinction_time.has_value());
        REQUIRE(traj.absorption_time.has_value());
        REQUIRE(traj.absorption_y.has_value());
        const double tail = *traj.extinction_time - *traj.absorption_time;
        const double expected = std::log(p.omega * *traj.absorption_y) / m;
        CHECK(std::abs(tail - expected) <= 2.0 * cfg.dt);
        CHECK(traj.final_state().y <= 1.0 / p.omega);
        ++checked;
    }
    CHECK(checked == 6);
}

TEST_CASE("negative predator draws are clamped and counted") {
    ModelParams p;
    p.omega = 100;
    DiffusionConfig cfg;
    RngStream rng(77);
    const auto traj = simulate_diffusion(p, cfg, State{0, 1.0, 1e-9}, 0.01, 0.01, rng);
    CHECK(traj.clamp_count > 0);
}

TEST_CASE("omega regimes: persistence at 1e12, extinction at 1e6") {
    ModelParams p;
    DiffusionConfig cfg;

    p.omega = 1e12;
    RngStream big(2026);
    const auto persistent = simulate_diffusion(p, cfg, State{0, 2.0, 0.5}, 200.0, 10.0, big);
    CHECK(persistent.termination == Termination::RanToHorizon);
    CHECK(persistent.final_state().x > 0.0);

    p.omega = 1e6;
    int extinct = 0;
    for (std::uint64_t i = 0; i < 20; ++i) {
        RngStream rng = RngStream::substream(2026, i);
        const auto traj = simulate_diffusion(p, cfg, State{0, 2.0, 0.5}, 200.0, 200.0, rng);
        if (traj.termination == Termination::PredatorExtinct) ++extinct;
    }
    CHECK(extinct == 20); // none of the runs persists to t = 200
}

TEST_CASE("seasonal mortality: deterministic at 1e12, extinction-prone at 1e7") {
    ModelParams p;
    p.mortality = MortalitySchedule::cosine(0.6175, 0.047, 0.1);
    DiffusionConfig cfg;

    p.omega = 1e12;
    RngStream big(7);
    // samples on the slow segments; mid-jump instants amplify any phase
    // offset by the fast-segment speed and are not what "no difference" means
    const auto d = simulate_diffusion(p, cfg, State{0, 2.0, 0.5}, 20.0, 2.0, big);
    const auto o = simulate_ode(p, State{0, 2.0, 0.5}, 20.0, cfg.dt, 2.0);
    REQUIRE(d.samples.size() == o.samples.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
        sup = std::max(sup, std::abs(d.samples[i].x - o.samples[i].x));
        sup = std::max(sup, std::abs(d.samples[i].y - o.samples[i].y));
    }
    CHECK(sup < 1e-2); // indistinguishable from the deterministic run

    p.omega = 1e7;
    int extinct = 0;
    for (std::uint64_t i = 0; i < 5; ++i) {
        RngStream rng = RngStream::substream(7, i);
        const auto traj = simulate_diffusion(p, cfg, State{0, 2.0, 0.5}, 400.0, 400.0, rng);
        if (traj.termination == Termination::PredatorExtinct) ++extinct;
    }
    CHECK(extinct > 0); // the forced canard crossings kill runs at this omega
}

TEST_CASE("ensemble mean tracks the deterministic solution at small times") {
    ModelParams p;
    p.omega = 1e8; // weak noise
    DiffusionConfig cfg;
    const State init{0, 2.0, 0.5};
    const int n = 50;
    double sum_x = 0.0, sum2_x = 0.0;
    for (int i = 0; i < n; ++i) {
        RngStream rng = RngStream::substream(515, i);
        const auto traj = simulate_diffusion(p, cfg, init, 1.0, 1.0, rng);
        sum_x += traj.final_state().x;
        sum2_x += traj.final_state().x * traj.final_state().x;
    }
    const double mean = sum_x / n;
    const double sd = std::sqrt((sum2_x / n - mean * mean) * n / (n - 1.0));
    const auto ode = simulate_ode(p, init, 1.0, cfg.dt, 1.0);
    CHECK(std::abs(mean - ode.final_state().x) <= 4.0 * sd / std::sqrt(double(n)) + 1e-9);
}

TEST_CASE("nan in the state is a hard error") {
    ModelParams p;
    DiffusionConfig cfg;
    RngStream rng(1);
    CHECK_THROWS_AS(
        (void)simulate_diffusion(p, cfg, State{0, std::nan(""), 0.5}, 1.0, 1.0, rng),
        std::exception);
}

TEST_CASE("hybrid with the threshold disabled matches plain diffusion") {
    ModelParams p;
    p.omega = 1e5;
    DiffusionConfig cfg; // hybrid_threshold unset
    RngStream r1(42), r2(42);
    const auto a = simulate_hybrid(p, cfg, State{0, 2.0, 0.5}, 5.0, 0.5, r1);
    const auto b = simulate_diffusion(p, cfg, State{0, 2.0, 0.5}, 5.0, 0.5, r2);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].x == b.samples[i].x);
        CHECK(a.samples[i].y == b.samples[i].y);
    }
}

TEST_CASE("hybrid starts in jump mode below the threshold") {
    ModelParams p;
    p.omega = 1e6;
    DiffusionConfig cfg;
    cfg.hybrid_threshold = 1000.0;
    RngStream rng(5);
    // 500 prey individuals, below the 1000 hand-off
    const auto traj = simulate_hybrid(p, cfg, State{0, 5e-4, 0.3}, 0.05, 0.01, rng);
    CHECK(traj.event_count > 0);
}

TEST_CASE("hybrid switches to integer prey as the trajectory dips") {
    ModelParams p;
    p.omega = 1e6;
    p.mortality = MortalitySchedule::constant(0.6);
    DiffusionConfig cfg;
    cfg.hybrid_threshold = 1000.0;
    RngStream rng(11);
    const auto traj = simulate_hybrid(p, cfg, State{0, 2.0, 0.9}, 10.0, 0.01, rng);
    CHECK(traj.event_count > 0); // the dip went through jump dynamics
    // stitched trajectory is time-continuous and monotone
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        CHECK(traj.samples[i].t >= traj.samples[i - 1].t);
    // at this mortality the dip goes below one individual: prey absorbs
    CHECK(traj.absorption_time.has_value());
}
