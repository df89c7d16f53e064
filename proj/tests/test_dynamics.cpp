#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rydres/dynamics.hpp"
#include "rydres/model.hpp"
#include "rydres/rng.hpp"

using namespace rydres;

namespace {

ModelParams reference_point() {
    ModelParams p;
    p.omega = 1.1;
    p.delta = 5.0;
    p.gamma_d = 10.0;
    p.v = 100.0;
    return p;
}

DriveSchedule constant_drive(double omega, double delta, int symbols,
                             double hold = 20.0) {
    DriveSchedule s;
    s.omega_values.assign(static_cast<std::size_t>(symbols), omega);
    s.hold_time = hold;
    s.delta = delta;
    return s;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("a stable stationary initial condition stays put") {
    const ModelParams p = reference_point();
    const auto set = stationary_states(p);
    REQUIRE(set.states.size() == 1);
    const double n_ss = set.states[0].n_ss;

    TrajectoryConfig cfg;
    cfg.n0 = n_ss;
    const auto traj = integrate_ode(constant_drive(p.omega, p.delta, 10), p, cfg);
    for (double n : traj.n_samples) CHECK(std::abs(n - n_ss) <= 1e-10);
}

TEST_CASE("relaxation from zero converges monotonically to the stationary state") {
    const ModelParams p = reference_point();
    const auto set = stationary_states(p);
    const double n_ss = set.states[0].n_ss;
    const double tau = *set.states[0].tau_relax;

    TrajectoryConfig cfg;
    cfg.n0 = 0.0;
    const int symbols = static_cast<int>(std::ceil(20.0 * tau / 20.0)) + 1;
    const auto traj = integrate_ode(constant_drive(p.omega, p.delta, symbols), p, cfg);

    for (std::size_t i = 1; i < traj.n_samples.size(); ++i)
        CHECK(traj.n_samples[i] >= traj.n_samples[i - 1] - 1e-12);
    CHECK(std::abs(traj.n_samples.back() - n_ss) <= 1e-6);
}

TEST_CASE("deterministic samples never cross the stationary point") {
    const ModelParams p = reference_point();
    TrajectoryConfig cfg;
    cfg.n0 = 0.0;
    const auto traj = integrate_ode(constant_drive(p.omega, p.delta, 5), p, cfg);
    for (std::size_t i = 1; i < traj.n_samples.size(); ++i) {
        const double dn = traj.n_samples[i] - traj.n_samples[i - 1];
        const double f = drift(traj.n_samples[i - 1], p);
        if (std::abs(dn) > 1e-13) CHECK(dn * f > 0.0);
    }
}

TEST_CASE("integrator converges at fourth order") {
    // Short hold so the transient is still alive at the end point.
    const ModelParams p = reference_point();
    const auto schedule = constant_drive(p.omega, p.delta, 1, 2.0);

    auto terminal = [&](double dt) {
        TrajectoryConfig cfg;
        cfg.dt = dt;
        cfg.n0 = 0.0;
        cfg.samples_per_symbol = 1;
        return integrate_ode(schedule, p, cfg).n_samples.back();
    };
    const double n1 = terminal(0.2);
    const double n2 = terminal(0.1);
    const double n3 = terminal(0.05);
    const double order = std::log2(std::abs(n1 - n2) / std::abs(n2 - n3));
    CHECK(order >= 3.5);
}

TEST_CASE("noiseless stochastic integration tracks the deterministic solution") {
    ModelParams p = reference_point();
    p.d = 0.0;
    DriveSchedule schedule;
    schedule.hold_time = 20.0;
    schedule.delta = 11.0;
    // A wiggly drive across the encoding interval.
    for (int i = 0; i < 20; ++i)
        schedule.omega_values.push_back(1.1 + 0.11 * 0.5 * (1.0 + std::sin(0.7 * i)));

    TrajectoryConfig cfg;
    cfg.dt = 1e-3;
    cfg.n0 = 0.05;
    const auto em = integrate_sde(schedule, p, cfg);
    const auto rk = integrate_ode(schedule, p, cfg);
    REQUIRE(em.n_samples.size() == rk.n_samples.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < em.n_samples.size(); ++i)
        worst = std::max(worst, std::abs(em.n_samples[i] - rk.n_samples[i]));
    CHECK(worst < 1e-4);
}

TEST_CASE("identical seeds reproduce the trajectory bit for bit") {
    ModelParams p = reference_point();
    p.d = 1e-3;
    const auto schedule = constant_drive(p.omega, 11.0, 10);
    TrajectoryConfig cfg;
    cfg.seed = 42;
    cfg.stream = 3;
    cfg.n0 = 0.05;
    const auto a = integrate_sde(schedule, p, cfg);
    const auto b = integrate_sde(schedule, p, cfg);
    CHECK(a.n_samples == b.n_samples);
    CHECK(a.times == b.times);

    cfg.stream = 4;
    const auto c = integrate_sde(schedule, p, cfg);
    CHECK(a.n_samples != c.n_samples);
}

TEST_CASE("ensemble mean at small noise sits on the stationary density") {
    ModelParams p = reference_point();
    p.d = 1e-4;
    const auto set = stationary_states(p);
    const double n_ss = set.states[0].n_ss;

    const auto schedule = constant_drive(p.omega, p.delta, 1, 10.0);
    double sum = 0.0, sum_sq = 0.0;
    const int runs = 1000;
    for (int s = 0; s < runs; ++s) {
        TrajectoryConfig cfg;
        cfg.seed = 1234;
        cfg.stream = static_cast<std::uint64_t>(s);
        cfg.n0 = n_ss;
        cfg.samples_per_symbol = 1;
        const double terminal = integrate_sde(schedule, p, cfg).n_samples.back();
        sum += terminal;
        sum_sq += terminal * terminal;
    }
    const double mean = sum / runs;
    const double var = sum_sq / runs - mean * mean;
    const double std_err = std::sqrt(var / runs);
    CHECK(std::abs(mean - n_ss) <= 3.0 * std_err);
}

TEST_CASE("stationary variance scales linearly with the noise strength") {
    ModelParams p = reference_point();
    const auto set = stationary_states(p);
    const double n_ss = set.states[0].n_ss;

    auto stationary_variance = [&](double d) {
        ModelParams pn = p;
        pn.d = d;
        TrajectoryConfig cfg;
        cfg.seed = 99;
        cfg.n0 = n_ss;
        cfg.samples_per_symbol = 20;
        const auto traj = integrate_sde(constant_drive(p.omega, p.delta, 200), pn, cfg);
        const std::size_t burn = traj.n_samples.size() / 10;
        double s = 0.0, ss = 0.0;
        const double count = static_cast<double>(traj.n_samples.size() - burn);
        for (std::size_t i = burn; i < traj.n_samples.size(); ++i) {
            s += traj.n_samples[i];
            ss += traj.n_samples[i] * traj.n_samples[i];
        }
        const double mean = s / count;
        return ss / count - mean * mean;
    };

    const double v1 = stationary_variance(1e-5);
    const double v2 = stationary_variance(1e-4);
    const double slope = std::log10(v2 / v1);  // one decade apart
    CHECK(slope == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("reflection keeps every sample inside [0, 1] even at huge noise") {
    ModelParams p;
    p.omega = 1.21;
    p.delta = 11.45;
    p.gamma_d = 10.0;
    p.v = 100.0;
    p.d = 1.0;
    TrajectoryConfig cfg;
    cfg.seed = 5;
    cfg.n0 = 0.5;
    const auto traj = integrate_sde(constant_drive(p.omega, p.delta, 200), p, cfg);
    for (double n : traj.n_samples) {
        CHECK(n >= 0.0);
        CHECK(n <= 1.0);
    }
}

TEST_CASE("relax_to_steady fixed point and basin structure") {
    const ModelParams mono = reference_point();
    const auto mono_set = stationary_states(mono);
    const double n_ss = mono_set.states[0].n_ss;

    CHECK(relax_to_steady(mono, n_ss, 1e-9) == doctest::Approx(n_ss).epsilon(1e-12));
    CHECK(std::abs(relax_to_steady(mono, 0.0, 1e-10) - n_ss) <= 1e-6);

    ModelParams bi = mono;
    bi.omega = 1.21;
    bi.delta = 11.45;
    const auto bi_set = stationary_states(bi);
    REQUIRE(bi_set.states.size() == 3);
    const double low = bi_set.states[0].n_ss;
    const double mid = bi_set.states[1].n_ss;
    const double high = bi_set.states[2].n_ss;
    CHECK(std::abs(relax_to_steady(bi, mid - 1e-3, 1e-10) - low) <= 1e-6);
    CHECK(std::abs(relax_to_steady(bi, mid + 1e-3, 1e-10) - high) <= 1e-6);
}

TEST_CASE("sample extraction per symbol end") {
    const ModelParams p = reference_point();
    TrajectoryConfig cfg;
    cfg.samples_per_symbol = 4;
    const auto traj = integrate_ode(constant_drive(p.omega, p.delta, 3), p, cfg);
    REQUIRE(traj.n_samples.size() == 12);
    const auto ends = traj.symbol_end_samples(4);
    REQUIRE(ends.size() == 3);
    CHECK(ends[0] == traj.n_samples[3]);
    CHECK(ends[1] == traj.n_samples[7]);
    CHECK(ends[2] == traj.n_samples[11]);
}

TEST_CASE("precondition violations are rejected before integration") {
    const ModelParams p = reference_point();
    const auto schedule = constant_drive(p.omega, p.delta, 2);

    TrajectoryConfig cfg;
    cfg.dt = 3.0;  // hold_time / 10 = 2
    CHECK_THROWS_AS(integrate_ode(schedule, p, cfg), std::invalid_argument);

    cfg.dt = 0.1;
    cfg.n0 = 1.5;
    CHECK_THROWS_AS(integrate_sde(schedule, p, cfg), std::invalid_argument);

    cfg.n0 = 0.0;
    cfg.samples_per_symbol = 0;
    CHECK_THROWS_AS(integrate_ode(schedule, p, cfg), std::invalid_argument);

    DriveSchedule empty;
    empty.omega_values.clear();
    CHECK_THROWS_AS(integrate_ode(empty, p, TrajectoryConfig{}), std::invalid_argument);

    CHECK_THROWS_AS(relax_to_steady(p, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("counter rng streams are reproducible and independent") {
    CounterRng a(7, 0), b(7, 0), c(7, 1);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool any_diff = false;
    CounterRng a2(7, 0);
    for (int i = 0; i < 100; ++i) any_diff |= a2.next_u64() != c.next_u64();
    CHECK(any_diff);

    CounterRng g(123, 9);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double z = g.normal();
        sum += z;
        sum_sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sum_sq / n == doctest::Approx(1.0).epsilon(0.02));

    CounterRng u(5, 5);
    for (int i = 0; i < 10000; ++i) {
        const double x = u.uniform_pos();
        CHECK(x > 0.0);
        CHECK(x <= 1.0);
    }
}

}  // TEST_SUITE
