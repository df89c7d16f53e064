#include "rydres/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "rydres/rng.hpp"

namespace rydres {

namespace {

void check_config(const DriveSchedule& schedule, const ModelParams& p,
                  const TrajectoryConfig& cfg) {
    schedule.validate();
    p.validate();
    if (!(cfg.dt > 0.0) || cfg.dt > schedule.hold_time / 10.0)
        throw std::invalid_argument("TrajectoryConfig: need 0 < dt <= hold_time/10");
    if (cfg.n0 < 0.0 || cfg.n0 > 1.0)
        throw std::invalid_argument("TrajectoryConfig: n0 must be in [0, 1]");
    if (cfg.samples_per_symbol < 1)
        throw std::invalid_argument("TrajectoryConfig: samples_per_symbol >= 1");
}

// Steps between consecutive samples so that sample instants coincide with
// integration steps and the effective step never exceeds cfg.dt.
int steps_per_sample(const DriveSchedule& schedule, const TrajectoryConfig& cfg) {
    const double interval = schedule.hold_time / cfg.samples_per_symbol;
    return static_cast<int>(std::ceil(interval / cfg.dt - 1e-12));
}

double rk4_step(double n, double dt, const ModelParams& p) {
    const double k1 = drift(n, p);
    const double k2 = drift(n + 0.5 * dt * k1, p);
    const double k3 = drift(n + 0.5 * dt * k2, p);
    const double k4 = drift(n + dt * k3, p);
    return n + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double reflect_unit(double n) {
    // A single fold suffices for any step the integrator can take, but loop
    // in case both bounds are crossed.
    while (n < 0.0 || n > 1.0) {
        if (n < 0.0) n = -n;
        if (n > 1.0) n = 2.0 - n;
    }
    return n;
}

}  // namespace

void DriveSchedule::validate() const {
    if (omega_values.empty())
        throw std::invalid_argument("DriveSchedule: empty symbol list");
    if (!(hold_time > 0.0))
        throw std::invalid_argument("DriveSchedule: hold_time must be > 0");
    for (double w : omega_values)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("DriveSchedule: omega values must be >= 0");
}

std::vector<double> Trajectory::symbol_end_samples(int samples_per_symbol) const {
    std::vector<double> out;
    out.reserve(n_samples.size() / samples_per_symbol);
    for (std::size_t i = samples_per_symbol - 1; i < n_samples.size();
         i += samples_per_symbol)
        out.push_back(n_samples[i]);
    return out;
}

Trajectory integrate_ode(const DriveSchedule& schedule, const ModelParams& p,
                         const TrajectoryConfig& cfg) {
    check_config(schedule, p, cfg);

    const int inner = steps_per_sample(schedule, cfg);
    const double dt = schedule.hold_time / (cfg.samples_per_symbol * inner);
    const double sample_dt = schedule.hold_time / cfg.samples_per_symbol;

    Trajectory traj;
    traj.times.reserve(schedule.omega_values.size() * cfg.samples_per_symbol);
    traj.n_samples.reserve(traj.times.capacity());

    ModelParams ps = p;
    ps.delta = schedule.delta;
    double n = cfg.n0;
    for (std::size_t sym = 0; sym < schedule.omega_values.size(); ++sym) {
        ps.omega = schedule.omega_values[sym];
        const double t0 = static_cast<double>(sym) * schedule.hold_time;
        for (int s = 0; s < cfg.samples_per_symbol; ++s) {
            for (int k = 0; k < inner; ++k) n = rk4_step(n, dt, ps);
            traj.times.push_back(t0 + (s + 1) * sample_dt);
            traj.n_samples.push_back(n);
        }
    }
    return traj;
}

Trajectory integrate_sde(const DriveSchedule& schedule, const ModelParams& p,
                         const TrajectoryConfig& cfg) {
    check_config(schedule, p, cfg);

    const int inner = steps_per_sample(schedule, cfg);
    const double dt = schedule.hold_time / (cfg.samples_per_symbol * inner);
    const double sample_dt = schedule.hold_time / cfg.samples_per_symbol;

    Trajectory traj;
    traj.times.reserve(schedule.omega_values.size() * cfg.samples_per_symbol);
    traj.n_samples.reserve(traj.times.capacity());

    CounterRng rng(cfg.seed, cfg.stream);
    ModelParams ps = p;
    ps.delta = schedule.delta;
    const double noise_scale = std::sqrt(p.d * dt);

    double n = cfg.n0;
    for (std::size_t sym = 0; sym < schedule.omega_values.size(); ++sym) {
        ps.omega = schedule.omega_values[sym];
        const double t0 = static_cast<double>(sym) * schedule.hold_time;
        for (int s = 0; s < cfg.samples_per_symbol; ++s) {
            for (int k = 0; k < inner; ++k) {
                const double diffusion =
                    noise_scale * std::sqrt(n > 0.0 ? n : 0.0) * rng.normal();
                n = reflect_unit(n + drift(n, ps) * dt + diffusion);
            }
            traj.times.push_back(t0 + (s + 1) * sample_dt);
            traj.n_samples.push_back(n);
        }
    }
    return traj;
}

double relax_to_steady(const ModelParams& p, double n0, double tol) {
    p.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("relax_to_steady: tol must be > 0");
    if (n0 < 0.0 || n0 > 1.0)
        throw std::invalid_argument("relax_to_steady: n0 must be in [0, 1]");

    const double cap = 1e4 / p.gamma;
    const double dt = 0.05 / p.gamma;
    double n = n0;
    for (double t = 0.0; t < cap; t += dt) {
        if (std::abs(drift(n, p)) < tol) return n;
        n = rk4_step(n, dt, p);
    }
    if (std::abs(drift(n, p)) < tol) return n;
    throw std::runtime_error("relax_to_steady: no convergence within 1e4/gamma");
}

}  // namespace rydres
