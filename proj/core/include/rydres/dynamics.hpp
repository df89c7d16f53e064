#pragma once

#include <cstdint>
#include <vector>

#include "rydres/model.hpp"

namespace rydres {

/// Piecewise-constant Rabi-frequency drive: one symbol per entry, each held
/// for hold_time at fixed detuning.
struct DriveSchedule {
    std::vector<double> omega_values;
    double hold_time = 20.0;
    double delta = 0.0;

    void validate() const;
};

struct TrajectoryConfig {
    double dt = 0.1;          ///< integrator step; must be <= hold_time / 10
    std::uint64_t seed = 1;   ///< master seed of the noise stream
    std::uint64_t stream = 0; ///< sub-stream id, e.g. a sweep task index
    double n0 = 0.0;          ///< initial density in [0, 1]
    int samples_per_symbol = 20;
};

/// Sampled reservoir output. Samples are taken at samples_per_symbol equally
/// spaced instants per hold interval, the last one at the symbol end.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> n_samples;

    /// Per-symbol series: the sample at the end of each hold interval.
    std::vector<double> symbol_end_samples(int samples_per_symbol) const;
};

/// Classic fourth-order Runge-Kutta on dn/dt = F(n) with the Rabi frequency
/// switched per symbol. Deterministic and bit-reproducible. The step is
/// shrunk to the nearest divisor of the inter-sample interval so samples land
/// exactly on integration steps.
Trajectory integrate_ode(const DriveSchedule& schedule, const ModelParams& p,
                         const TrajectoryConfig& cfg);

/// Euler-Maruyama on dn = F(n) dt + sqrt(max(n,0) D dt) Z, Z ~ N(0,1) drawn
/// from a counter-based stream keyed by (seed, stream). After each step n is
/// reflected back into [0, 1]. Identical seeds give identical trajectories.
Trajectory integrate_sde(const DriveSchedule& schedule, const ModelParams& p,
                         const TrajectoryConfig& cfg);

/// Integrates the deterministic flow at fixed drive until |F(n)| < tol and
/// returns the final density. Throws std::runtime_error when the time cap
/// 1e4 / gamma is exceeded.
double relax_to_steady(const ModelParams& p, double n0, double tol);

}  // namespace rydres
