#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rydres {

/// Parameters of the driven-dissipative mean-field model. All rates are in
/// units of the spontaneous-emission rate gamma, which sets the time unit
/// (gamma = 1 internally); detuning and interaction shift share that unit.
struct ModelParams {
    double omega = 1.1;     ///< Rabi frequency
    double delta = 0.0;     ///< detuning
    double gamma = 1.0;     ///< spontaneous-emission rate (time unit)
    double gamma_d = 10.0;  ///< dephasing rate
    double v = 100.0;       ///< interaction shift at full Rydberg density
    double d = 0.0;         ///< multiplicative noise strength

    /// Combined dissipation rate (gamma + gamma_d) / 2.
    double big_gamma() const { return 0.5 * (gamma + gamma_d); }

    /// Throws std::invalid_argument unless gamma > 0, gamma_d >= 0,
    /// omega >= 0 and d >= 0 (all finite).
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

/// Mean-field drift of the Rydberg density,
///   F(n) = -Omega^2 Gamma (n - 1/2) / (Gamma^2 + (Delta - n V)^2) - gamma n.
/// Pure; the denominator is bounded below by Gamma^2 > 0.
inline double drift(double n, const ModelParams& p) {
    const double g2 = p.big_gamma();
    const double w = p.delta - n * p.v;
    const double den = g2 * g2 + w * w;
    return -(p.omega * p.omega) * g2 * (n - 0.5) / den - p.gamma * n;
}

/// Analytic derivative dF/dn, used for stability classification and
/// relaxation times.
inline double drift_derivative(double n, const ModelParams& p) {
    const double g2 = p.big_gamma();
    const double w = p.delta - n * p.v;
    const double den = g2 * g2 + w * w;
    const double num = den + 2.0 * p.v * w * (n - 0.5);
    return -(p.omega * p.omega) * g2 * num / (den * den) - p.gamma;
}

/// Steady-state optical coherence after adiabatic elimination,
///   q = -i Omega (n - 1/2) / (i (Delta - n V) + Gamma).
/// Satisfies Omega * Im(q) - gamma * n == drift(n, p).
std::complex<double> coherence_adiabatic(double n, const ModelParams& p);

/// One stationary solution of F(n) = 0.
struct StationaryState {
    double n_ss = 0.0;
    bool stable = false;
    /// 1 / |F'(n_ss)|; absent when the state is marginal (|F'| below the
    /// spinodal threshold).
    std::optional<double> tau_relax;
};

/// All stationary states at one parameter point, ascending in n_ss.
/// Between one and three states exist; with three, stabilities alternate
/// stable / unstable / stable.
struct StationarySet {
    ModelParams params;
    std::vector<StationaryState> states;

    int stable_count() const;
    /// Lowest / highest stable state; throws if none exist.
    const StationaryState& lowest_stable() const;
    const StationaryState& highest_stable() const;
};

/// |F'| below this is treated as a spinodal (diverging relaxation time).
inline constexpr double kSpinodalThreshold = 1e-10;
/// Stationary roots closer than this are merged into one.
inline constexpr double kRootMergeTolerance = 1e-9;

/// Finds every root of F in (0, 1/2). Stationary densities are the real
/// roots of the cubic
///   gamma V^2 n^3 - 2 gamma Delta V n^2
///     + (gamma (Gamma^2 + Delta^2) + Omega^2 Gamma) n - Omega^2 Gamma / 2,
/// located by bracketing F on its monotone intervals (the derivative of the
/// cubic is solved in closed form), bisecting each sign change, and
/// Newton-polishing on F until |F(n)| < 1e-13 (units gamma = 1). V = 0
/// degenerates to a single closed-form root. Throws std::runtime_error if a
/// polish fails to converge within 100 steps.
StationarySet stationary_states(const ModelParams& p);

/// Relaxation time 1 / |F'(n_ss)| of a stationary density, or nullopt at a
/// spinodal.
std::optional<double> relaxation_time(double n_ss, const ModelParams& p);

/// Root-count map over a detuning x Rabi-frequency grid. root_counts is
/// row-major with shape [omega_grid.size()][delta_grid.size()]; a cell value
/// of -1 flags a solver failure at that point (never aborts the grid).
struct PhaseDiagram {
    std::vector<double> delta_grid;
    std::vector<double> omega_grid;
    std::vector<int> root_counts;
    std::vector<bool> bistable_mask;  ///< true exactly where root count = 3

    int count_at(std::size_t omega_idx, std::size_t delta_idx) const {
        return root_counts[omega_idx * delta_grid.size() + delta_idx];
    }
    bool bistable_at(std::size_t omega_idx, std::size_t delta_idx) const {
        return bistable_mask[omega_idx * delta_grid.size() + delta_idx];
    }
};

PhaseDiagram phase_diagram(const std::vector<double>& delta_grid,
                           const std::vector<double>& omega_grid,
                           const ModelParams& p_base);

/// One point of a quasi-static detuning sweep.
struct SweepPoint {
    double delta = 0.0;
    double n_ss = 0.0;
    bool ok = true;  ///< false when the stationary solve failed at this delta
};

struct HysteresisBranch {
    enum class Direction { up, down };
    Direction direction = Direction::up;
    std::vector<SweepPoint> points;
};

/// Quasi-static continuation from delta_from to delta_to in `steps` points
/// (steps >= 2, or a single point when delta_from == delta_to). Each step
/// follows the stable root nearest the previous one; when that branch
/// disappears the sweep jumps to the nearest surviving stable root. The
/// first point takes the lowest stable root. Direction is inferred from the
/// argument order.
HysteresisBranch hysteresis_sweep(const ModelParams& p_base, double delta_from,
                                  double delta_to, int steps);

}  // namespace rydres
