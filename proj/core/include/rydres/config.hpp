#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rydres/model.hpp"
#include "rydres/signals.hpp"

namespace rydres {

/// Resolved settings of one experiment run. Defaults reproduce the reference
/// operating point: Omega/gamma = 1.1, modulation amplitude 0.1 Omega,
/// modulation period gamma T = 20, noise D/gamma = 1e-4, V/gamma = 100,
/// gamma_d/gamma = 10, window M = 200, 20-way multiplexing, 10/3 smoothing,
/// 70/30 chronological split.
struct ExperimentConfig {
    // model
    double omega = 1.1;
    double delta = 11.0;
    double gamma = 1.0;
    double gamma_d = 10.0;
    double v = 100.0;
    double noise_d = 1e-4;

    // drive encoding
    double delta_omega_rel = 0.1;  ///< modulation amplitude as a fraction of omega
    double hold_time = 20.0;       ///< symbol duration, units 1/gamma
    double dt = 0.1;               ///< integrator step, units 1/gamma
    int samples_per_symbol = 20;
    int warmup_symbols = 10;  ///< extra leading symbols dropped before learning

    // prediction sweep
    double sweep_delta_min = 5.0;
    double sweep_delta_max = 15.0;
    int sweep_delta_points = 21;

    // phase diagram grid
    double phase_delta_min = 0.0;
    double phase_delta_max = 30.0;
    int phase_delta_points = 200;
    double phase_omega_min = 0.5;
    double phase_omega_max = 3.0;
    int phase_omega_points = 200;

    // hysteresis scan
    double hyst_delta_min = 0.0;
    double hyst_delta_max = 30.0;
    int hyst_points = 400;
    double hyst_threshold = 1e-6;  ///< branch difference that counts as open

    // relaxation-time cut
    double relax_delta_min = 0.0;
    double relax_delta_max = 30.0;
    int relax_points = 400;
    double omega_cut = 1.21;

    // learning pipeline
    int window_m = 200;
    int stride = 20;
    int filter_window = 10;
    int filter_order = 3;
    double train_fraction = 0.7;
    double ridge_lambda = 0.0;

    // input series
    double lorenz_sigma = 10.0;
    double lorenz_rho = 28.0;
    double lorenz_beta = 8.0 / 3.0;
    double lorenz_dt = 0.04;
    int lorenz_steps = 16000;
    double lorenz_x0 = 1.0;
    double lorenz_y0 = 1.0;
    double lorenz_z0 = 1.0;
    double lorenz_transient = 10.0;
    std::string csv_path;
    std::string csv_column = "value";
    std::string csv_delimiter = ",";

    // square-wave relaxation fit
    double fit_period = 40.0;  ///< modulation period, units 1/gamma
    double fit_depth = 0.15;   ///< relative amplitude of the square modulation
    int fit_periods = 3;
    int fit_samples = 200;  ///< samples per half-period

    // run control
    std::uint64_t seed = 1;
    int workers = 0;  ///< 0 = all hardware threads
    std::string out_dir = "out";

    bool operator==(const ExperimentConfig&) const = default;

    void validate() const;

    ModelParams model_params() const;
    EncodingSpec encoding_spec() const;
    LorenzParams lorenz_params() const;
    char csv_delim() const;
};

/// Parses `key = value` lines ('#' starts a comment, blank lines ignored).
/// Unknown keys and malformed values are errors. parse(serialize(c)) == c.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

/// Applies one `key=value` override in place; throws on unknown key.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

/// Uniform grid of `points` values from lo to hi inclusive (a single point
/// sits at lo).
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace rydres
