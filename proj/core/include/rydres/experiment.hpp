#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydres/config.hpp"
#include "rydres/dynamics.hpp"
#include "rydres/model.hpp"
#include "rydres/pipeline.hpp"
#include "rydres/signals.hpp"

namespace rydres {

inline constexpr const char* kVersion = "0.1.0";

/// Result of fitting a * exp(-t / tau) + b, with t measured from the first
/// sample of the fitted window.
struct FitResult {
    double a = 0.0;
    double b = 0.0;
    double tau = 0.0;
    double residual = 0.0;  ///< root-mean-square misfit
    bool degenerate = false;  ///< flat data: residual ~ 0 with a ~ 0, tau arbitrary
};

/// Exponential relaxation fit. tau is searched by golden-section refinement
/// around the best of 50 log-spaced candidates in [min spacing, span]; the
/// (a, b) subproblem is linear and solved in closed form at every candidate.
/// Needs at least 4 samples. Never fails silently: degenerate data comes
/// back flagged, non-monotone data with its (large) residual.
FitResult fit_exponential(const std::vector<double>& times,
                          const std::vector<double>& values);

/// Loads the prediction input named by `task`: "lorenz" generates the
/// configured Lorenz x series, "csv" ingests cfg.csv_path / cfg.csv_column.
TimeSeriesData load_input_series(const ExperimentConfig& cfg, const std::string& task);

/// Runs the full learning pipeline at one detuning: encode, warm up (steady
/// state plus warmup_symbols held at the first symbol, all discarded),
/// integrate the stochastic dynamics, smooth the sampled record, split it
/// into `stride` interleaved sub-series, and fit one readout per sub-series.
/// At the defaults (stride == samples_per_symbol == 20) every sub-series
/// carries one transmission sample per input symbol, the sub-series
/// differing in where inside the hold interval they sample, and each target
/// is the input value one symbol past the window.
PredictionReport run_prediction(const ExperimentConfig& cfg,
                                const TimeSeriesData& series, double delta,
                                std::uint64_t master_seed, std::uint64_t stream);

struct SweepPointResult {
    double delta = 0.0;
    PredictionReport report;
    bool ok = false;
    std::string error;  ///< failure context when !ok
};

struct PredictSweepResult {
    std::vector<SweepPointResult> points;
};

/// Prediction sweep over the configured detuning grid. Points run
/// concurrently (cfg.workers); the noise stream of each point is derived
/// from (master_seed, grid index), so results are independent of scheduling.
/// Failures are flagged in-row, never dropped.
PredictSweepResult predict_sweep(const ExperimentConfig& cfg,
                                 const TimeSeriesData& series,
                                 std::uint64_t master_seed);

/// One detuning of a relaxation-time cut: up to two stable branches.
struct RelaxTimesRow {
    double delta = 0.0;
    int branch = 0;  ///< 0 = lower stable state, 1 = upper
    double n_ss = 0.0;
    std::optional<double> tau_relax;  ///< absent at a spinodal
};

std::vector<RelaxTimesRow> relax_times_cut(const ExperimentConfig& cfg,
                                           double omega_cut);

struct HysteresisResult {
    HysteresisBranch up;
    HysteresisBranch down;
    /// Detuning interval where the branches differ by more than the
    /// configured threshold; absent when they coincide everywhere.
    std::optional<std::pair<double, double>> open_interval;
};

HysteresisResult run_hysteresis(const ExperimentConfig& cfg, double omega);

/// Square-wave response fits: the drive alternates between omega and
/// omega * (1 - fit_depth) every half period; each half-period relaxation is
/// fitted separately.
std::vector<FitResult> relax_fit_square_wave(const ExperimentConfig& cfg);

// --- output files -----------------------------------------------------------
// All writers emit UTF-8 CSV with a header row, values at full precision.
// Rows are ordered by grid index, so identical inputs give identical bytes.

void write_phase_diagram_csv(const std::string& path, const PhaseDiagram& pd);
std::string phase_diagram_summary(const PhaseDiagram& pd);

void write_hysteresis_csv(const std::string& path, const HysteresisResult& res);
void write_relax_times_csv(const std::string& path,
                           const std::vector<RelaxTimesRow>& rows);
void write_predict_sweep_csv(const std::string& path, const PredictSweepResult& res);
void write_predict_detail_csv(const std::string& path, const PredictSweepResult& res);
void write_fit_results_csv(const std::string& path,
                           const std::vector<FitResult>& fits);

/// Writes <out_dir>/manifest.txt: tool version, command, extra summary
/// lines, then the resolved configuration.
void write_manifest(const std::string& out_dir, const ExperimentConfig& cfg,
                    const std::string& command,
                    const std::vector<std::string>& summary_lines = {});

}  // namespace rydres
