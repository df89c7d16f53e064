#include "rydres/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "rydres/csv.hpp"
#include "rydres/parallel.hpp"

namespace rydres {

namespace {

// Sum of squares of y - (a e + b) for the closed-form (a, b) at fixed decay
// basis e_i = exp(-(t_i - t_0)/tau). Returns the fitted pair through out
// params.
double exp_fit_sse(const std::vector<double>& times, const std::vector<double>& values,
                   double tau, double& a, double& b) {
    const std::size_t n = times.size();
    const double t0 = times.front();
    double s_e = 0.0, s_ee = 0.0, s_y = 0.0, s_ey = 0.0;
    std::vector<double> basis(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::exp(-(times[i] - t0) / tau);
        basis[i] = e;
        s_e += e;
        s_ee += e * e;
        s_y += values[i];
        s_ey += e * values[i];
    }
    const double nn = static_cast<double>(n);
    const double det = s_ee * nn - s_e * s_e;
    if (std::abs(det) < 1e-14 * std::max(1.0, s_ee * nn)) {
        a = 0.0;  // basis indistinguishable from a constant
        b = s_y / nn;
    } else {
        a = (s_ey * nn - s_e * s_y) / det;
        b = (s_ee * s_y - s_e * s_ey) / det;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = values[i] - (a * basis[i] + b);
        sse += r * r;
    }
    return sse;
}

}  // namespace

FitResult fit_exponential(const std::vector<double>& times,
                          const std::vector<double>& values) {
    if (times.size() != values.size())
        throw std::invalid_argument("fit_exponential: times/values length mismatch");
    if (times.size() < 4)
        throw std::invalid_argument("fit_exponential: need at least 4 samples");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("fit_exponential: times must be increasing");

    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < times.size(); ++i)
        min_gap = std::min(min_gap, times[i] - times[i - 1]);
    const double span = times.back() - times.front();

    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double value_range = *hi_it - *lo_it;

    // Coarse log-spaced scan, then golden-section refinement in log tau.
    const int grid_points = 50;
    double best_tau = min_gap, best_sse = std::numeric_limits<double>::infinity();
    const double log_lo = std::log(min_gap), log_hi = std::log(span);
    for (int i = 0; i < grid_points; ++i) {
        const double tau =
            std::exp(log_lo + (log_hi - log_lo) * i / (grid_points - 1));
        double a, b;
        const double sse = exp_fit_sse(times, values, tau, a, b);
        if (sse < best_sse) {
            best_sse = sse;
            best_tau = tau;
        }
    }

    const double step = (log_hi - log_lo) / (grid_points - 1);
    double lo = std::max(log_lo, std::log(best_tau) - step);
    double hi = std::min(log_hi, std::log(best_tau) + step);
    const double gr = 0.6180339887498949;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double a_tmp, b_tmp;
    double f1 = exp_fit_sse(times, values, std::exp(x1), a_tmp, b_tmp);
    double f2 = exp_fit_sse(times, values, std::exp(x2), a_tmp, b_tmp);
    for (int i = 0; i < 80 && hi - lo > 1e-12; ++i) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = exp_fit_sse(times, values, std::exp(x1), a_tmp, b_tmp);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = exp_fit_sse(times, values, std::exp(x2), a_tmp, b_tmp);
        }
    }

    FitResult fit;
    fit.tau = std::exp(0.5 * (lo + hi));
    double sse = exp_fit_sse(times, values, fit.tau, fit.a, fit.b);
    if (best_sse < sse) {  // keep the grid winner if refinement drifted away
        fit.tau = best_tau;
        sse = exp_fit_sse(times, values, fit.tau, fit.a, fit.b);
    }
    fit.residual = std::sqrt(sse / static_cast<double>(times.size()));
    const double scale = std::max(std::abs(*lo_it), std::abs(*hi_it));
    fit.degenerate =
        value_range <= 1e-12 * std::max(1.0, scale) || std::abs(fit.a) <= 1e-12 * std::max(1.0, scale);
    return fit;
}

TimeSeriesData load_input_series(const ExperimentConfig& cfg, const std::string& task) {
    if (task == "lorenz") return lorenz_generate(cfg.lorenz_params());
    if (task == "csv") {
        if (cfg.csv_path.empty())
            throw std::runtime_error("csv task requires csv_path in the configuration");
        return ingest_csv(cfg.csv_path, cfg.csv_column, cfg.csv_delim());
    }
    throw std::invalid_argument("unknown task '" + task + "' (expected lorenz or csv)");
}

PredictionReport run_prediction(const ExperimentConfig& cfg,
                                const TimeSeriesData& series, double delta,
                                std::uint64_t master_seed, std::uint64_t stream) {
    cfg.validate();
    series.validate();

    ModelParams p = cfg.model_params();
    p.delta = delta;

    DriveSchedule schedule = encode(series, cfg.encoding_spec(), cfg.hold_time, delta);
    const std::vector<double> targets_source = normalize_unit(series.values);

    // Warm-up: relax to the steady state of the first symbol, then hold that
    // symbol for warmup_symbols extra hold intervals so the noise statistics
    // settle; those samples are dropped, keeping one transmission sample per
    // input symbol.
    ModelParams p_first = p;
    p_first.omega = schedule.omega_values.front();
    const double n_start = relax_to_steady(p_first, 0.0, 1e-9);

    if (cfg.warmup_symbols > 0) {
        schedule.omega_values.insert(schedule.omega_values.begin(),
                                     static_cast<std::size_t>(cfg.warmup_symbols),
                                     schedule.omega_values.front());
    }

    TrajectoryConfig tcfg;
    tcfg.dt = cfg.dt;
    tcfg.seed = master_seed;
    tcfg.stream = stream;
    tcfg.n0 = n_start;
    tcfg.samples_per_symbol = cfg.samples_per_symbol;

    const Trajectory traj = integrate_sde(schedule, p, tcfg);

    // Transmission record: every sample after the warm-up symbols. The input
    // series is brought to the record rate by holding each value for a
    // symbol, mirroring the piecewise-constant drive, so the target index
    // arithmetic below runs in record coordinates.
    const std::size_t warm_samples =
        static_cast<std::size_t>(cfg.warmup_symbols) *
        static_cast<std::size_t>(cfg.samples_per_symbol);
    std::vector<double> record(traj.n_samples.begin() +
                                   static_cast<std::ptrdiff_t>(warm_samples),
                               traj.n_samples.end());
    std::vector<double> record_input;
    record_input.reserve(record.size());
    for (double u : targets_source)
        record_input.insert(record_input.end(),
                            static_cast<std::size_t>(cfg.samples_per_symbol), u);

    const std::vector<double> smoothed =
        savitzky_golay(record, {cfg.filter_window, cfg.filter_order});
    // With stride == samples_per_symbol (the defaults) each sub-series holds
    // exactly one sample per input symbol, the sub-series differing in the
    // sampling instant inside the hold interval.
    const auto subs = multiplex_downsample(smoothed, cfg.stride);

    std::vector<double> per_series_mse;
    per_series_mse.reserve(subs.size());
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const auto ds = build_dataset(subs[i], record_input, cfg.window_m,
                                      static_cast<int>(i) + 1, cfg.stride);
        const auto [train, test] = split_chronological(ds, cfg.train_fraction);
        const ReadoutModel model = fit_readout(train, cfg.ridge_lambda);
        per_series_mse.push_back(evaluate(model, test));
    }
    return aggregate(per_series_mse, p);
}

PredictSweepResult predict_sweep(const ExperimentConfig& cfg,
                                 const TimeSeriesData& series,
                                 std::uint64_t master_seed) {
    cfg.validate();
    const std::vector<double> deltas =
        linspace(cfg.sweep_delta_min, cfg.sweep_delta_max, cfg.sweep_delta_points);

    PredictSweepResult result;
    result.points.resize(deltas.size());
    parallel_for(deltas.size(), cfg.workers, [&](std::size_t i) {
        auto& point = result.points[i];
        point.delta = deltas[i];
        try {
            point.report = run_prediction(cfg, series, deltas[i], master_seed,
                                          static_cast<std::uint64_t>(i));
            point.ok = true;
        } catch (const std::exception& e) {
            point.ok = false;
            point.error = e.what();
        }
    });
    return result;
}

std::vector<RelaxTimesRow> relax_times_cut(const ExperimentConfig& cfg,
                                           double omega_cut) {
    const std::vector<double> deltas =
        linspace(cfg.relax_delta_min, cfg.relax_delta_max, cfg.relax_points);
    ModelParams p = cfg.model_params();
    p.omega = omega_cut;

    std::vector<RelaxTimesRow> rows;
    rows.reserve(deltas.size());
    for (double delta : deltas) {
        p.delta = delta;
        const auto set = stationary_states(p);
        int branch = 0;
        for (const auto& s : set.states) {
            if (!s.stable) continue;
            RelaxTimesRow row;
            row.delta = delta;
            row.branch = branch++;
            row.n_ss = s.n_ss;
            row.tau_relax = s.tau_relax;
            rows.push_back(row);
        }
    }
    return rows;
}

HysteresisResult run_hysteresis(const ExperimentConfig& cfg, double omega) {
    ModelParams p = cfg.model_params();
    p.omega = omega;

    HysteresisResult res;
    res.up = hysteresis_sweep(p, cfg.hyst_delta_min, cfg.hyst_delta_max, cfg.hyst_points);
    res.down =
        hysteresis_sweep(p, cfg.hyst_delta_max, cfg.hyst_delta_min, cfg.hyst_points);

    // Compare branches at equal detuning (the down sweep is stored reversed).
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const std::size_t n = res.up.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = res.up.points[i];
        const auto& b = res.down.points[n - 1 - i];
        if (!a.ok || !b.ok) continue;
        if (std::abs(a.n_ss - b.n_ss) > cfg.hyst_threshold) {
            lo = std::min(lo, a.delta);
            hi = std::max(hi, a.delta);
        }
    }
    if (lo <= hi) res.open_interval = std::make_pair(lo, hi);
    return res;
}

std::vector<FitResult> relax_fit_square_wave(const ExperimentConfig& cfg) {
    cfg.validate();

    DriveSchedule schedule;
    schedule.delta = cfg.delta;
    schedule.hold_time = 0.5 * cfg.fit_period;
    const double omega_low = cfg.omega * (1.0 - cfg.fit_depth);
    for (int k = 0; k < cfg.fit_periods; ++k) {
        schedule.omega_values.push_back(cfg.omega);
        schedule.omega_values.push_back(omega_low);
    }

    ModelParams p = cfg.model_params();
    ModelParams p_low = p;
    p_low.omega = omega_low;
    const double n_start = relax_to_steady(p_low, 0.0, 1e-9);

    TrajectoryConfig tcfg;
    tcfg.dt = std::min(cfg.dt, schedule.hold_time / (2.0 * cfg.fit_samples));
    tcfg.seed = cfg.seed;
    tcfg.n0 = n_start;
    tcfg.samples_per_symbol = cfg.fit_samples;

    const Trajectory traj =
        cfg.noise_d > 0.0 ? integrate_sde(schedule, p, tcfg) : integrate_ode(schedule, p, tcfg);

    std::vector<FitResult> fits;
    fits.reserve(schedule.omega_values.size());
    const std::size_t per_symbol = static_cast<std::size_t>(cfg.fit_samples);
    for (std::size_t sym = 0; sym < schedule.omega_values.size(); ++sym) {
        const std::size_t begin = sym * per_symbol;
        std::vector<double> t(traj.times.begin() + begin,
                              traj.times.begin() + begin + per_symbol);
        std::vector<double> y(traj.n_samples.begin() + begin,
                              traj.n_samples.begin() + begin + per_symbol);
        fits.push_back(fit_exponential(t, y));
    }
    return fits;
}

// --- output files -----------------------------------------------------------

namespace fs = std::filesystem;

void write_phase_diagram_csv(const std::string& path, const PhaseDiagram& pd) {
    std::vector<csv::Row> rows;
    rows.reserve(pd.root_counts.size());
    for (std::size_t io = 0; io < pd.omega_grid.size(); ++io)
        for (std::size_t id = 0; id < pd.delta_grid.size(); ++id)
            rows.push_back({csv::format_float(pd.delta_grid[id]),
                            csv::format_float(pd.omega_grid[io]),
                            csv::format_int(pd.count_at(io, id))});
    csv::write_table(path, {"delta", "omega", "root_count"}, rows);
}

std::string phase_diagram_summary(const PhaseDiagram& pd) {
    double dlo = 0, dhi = 0, olo = 0, ohi = 0;
    bool any = false;
    for (std::size_t io = 0; io < pd.omega_grid.size(); ++io)
        for (std::size_t id = 0; id < pd.delta_grid.size(); ++id)
            if (pd.bistable_at(io, id)) {
                if (!any) {
                    dlo = dhi = pd.delta_grid[id];
                    olo = ohi = pd.omega_grid[io];
                    any = true;
                } else {
                    dlo = std::min(dlo, pd.delta_grid[id]);
                    dhi = std::max(dhi, pd.delta_grid[id]);
                    olo = std::min(olo, pd.omega_grid[io]);
                    ohi = std::max(ohi, pd.omega_grid[io]);
                }
            }
    if (!any) return "bistable region: empty";
    return "bistable region bounding box: delta in [" + csv::format_float(dlo) + ", " +
           csv::format_float(dhi) + "], omega in [" + csv::format_float(olo) + ", " +
           csv::format_float(ohi) + "]";
}

void write_hysteresis_csv(const std::string& path, const HysteresisResult& res) {
    std::vector<csv::Row> rows;
    rows.reserve(res.up.points.size() + res.down.points.size());
    auto emit = [&](const HysteresisBranch& branch, const char* name) {
        for (const auto& pt : branch.points)
            rows.push_back({name, csv::format_float(pt.delta),
                            csv::format_float(pt.n_ss), pt.ok ? "1" : "0"});
    };
    emit(res.up, "up");
    emit(res.down, "down");
    csv::write_table(path, {"direction", "delta", "n_ss", "ok"}, rows);
}

void write_relax_times_csv(const std::string& path,
                           const std::vector<RelaxTimesRow>& rows_in) {
    std::vector<csv::Row> rows;
    rows.reserve(rows_in.size());
    for (const auto& r : rows_in)
        rows.push_back({csv::format_float(r.delta), csv::format_int(r.branch),
                        csv::format_float(r.n_ss),
                        r.tau_relax ? csv::format_float(*r.tau_relax) : "",
                        r.tau_relax ? "0" : "1"});
    csv::write_table(path, {"delta", "branch", "n_ss", "tau_relax", "spinodal"}, rows);
}

void write_predict_sweep_csv(const std::string& path, const PredictSweepResult& res) {
    std::vector<csv::Row> rows;
    rows.reserve(res.points.size());
    for (const auto& pt : res.points) {
        if (pt.ok)
            rows.push_back({csv::format_float(pt.delta),
                            csv::format_float(pt.report.mean_mse),
                            csv::format_float(pt.report.std_mse), "1", ""});
        else
            rows.push_back({csv::format_float(pt.delta), "", "", "0", pt.error});
    }
    csv::write_table(path, {"delta", "mean_mse", "std_mse", "ok", "error"}, rows);
}

void write_predict_detail_csv(const std::string& path, const PredictSweepResult& res) {
    std::vector<csv::Row> rows;
    for (const auto& pt : res.points) {
        if (!pt.ok) continue;
        for (std::size_t i = 0; i < pt.report.per_series_mse.size(); ++i)
            rows.push_back({csv::format_float(pt.delta),
                            csv::format_int(static_cast<long long>(i) + 1),
                            csv::format_float(pt.report.per_series_mse[i])});
    }
    csv::write_table(path, {"delta", "subseries", "mse"}, rows);
}

void write_fit_results_csv(const std::string& path,
                           const std::vector<FitResult>& fits) {
    std::vector<csv::Row> rows;
    rows.reserve(fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i)
        rows.push_back({csv::format_int(static_cast<long long>(i)),
                        csv::format_float(fits[i].a), csv::format_float(fits[i].b),
                        csv::format_float(fits[i].tau),
                        csv::format_float(fits[i].residual),
                        fits[i].degenerate ? "1" : "0"});
    csv::write_table(path, {"segment", "a", "b", "tau", "residual", "degenerate"}, rows);
}

void write_manifest(const std::string& out_dir, const ExperimentConfig& cfg,
                    const std::string& command,
                    const std::vector<std::string>& summary_lines) {
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "manifest.txt", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write manifest in '" + out_dir + "'");
    out << "rydres " << kVersion << "\n";
    out << "command: " << command << "\n";
    for (const auto& line : summary_lines) out << line << "\n";
    out << "---\n";
    out << serialize_config(cfg);
}

}  // namespace rydres
