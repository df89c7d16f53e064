// Command-line driver for the mean-field reservoir experiments. Every
// subcommand resolves its settings as: config file < --set overrides <
// dedicated flags, then writes CSV outputs plus a manifest with the resolved
// configuration into --out.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "rydres/config.hpp"
#include "rydres/csv.hpp"
#include "rydres/experiment.hpp"
#include "rydres/model.hpp"
#include "rydres/signals.hpp"

namespace fs = std::filesystem;
using namespace rydres;

namespace {

struct CliContext {
    std::string config_path;
    std::vector<std::string> sets;
    std::vector<std::pair<std::string, std::string>> flag_overrides;
};

void add_common_options(CLI::App* cmd, CliContext& ctx) {
    cmd->add_option("--config", ctx.config_path, "configuration file (key = value lines)");
    cmd->add_option("--set", ctx.sets, "override one configuration key, key=value")
        ->take_all();
    for (const auto& [flag, key, desc] :
         std::vector<std::tuple<const char*, const char*, const char*>>{
             {"--out", "out_dir", "output directory"},
             {"--seed", "seed", "master seed"},
             {"--workers", "workers", "worker threads (0 = all cores)"}}) {
        const std::string k = key;
        cmd->add_option_function<std::string>(
            flag, [&ctx, k](const std::string& v) { ctx.flag_overrides.emplace_back(k, v); },
            desc);
    }
}

void add_key_option(CLI::App* cmd, CliContext& ctx, const std::string& flag,
                    const std::string& key, const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag, [&ctx, key](const std::string& v) { ctx.flag_overrides.emplace_back(key, v); },
        desc);
}

ExperimentConfig resolve_config(const CliContext& ctx) {
    ExperimentConfig cfg;
    if (!ctx.config_path.empty()) cfg = load_config(ctx.config_path);
    for (const auto& s : ctx.sets) apply_override(cfg, s);
    for (const auto& [key, value] : ctx.flag_overrides)
        apply_override(cfg, key + "=" + value);
    cfg.validate();
    return cfg;
}

std::string out_file(const ExperimentConfig& cfg, const char* name) {
    fs::create_directories(cfg.out_dir);
    return (fs::path(cfg.out_dir) / name).string();
}

int cmd_phase_diagram(const ExperimentConfig& cfg) {
    const auto pd = phase_diagram(
        linspace(cfg.phase_delta_min, cfg.phase_delta_max, cfg.phase_delta_points),
        linspace(cfg.phase_omega_min, cfg.phase_omega_max, cfg.phase_omega_points),
        cfg.model_params());
    const std::string path = out_file(cfg, "phase_diagram.csv");
    write_phase_diagram_csv(path, pd);
    const std::string summary = phase_diagram_summary(pd);
    write_manifest(cfg.out_dir, cfg, "phase-diagram", {summary});
    std::cout << summary << "\nwrote " << path << "\n";
    return 0;
}

int cmd_hysteresis(const ExperimentConfig& cfg) {
    const auto res = run_hysteresis(cfg, cfg.omega_cut);
    const std::string path = out_file(cfg, "hysteresis.csv");
    write_hysteresis_csv(path, res);
    std::string summary;
    if (res.open_interval)
        summary = "hysteresis open for delta in [" +
                  csv::format_float(res.open_interval->first) + ", " +
                  csv::format_float(res.open_interval->second) + "]";
    else
        summary = "hysteresis: branches coincide (no open interval)";
    write_manifest(cfg.out_dir, cfg, "hysteresis", {summary});
    std::cout << summary << "\nwrote " << path << "\n";
    return 0;
}

int cmd_relax_times(const ExperimentConfig& cfg) {
    const auto rows = relax_times_cut(cfg, cfg.omega_cut);
    const std::string path = out_file(cfg, "relax_times.csv");
    write_relax_times_csv(path, rows);
    int spinodal = 0;
    for (const auto& r : rows) spinodal += r.tau_relax ? 0 : 1;
    const std::string summary = "relaxation rows: " + std::to_string(rows.size()) +
                                ", spinodal-flagged: " + std::to_string(spinodal);
    write_manifest(cfg.out_dir, cfg, "relax-times", {summary});
    std::cout << summary << "\nwrote " << path << "\n";
    return 0;
}

int cmd_predict_sweep(const ExperimentConfig& cfg, const std::string& task) {
    const TimeSeriesData series = load_input_series(cfg, task);
    const auto result = predict_sweep(cfg, series, cfg.seed);

    const std::string sweep_path = out_file(cfg, "predict_sweep.csv");
    write_predict_sweep_csv(sweep_path, result);
    write_predict_detail_csv(out_file(cfg, "predict_detail.csv"), result);

    const SweepPointResult* best = nullptr;
    int failures = 0;
    for (const auto& pt : result.points) {
        if (!pt.ok) {
            ++failures;
            std::cerr << "delta " << pt.delta << ": " << pt.error << "\n";
            continue;
        }
        if (!best || pt.report.mean_mse < best->report.mean_mse) best = &pt;
    }
    std::vector<std::string> summary;
    summary.push_back("task: " + task);
    if (best)
        summary.push_back("minimum mean MSE " + csv::format_float(best->report.mean_mse) +
                          " at delta " + csv::format_float(best->delta));
    if (failures > 0)
        summary.push_back(std::to_string(failures) + " sweep point(s) failed");
    write_manifest(cfg.out_dir, cfg, "predict-sweep", summary);
    for (const auto& line : summary) std::cout << line << "\n";
    std::cout << "wrote " << sweep_path << "\n";
    return 0;
}

int cmd_relax_fit(const ExperimentConfig& cfg, const std::string& csv_path,
                  const std::string& time_column, const std::string& value_column) {
    std::vector<FitResult> fits;
    if (!csv_path.empty()) {
        const auto table = csv::read_table(csv_path, cfg.csv_delim());
        const std::size_t tc = table.column(time_column);
        const std::size_t vc = table.column(value_column);
        std::vector<double> times, values;
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            double t, v;
            if (!csv::parse_double(table.rows[r][tc], t) ||
                !csv::parse_double(table.rows[r][vc], v))
                throw std::runtime_error("relax-fit: bad number in data row " +
                                         std::to_string(r + 1));
            times.push_back(t);
            values.push_back(v);
        }
        fits.push_back(fit_exponential(times, values));
    } else {
        fits = relax_fit_square_wave(cfg);
    }

    const std::string path = out_file(cfg, "relax_fit.csv");
    write_fit_results_csv(path, fits);
    std::vector<std::string> summary;
    for (std::size_t i = 0; i < fits.size(); ++i)
        summary.push_back("segment " + std::to_string(i) + ": tau = " +
                          csv::format_float(fits[i].tau) + ", residual = " +
                          csv::format_float(fits[i].residual) +
                          (fits[i].degenerate ? " (degenerate)" : ""));
    write_manifest(cfg.out_dir, cfg, "relax-fit", summary);
    for (const auto& line : summary) std::cout << line << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rydres: driven-dissipative mean-field reservoir experiments"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CliContext ctx;

    auto* pd = app.add_subcommand("phase-diagram",
                                  "root-count map over a detuning x Rabi-frequency grid");
    add_common_options(pd, ctx);
    add_key_option(pd, ctx, "--delta-min", "phase_delta_min", "grid detuning minimum");
    add_key_option(pd, ctx, "--delta-max", "phase_delta_max", "grid detuning maximum");
    add_key_option(pd, ctx, "--delta-points", "phase_delta_points", "detuning grid size");
    add_key_option(pd, ctx, "--omega-min", "phase_omega_min", "grid Rabi minimum");
    add_key_option(pd, ctx, "--omega-max", "phase_omega_max", "grid Rabi maximum");
    add_key_option(pd, ctx, "--omega-points", "phase_omega_points", "Rabi grid size");

    auto* hy = app.add_subcommand("hysteresis",
                                  "quasi-static up/down detuning sweeps at one Rabi frequency");
    add_common_options(hy, ctx);
    add_key_option(hy, ctx, "--omega", "omega_cut", "Rabi frequency of the cut");
    add_key_option(hy, ctx, "--delta-min", "hyst_delta_min", "sweep start detuning");
    add_key_option(hy, ctx, "--delta-max", "hyst_delta_max", "sweep end detuning");
    add_key_option(hy, ctx, "--points", "hyst_points", "sweep points");
    add_key_option(hy, ctx, "--threshold", "hyst_threshold", "branch-difference threshold");

    auto* rt = app.add_subcommand("relax-times",
                                  "relaxation times of the stable branches along a cut");
    add_common_options(rt, ctx);
    add_key_option(rt, ctx, "--omega-cut", "omega_cut", "Rabi frequency of the cut");
    add_key_option(rt, ctx, "--delta-min", "relax_delta_min", "cut start detuning");
    add_key_option(rt, ctx, "--delta-max", "relax_delta_max", "cut end detuning");
    add_key_option(rt, ctx, "--points", "relax_points", "cut points");

    auto* ps = app.add_subcommand("predict-sweep",
                                  "prediction MSE over a detuning sweep");
    add_common_options(ps, ctx);
    std::string task = "lorenz";
    ps->add_option("--task", task, "input series: lorenz or csv")
        ->check(CLI::IsMember({"lorenz", "csv"}));
    add_key_option(ps, ctx, "--csv-path", "csv_path", "input file for the csv task");
    add_key_option(ps, ctx, "--csv-column", "csv_column", "value column of the csv task");
    add_key_option(ps, ctx, "--delta-min", "sweep_delta_min", "sweep start detuning");
    add_key_option(ps, ctx, "--delta-max", "sweep_delta_max", "sweep end detuning");
    add_key_option(ps, ctx, "--delta-points", "sweep_delta_points", "sweep points");
    add_key_option(ps, ctx, "--omega", "omega", "base Rabi frequency");
    add_key_option(ps, ctx, "--noise-d", "noise_d", "noise strength D");

    auto* rf = app.add_subcommand("relax-fit",
                                  "exponential relaxation fits of a square-wave response");
    add_common_options(rf, ctx);
    std::string fit_csv, time_column = "time", value_column = "value";
    rf->add_option("--csv-path", fit_csv, "fit an external (time, value) series instead");
    rf->add_option("--time-column", time_column, "time column of --csv-path");
    rf->add_option("--value-column", value_column, "value column of --csv-path");
    add_key_option(rf, ctx, "--delta", "delta", "detuning of the simulated response");
    add_key_option(rf, ctx, "--omega", "omega", "Rabi frequency of the simulated response");
    add_key_option(rf, ctx, "--period", "fit_period", "square-wave period");
    add_key_option(rf, ctx, "--depth", "fit_depth", "square-wave relative depth");
    add_key_option(rf, ctx, "--periods", "fit_periods", "number of periods");

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = resolve_config(ctx);
        if (pd->parsed()) return cmd_phase_diagram(cfg);
        if (hy->parsed()) return cmd_hysteresis(cfg);
        if (rt->parsed()) return cmd_relax_times(cfg);
        if (ps->parsed()) return cmd_predict_sweep(cfg, task);
        if (rf->parsed()) return cmd_relax_fit(cfg, fit_csv, time_column, value_column);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
