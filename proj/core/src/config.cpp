#include "rydres/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "rydres/csv.hpp"

namespace rydres {

namespace {

using Member = std::variant<double ExperimentConfig::*, int ExperimentConfig::*,
                            std::uint64_t ExperimentConfig::*,
                            std::string ExperimentConfig::*>;

struct Field {
    const char* key;
    Member member;
};

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        {"omega", &ExperimentConfig::omega},
        {"delta", &ExperimentConfig::delta},
        {"gamma", &ExperimentConfig::gamma},
        {"gamma_d", &ExperimentConfig::gamma_d},
        {"v", &ExperimentConfig::v},
        {"noise_d", &ExperimentConfig::noise_d},
        {"delta_omega_rel", &ExperimentConfig::delta_omega_rel},
        {"hold_time", &ExperimentConfig::hold_time},
        {"dt", &ExperimentConfig::dt},
        {"samples_per_symbol", &ExperimentConfig::samples_per_symbol},
        {"warmup_symbols", &ExperimentConfig::warmup_symbols},
        {"sweep_delta_min", &ExperimentConfig::sweep_delta_min},
        {"sweep_delta_max", &ExperimentConfig::sweep_delta_max},
        {"sweep_delta_points", &ExperimentConfig::sweep_delta_points},
        {"phase_delta_min", &ExperimentConfig::phase_delta_min},
        {"phase_delta_max", &ExperimentConfig::phase_delta_max},
        {"phase_delta_points", &ExperimentConfig::phase_delta_points},
        {"phase_omega_min", &ExperimentConfig::phase_omega_min},
        {"phase_omega_max", &ExperimentConfig::phase_omega_max},
        {"phase_omega_points", &ExperimentConfig::phase_omega_points},
        {"hyst_delta_min", &ExperimentConfig::hyst_delta_min},
        {"hyst_delta_max", &ExperimentConfig::hyst_delta_max},
        {"hyst_points", &ExperimentConfig::hyst_points},
        {"hyst_threshold", &ExperimentConfig::hyst_threshold},
        {"relax_delta_min", &ExperimentConfig::relax_delta_min},
        {"relax_delta_max", &ExperimentConfig::relax_delta_max},
        {"relax_points", &ExperimentConfig::relax_points},
        {"omega_cut", &ExperimentConfig::omega_cut},
        {"window_m", &ExperimentConfig::window_m},
        {"stride", &ExperimentConfig::stride},
        {"filter_window", &ExperimentConfig::filter_window},
        {"filter_order", &ExperimentConfig::filter_order},
        {"train_fraction", &ExperimentConfig::train_fraction},
        {"ridge_lambda", &ExperimentConfig::ridge_lambda},
        {"lorenz_sigma", &ExperimentConfig::lorenz_sigma},
        {"lorenz_rho", &ExperimentConfig::lorenz_rho},
        {"lorenz_beta", &ExperimentConfig::lorenz_beta},
        {"lorenz_dt", &ExperimentConfig::lorenz_dt},
        {"lorenz_steps", &ExperimentConfig::lorenz_steps},
        {"lorenz_x0", &ExperimentConfig::lorenz_x0},
        {"lorenz_y0", &ExperimentConfig::lorenz_y0},
        {"lorenz_z0", &ExperimentConfig::lorenz_z0},
        {"lorenz_transient", &ExperimentConfig::lorenz_transient},
        {"csv_path", &ExperimentConfig::csv_path},
        {"csv_column", &ExperimentConfig::csv_column},
        {"csv_delimiter", &ExperimentConfig::csv_delimiter},
        {"fit_period", &ExperimentConfig::fit_period},
        {"fit_depth", &ExperimentConfig::fit_depth},
        {"fit_periods", &ExperimentConfig::fit_periods},
        {"fit_samples", &ExperimentConfig::fit_samples},
        {"seed", &ExperimentConfig::seed},
        {"workers", &ExperimentConfig::workers},
        {"out_dir", &ExperimentConfig::out_dir},
    };
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

void assign(ExperimentConfig& cfg, const Field& field, const std::string& value) {
    std::visit(
        [&](auto member) {
            auto& slot = cfg.*member;
            using T = std::remove_reference_t<decltype(slot)>;
            if constexpr (std::is_same_v<T, std::string>) {
                slot = value;
            } else {
                T parsed{};
                const char* first = value.data();
                const char* last = value.data() + value.size();
                const auto res = std::from_chars(first, last, parsed);
                if (res.ec != std::errc() || res.ptr != last)
                    throw std::runtime_error("config: bad value '" + value + "' for key '" +
                                             field.key + "'");
                slot = parsed;
            }
        },
        field.member);
}

const Field& find_field(const std::string& key) {
    for (const auto& f : fields())
        if (key == f.key) return f;
    throw std::runtime_error("config: unknown key '" + key + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        assign(cfg, find_field(key), value);
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    for (const auto& field : fields()) {
        out << field.key << " = ";
        std::visit(
            [&](auto member) {
                const auto& slot = cfg.*member;
                using T = std::remove_cvref_t<decltype(slot)>;
                if constexpr (std::is_same_v<T, std::string>)
                    out << slot;
                else if constexpr (std::is_same_v<T, double>)
                    out << csv::format_float(slot);
                else
                    out << slot;
            },
            field.member);
        out << '\n';
    }
    return out.str();
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::runtime_error("config: override must look like key=value, got '" +
                                 assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    assign(cfg, find_field(key), value);
}

void ExperimentConfig::validate() const {
    model_params().validate();
    encoding_spec().validate();
    if (!(hold_time > 0.0) || !(dt > 0.0) || dt > hold_time / 10.0)
        throw std::invalid_argument("config: need 0 < dt <= hold_time/10");
    if (samples_per_symbol < 1 || warmup_symbols < 0)
        throw std::invalid_argument("config: bad sampling settings");
    if (sweep_delta_points < 1 || phase_delta_points < 1 || phase_omega_points < 1 ||
        hyst_points < 1 || relax_points < 1)
        throw std::invalid_argument("config: grids must have at least one point");
    if (window_m < 1 || stride < 1)
        throw std::invalid_argument("config: window_m and stride must be >= 1");
    if (filter_order < 0 || filter_order >= filter_window)
        throw std::invalid_argument("config: need 0 <= filter_order < filter_window");
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw std::invalid_argument("config: train_fraction must be in (0, 1)");
    if (ridge_lambda < 0.0)
        throw std::invalid_argument("config: ridge_lambda must be >= 0");
    if (csv_delimiter.size() != 1)
        throw std::invalid_argument("config: csv_delimiter must be one character");
    if (fit_periods < 1 || fit_samples < 2 || !(fit_period > 0.0) ||
        !(fit_depth > 0.0) || fit_depth >= 1.0)
        throw std::invalid_argument("config: bad relaxation-fit settings");
    lorenz_params().validate();
    if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
}

ModelParams ExperimentConfig::model_params() const {
    ModelParams p;
    p.omega = omega;
    p.delta = delta;
    p.gamma = gamma;
    p.gamma_d = gamma_d;
    p.v = v;
    p.d = noise_d;
    return p;
}

EncodingSpec ExperimentConfig::encoding_spec() const {
    // The sweep drives between Omega and Omega (1 + modulation amplitude).
    return {omega, omega * (1.0 + delta_omega_rel)};
}

LorenzParams ExperimentConfig::lorenz_params() const {
    LorenzParams lp;
    lp.sigma = lorenz_sigma;
    lp.rho = lorenz_rho;
    lp.beta = lorenz_beta;
    lp.dt = lorenz_dt;
    lp.steps = lorenz_steps;
    lp.initial = {lorenz_x0, lorenz_y0, lorenz_z0};
    lp.transient_time = lorenz_transient;
    return lp;
}

char ExperimentConfig::csv_delim() const {
    return csv_delimiter.empty() ? ',' : csv_delimiter[0];
}

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw std::invalid_argument("linspace: points must be >= 1");
    std::vector<double> grid(static_cast<std::size_t>(points));
    if (points == 1) {
        grid[0] = lo;
        return grid;
    }
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return grid;
}

}  // namespace rydres
