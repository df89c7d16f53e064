#include "rydres/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rydres/csv.hpp"

namespace rydres {

void TimeSeriesData::validate() const {
    if (values.empty()) throw std::invalid_argument("TimeSeriesData: empty series");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("TimeSeriesData: non-finite sample");
}

void LorenzParams::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("LorenzParams: dt must be > 0");
    if (steps < 1) throw std::invalid_argument("LorenzParams: steps must be >= 1");
    if (transient_time < 0.0)
        throw std::invalid_argument("LorenzParams: transient_time must be >= 0");
}

namespace {

struct Vec3 {
    double x, y, z;
};

Vec3 lorenz_rhs(const Vec3& s, const LorenzParams& lp) {
    return {lp.sigma * (s.y - s.x), lp.rho * s.x - s.y - s.x * s.z,
            s.x * s.y - lp.beta * s.z};
}

Vec3 rk4_step(const Vec3& s, double dt, const LorenzParams& lp) {
    auto add = [](const Vec3& a, const Vec3& b, double f) {
        return Vec3{a.x + f * b.x, a.y + f * b.y, a.z + f * b.z};
    };
    const Vec3 k1 = lorenz_rhs(s, lp);
    const Vec3 k2 = lorenz_rhs(add(s, k1, 0.5 * dt), lp);
    const Vec3 k3 = lorenz_rhs(add(s, k2, 0.5 * dt), lp);
    const Vec3 k4 = lorenz_rhs(add(s, k3, dt), lp);
    return {s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
            s.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            s.z + dt / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z)};
}

void check_bounded(const Vec3& s) {
    if (std::abs(s.x) > 1e6 || std::abs(s.y) > 1e6 || std::abs(s.z) > 1e6)
        throw std::runtime_error("lorenz_generate: state diverged beyond 1e6");
}

}  // namespace

TimeSeriesData lorenz_generate(const LorenzParams& lp) {
    lp.validate();

    Vec3 s{lp.initial[0], lp.initial[1], lp.initial[2]};
    const int burn = static_cast<int>(std::llround(lp.transient_time / lp.dt));
    for (int i = 0; i < burn; ++i) {
        s = rk4_step(s, lp.dt, lp);
        check_bounded(s);
    }

    TimeSeriesData series;
    series.dt = lp.dt;
    series.label = "lorenz_x";
    series.values.reserve(static_cast<std::size_t>(lp.steps));
    series.values.push_back(s.x);
    for (int i = 1; i < lp.steps; ++i) {
        s = rk4_step(s, lp.dt, lp);
        check_bounded(s);
        series.values.push_back(s.x);
    }
    return series;
}

TimeSeriesData ingest_csv(const std::string& path, const std::string& value_column,
                          char delimiter, std::vector<std::string>* diagnostics) {
    const auto table = csv::read_table(path, delimiter, diagnostics);
    const std::size_t col = table.column(value_column);
    if (table.rows.empty())
        throw std::runtime_error("ingest_csv: '" + path + "' has no data rows");

    TimeSeriesData series;
    series.label = value_column;
    series.values.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        if (col >= row.size())
            throw std::runtime_error("ingest_csv: data row " + std::to_string(r + 1) +
                                     " has no '" + value_column + "' cell");
        double v = 0.0;
        if (!csv::parse_double(row[col], v))
            throw std::runtime_error("ingest_csv: data row " + std::to_string(r + 1) +
                                     ": cannot parse '" + row[col] + "' as a number");
        series.values.push_back(v);
    }
    series.validate();
    return series;
}

void export_series_csv(const TimeSeriesData& series, const std::string& path,
                       char delimiter) {
    std::vector<csv::Row> rows;
    rows.reserve(series.values.size());
    for (std::size_t i = 0; i < series.values.size(); ++i)
        rows.push_back({csv::format_int(static_cast<long long>(i)),
                        csv::format_float(series.values[i])});
    csv::write_table(path, {"index", series.label.empty() ? "value" : series.label},
                     rows, delimiter);
}

void EncodingSpec::validate() const {
    if (!(omega_min >= 0.0) || !(omega_max >= omega_min))
        throw std::invalid_argument("EncodingSpec: need omega_max >= omega_min >= 0");
}

std::vector<double> normalize_unit(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("normalize_unit: empty series");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(values.size());
    if (hi == lo) {
        std::fill(out.begin(), out.end(), 0.5);
        return out;
    }
    const double span = hi - lo;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) / span;
    return out;
}

DriveSchedule encode(const TimeSeriesData& series, const EncodingSpec& spec,
                     double hold_time, double delta) {
    series.validate();
    spec.validate();

    const auto unit = normalize_unit(series.values);
    DriveSchedule schedule;
    schedule.hold_time = hold_time;
    schedule.delta = delta;
    schedule.omega_values.resize(unit.size());
    const double span = spec.omega_max - spec.omega_min;
    for (std::size_t i = 0; i < unit.size(); ++i)
        schedule.omega_values[i] = spec.omega_min + span * unit[i];
    return schedule;
}

}  // namespace rydres
