#pragma once

#include <array>
#include <string>
#include <vector>

#include "rydres/dynamics.hpp"

namespace rydres {

struct TimeSeriesData {
    std::vector<double> values;
    double dt = 0.0;  ///< sample spacing in seconds, informational
    std::string label;

    void validate() const;
};

/// Lorenz system
///   dx/dt = sigma (y - x)
///   dy/dt = rho x - y - x z
///   dz/dt = x y - beta z
/// with the chaotic assignment rho = 28, beta = 8/3 by default. The x
/// component is returned, sampled every dt for `steps` samples after an
/// initial transient is discarded.
struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
    double dt = 0.04;
    int steps = 16000;
    std::array<double, 3> initial{1.0, 1.0, 1.0};
    double transient_time = 10.0;  ///< seconds integrated and discarded

    void validate() const;
};

/// RK4 integration of the Lorenz system at step dt. Deterministic and
/// bit-reproducible. Throws std::runtime_error if the state diverges
/// (any component beyond 1e6).
TimeSeriesData lorenz_generate(const LorenzParams& lp);

/// Reads one real value per row from the named column of a delimited file
/// (header row required, decimal point only). Blank lines are skipped and
/// reported through `diagnostics` when given; a non-numeric cell aborts with
/// a row-numbered message.
TimeSeriesData ingest_csv(const std::string& path, const std::string& value_column,
                          char delimiter = ',',
                          std::vector<std::string>* diagnostics = nullptr);

/// Writes a series as a two-column file (index, value) at full precision
/// (17 significant digits), so ingest reproduces it bit-exactly.
void export_series_csv(const TimeSeriesData& series, const std::string& path,
                       char delimiter = ',');

/// Target interval of the drive encoding.
struct EncodingSpec {
    double omega_min = 1.1;
    double omega_max = 1.21;

    void validate() const;
};

/// Rescales values affinely so min -> 0 and max -> 1; a constant series maps
/// to 0.5 everywhere.
std::vector<double> normalize_unit(const std::vector<double>& values);

/// Affine map of the series onto [omega_min, omega_max]: the series minimum
/// encodes as omega_min, the maximum as omega_max, a constant series as the
/// midpoint. One schedule symbol per input sample.
DriveSchedule encode(const TimeSeriesData& series, const EncodingSpec& spec,
                     double hold_time, double delta);

}  // namespace rydres
