#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "rydres/signals.hpp"

using namespace rydres;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const char* name) {
    return fs::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("signals") {

TEST_CASE("lorenz stays at the origin from a zero initial condition") {
    LorenzParams lp;
    lp.initial = {0.0, 0.0, 0.0};
    lp.steps = 100;
    const auto series = lorenz_generate(lp);
    REQUIRE(series.values.size() == 100);
    for (double v : series.values) CHECK(v == 0.0);
}

TEST_CASE("lorenz holds its nonzero fixed point") {
    LorenzParams lp;
    lp.transient_time = 0.0;
    lp.steps = 26;  // about one second at dt = 0.04
    const double z = lp.rho - 1.0;
    const double x = std::sqrt(lp.beta * z);
    lp.initial = {x, x, z};
    const auto series = lorenz_generate(lp);
    for (double v : series.values) CHECK(std::abs(v - x) < 1e-6);
}

TEST_CASE("chaotic run is bounded and sensitive to initial conditions") {
    LorenzParams lp;  // defaults: full 640 s, 16000 samples
    const auto a = lorenz_generate(lp);
    REQUIRE(a.values.size() == 16000);
    for (double v : a.values) CHECK(std::abs(v) < 25.0);

    LorenzParams lp_perturbed = lp;
    lp_perturbed.initial[0] += 1e-9;
    const auto b = lorenz_generate(lp_perturbed);
    double max_sep = 0.0;
    for (std::size_t i = 0; i < 750; ++i)  // first 30 s
        max_sep = std::max(max_sep, std::abs(a.values[i] - b.values[i]));
    CHECK(max_sep > 1.0);
}

TEST_CASE("lorenz generation is bit-reproducible") {
    LorenzParams lp;
    lp.steps = 2000;
    const auto a = lorenz_generate(lp);
    const auto b = lorenz_generate(lp);
    CHECK(a.values == b.values);
}

TEST_CASE("divergent parameters abort with a diagnostic") {
    LorenzParams lp;
    lp.beta = -10.0;  // anti-damped z component
    lp.steps = 5000;
    CHECK_THROWS_AS(lorenz_generate(lp), std::runtime_error);
}

TEST_CASE("encoding maps series extremes onto the drive interval") {
    const EncodingSpec spec{1.1, 1.21};
    TimeSeriesData series;
    series.values = {0.0, 1.0};
    auto schedule = encode(series, spec, 20.0, 11.0);
    REQUIRE(schedule.omega_values.size() == 2);
    CHECK(schedule.omega_values[0] == doctest::Approx(1.1).epsilon(1e-14));
    CHECK(schedule.omega_values[1] == doctest::Approx(1.21).epsilon(1e-14));
    CHECK(schedule.hold_time == 20.0);
    CHECK(schedule.delta == 11.0);

    series.values = {5.0, 5.0, 5.0};
    schedule = encode(series, spec, 20.0, 11.0);
    for (double w : schedule.omega_values)
        CHECK(w == doctest::Approx(1.155).epsilon(1e-14));

    series.values = {0.0, 0.5, 1.0};
    schedule = encode(series, spec, 20.0, 11.0);
    CHECK(schedule.omega_values[1] ==
          doctest::Approx(0.5 * (1.1 + 1.21)).epsilon(1e-14));
}

TEST_CASE("encoding is invariant under affine input transformations") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    std::uniform_real_distribution<double> shift(-5.0, 5.0);
    const EncodingSpec spec{1.1, 1.21};

    for (int rep = 0; rep < 30; ++rep) {
        TimeSeriesData series;
        for (int i = 0; i < 40; ++i) series.values.push_back(value(gen));
        const double a = scale(gen), b = shift(gen);
        TimeSeriesData mapped;
        for (double v : series.values) mapped.values.push_back(a * v + b);

        const auto s1 = encode(series, spec, 20.0, 0.0);
        const auto s2 = encode(mapped, spec, 20.0, 0.0);
        for (std::size_t i = 0; i < s1.omega_values.size(); ++i)
            CHECK(std::abs(s1.omega_values[i] - s2.omega_values[i]) <= 1e-12);
    }
}

TEST_CASE("encoding preserves strict ordering") {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    TimeSeriesData series;
    for (int i = 0; i < 50; ++i) series.values.push_back(value(gen));
    const auto schedule = encode(series, {1.1, 1.21}, 20.0, 0.0);
    for (std::size_t i = 0; i < series.values.size(); ++i)
        for (std::size_t j = 0; j < series.values.size(); ++j)
            if (series.values[i] < series.values[j])
                CHECK(schedule.omega_values[i] < schedule.omega_values[j]);
}

TEST_CASE("csv ingestion reads ordered values") {
    const auto path = temp_file("rydres_ingest.csv");
    std::ofstream(path) << "date,value\n2011-01-01,1.0\n2011-01-02,2.0\n2011-01-03,3.0\n";
    const auto series = ingest_csv(path.string(), "value");
    CHECK(series.values == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("blank lines are skipped with a note") {
    const auto path = temp_file("rydres_blank.csv");
    std::ofstream(path) << "value\n1.5\n\n2.5\n";
    std::vector<std::string> notes;
    const auto series = ingest_csv(path.string(), "value", ',', &notes);
    CHECK(series.values == std::vector<double>{1.5, 2.5});
    REQUIRE(notes.size() == 1);
    CHECK(notes[0].find("line 3") != std::string::npos);
}

TEST_CASE("ingestion failures carry row numbers") {
    const auto path = temp_file("rydres_bad.csv");
    std::ofstream(path) << "value\n1.0\nnot-a-number\n";
    CHECK_THROWS_WITH_AS(ingest_csv(path.string(), "value"),
                         doctest::Contains("row 2"), std::runtime_error);

    std::ofstream(path) << "other\n1.0\n";
    CHECK_THROWS_AS(ingest_csv(path.string(), "value"), std::runtime_error);

    std::ofstream(path) << "";
    CHECK_THROWS_AS(ingest_csv(path.string(), "value"), std::runtime_error);
}

TEST_CASE("export and ingest round-trip bit-exactly") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> value(-1e3, 1e3);
    TimeSeriesData series;
    series.label = "value";
    for (int i = 0; i < 200; ++i) series.values.push_back(value(gen));
    series.values.push_back(1.0 / 3.0);
    series.values.push_back(1e-300);

    const auto path = temp_file("rydres_roundtrip.csv");
    export_series_csv(series, path.string());
    const auto back = ingest_csv(path.string(), "value");
    CHECK(back.values == series.values);
}

}  // TEST_SUITE
