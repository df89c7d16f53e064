#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "rydres/model.hpp"

namespace rydres {

struct FilterSpec {
    int window = 10;
    int order = 3;

    void validate() const;  // requires 0 <= order < window
};

/// Least-squares weights of a Savitzky-Golay fit: a polynomial of `order` is
/// fitted over `window` consecutive samples and evaluated at eval_index
/// (0-based within the window). Exposed for direct inspection and testing.
Eigen::VectorXd sg_kernel(int window, int order, int eval_index);

/// Savitzky-Golay smoothing. Each output sample is the value, at its own
/// position, of the best-fit polynomial over the surrounding window; even
/// windows centre at index window/2. Near the edges the window shrinks to a
/// one-sided fit of at least order+1 samples, so output length equals input
/// length and no data is invented past the ends. Throws when the series is
/// shorter than order+1.
std::vector<double> savitzky_golay(const std::vector<double>& series,
                                   const FilterSpec& spec);

/// Splits a series into `stride` interleaved sub-series: sub-series i
/// (1-based) holds samples i, i+stride, i+2*stride, ... of the input
/// (1-based positions). Lengths differ by at most one.
std::vector<std::vector<double>> multiplex_downsample(
    const std::vector<double>& series, int stride);

/// Sliding-window input-target pairs for one sub-series: windows are rows of
/// an (pairs x m) matrix, and the k-th target is the input-series value at
/// original position subseries_index + stride*(k+m) (1-based), i.e. the
/// input one sub-series step past the window.
struct WindowedDataset {
    Eigen::MatrixXd windows;  ///< one m-sample window per row
    Eigen::VectorXd targets;
    int m = 0;
    int subseries_index = 0;  ///< 1-based

    Eigen::Index pairs() const { return windows.rows(); }
};

WindowedDataset build_dataset(const std::vector<double>& sub_series,
                              const std::vector<double>& input_series, int m,
                              int subseries_index, int stride = 20);

/// Chronological split: the first floor(pairs * train_fraction) pairs train,
/// the rest test. No shuffling, so training never sees future windows.
std::pair<WindowedDataset, WindowedDataset> split_chronological(
    const WindowedDataset& ds, double train_fraction);

struct ReadoutModel {
    Eigen::VectorXd weights;
    double bias = 0.0;
    double ridge_lambda = 0.0;
    Eigen::Index rank = 0;        ///< numerical rank of the centred design
    bool rank_deficient = false;  ///< solved in the minimum-norm sense
};

/// Linear least-squares readout, optionally ridge-regularized (the bias is
/// never penalized). The design is centred and solved by an orthogonal
/// factorization; a rank-deficient design with ridge_lambda = 0 yields the
/// minimum-norm solution and sets rank_deficient.
ReadoutModel fit_readout(const WindowedDataset& train, double ridge_lambda = 0.0);

/// Mean squared error of the model on a dataset. Throws on an empty set.
double evaluate(const ReadoutModel& model, const WindowedDataset& test);

struct PredictionReport {
    std::vector<double> per_series_mse;
    double mean_mse = 0.0;
    double std_mse = 0.0;  ///< population standard deviation
    ModelParams params;
};

PredictionReport aggregate(const std::vector<double>& per_series_mse,
                           const ModelParams& params);

}  // namespace rydres
