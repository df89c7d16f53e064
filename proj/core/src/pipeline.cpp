#include "rydres/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rydres {

void FilterSpec::validate() const {
    if (window < 1) throw std::invalid_argument("FilterSpec: window must be >= 1");
    if (order < 0 || order >= window)
        throw std::invalid_argument("FilterSpec: need 0 <= order < window");
}

Eigen::VectorXd sg_kernel(int window, int order, int eval_index) {
    if (window < order + 1)
        throw std::invalid_argument("sg_kernel: window must be >= order + 1");
    if (eval_index < 0 || eval_index >= window)
        throw std::invalid_argument("sg_kernel: eval_index out of window");

    // Vandermonde in offsets relative to the evaluation point; the fitted
    // value there is the constant coefficient, so the weights are
    // A (A^T A)^-1 e0.
    Eigen::MatrixXd a(window, order + 1);
    for (int j = 0; j < window; ++j) {
        const double x = j - eval_index;
        double pw = 1.0;
        for (int k = 0; k <= order; ++k) {
            a(j, k) = pw;
            pw *= x;
        }
    }
    Eigen::VectorXd e0 = Eigen::VectorXd::Zero(order + 1);
    e0(0) = 1.0;
    const Eigen::VectorXd z = (a.transpose() * a).ldlt().solve(e0);
    return a * z;
}

std::vector<double> savitzky_golay(const std::vector<double>& series,
                                   const FilterSpec& spec) {
    spec.validate();
    const int len = static_cast<int>(series.size());
    if (len < spec.order + 1)
        throw std::invalid_argument("savitzky_golay: series shorter than order + 1");

    const int window = std::min(spec.window, len);
    const int centre = window / 2;
    const Eigen::VectorXd interior = sg_kernel(window, spec.order, centre);

    std::vector<double> out(series.size());
    for (int t = 0; t < len; ++t) {
        int start = t - centre;
        int end = start + window - 1;  // inclusive
        if (start < 0) {
            start = 0;
            end = std::min(len - 1, std::max(end, spec.order));
        } else if (end > len - 1) {
            end = len - 1;
            start = std::max(0, std::min(start, len - 1 - spec.order));
        }
        const int size = end - start + 1;
        const Eigen::VectorXd& kern =
            size == window ? interior : sg_kernel(size, spec.order, t - start);
        double acc = 0.0;
        for (int j = 0; j < size; ++j) acc += kern(j) * series[start + j];
        out[t] = acc;
    }
    return out;
}

std::vector<std::vector<double>> multiplex_downsample(
    const std::vector<double>& series, int stride) {
    if (stride < 1) throw std::invalid_argument("multiplex_downsample: stride >= 1");
    if (series.size() < static_cast<std::size_t>(stride))
        throw std::invalid_argument("multiplex_downsample: series shorter than stride");

    std::vector<std::vector<double>> subs(static_cast<std::size_t>(stride));
    for (int i = 0; i < stride; ++i) {
        auto& sub = subs[static_cast<std::size_t>(i)];
        sub.reserve(series.size() / stride + 1);
        for (std::size_t j = static_cast<std::size_t>(i); j < series.size();
             j += static_cast<std::size_t>(stride))
            sub.push_back(series[j]);
    }
    return subs;
}

WindowedDataset build_dataset(const std::vector<double>& sub_series,
                              const std::vector<double>& input_series, int m,
                              int subseries_index, int stride) {
    if (m < 1) throw std::invalid_argument("build_dataset: m must be >= 1");
    if (sub_series.size() <= static_cast<std::size_t>(m))
        throw std::invalid_argument("build_dataset: sub-series no longer than m");
    if (subseries_index < 1 || subseries_index > stride)
        throw std::invalid_argument("build_dataset: subseries_index out of [1, stride]");

    const long long n_input = static_cast<long long>(input_series.size());
    const long long by_windows = static_cast<long long>(sub_series.size()) - m;
    // Target for pair k sits at input position (i-1) + stride*(k+m), 0-based;
    // pairs past the end of the input are truncated.
    long long by_targets = 0;
    {
        const long long i0 = subseries_index - 1;
        const long long max_km = (n_input - 1 - i0) / stride;  // floor
        by_targets = max_km - m + 1;
    }
    const long long pairs = std::max(0LL, std::min(by_windows, by_targets));

    WindowedDataset ds;
    ds.m = m;
    ds.subseries_index = subseries_index;
    ds.windows.resize(pairs, m);
    ds.targets.resize(pairs);
    for (long long k = 0; k < pairs; ++k) {
        for (int j = 0; j < m; ++j)
            ds.windows(k, j) = sub_series[static_cast<std::size_t>(k + j)];
        const long long tidx = (subseries_index - 1) + static_cast<long long>(stride) * (k + m);
        ds.targets(k) = input_series[static_cast<std::size_t>(tidx)];
    }
    return ds;
}

std::pair<WindowedDataset, WindowedDataset> split_chronological(
    const WindowedDataset& ds, double train_fraction) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw std::invalid_argument("split_chronological: fraction must be in (0, 1)");
    const Eigen::Index n = ds.pairs();
    const Eigen::Index n_train =
        static_cast<Eigen::Index>(std::floor(static_cast<double>(n) * train_fraction + 1e-9));

    auto slice = [&](Eigen::Index begin, Eigen::Index count) {
        WindowedDataset part;
        part.m = ds.m;
        part.subseries_index = ds.subseries_index;
        part.windows = ds.windows.middleRows(begin, count);
        part.targets = ds.targets.segment(begin, count);
        return part;
    };
    return {slice(0, n_train), slice(n_train, n - n_train)};
}

ReadoutModel fit_readout(const WindowedDataset& train, double ridge_lambda) {
    if (train.pairs() == 0)
        throw std::invalid_argument("fit_readout: empty training set");
    if (ridge_lambda < 0.0)
        throw std::invalid_argument("fit_readout: ridge_lambda must be >= 0");

    const Eigen::Index n = train.pairs();
    const Eigen::Index m = train.windows.cols();

    // Centring removes the bias from the least-squares problem without
    // penalizing it.
    const Eigen::RowVectorXd col_mean = train.windows.colwise().mean();
    const double y_mean = train.targets.mean();
    const Eigen::MatrixXd xc = train.windows.rowwise() - col_mean;
    const Eigen::VectorXd yc = train.targets.array() - y_mean;

    ReadoutModel model;
    model.ridge_lambda = ridge_lambda;
    if (ridge_lambda == 0.0) {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xc);
        model.weights = cod.solve(yc);
        model.rank = cod.rank();
        model.rank_deficient = model.rank < std::min(n, m);
    } else {
        Eigen::MatrixXd aug(n + m, m);
        aug.topRows(n) = xc;
        aug.bottomRows(m) =
            std::sqrt(ridge_lambda) * Eigen::MatrixXd::Identity(m, m);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + m);
        rhs.head(n) = yc;
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(aug);
        model.weights = qr.solve(rhs);
        model.rank = m;
        model.rank_deficient = false;
    }
    model.bias = y_mean - col_mean.dot(model.weights);
    return model;
}

double evaluate(const ReadoutModel& model, const WindowedDataset& test) {
    if (test.pairs() == 0) throw std::invalid_argument("evaluate: empty dataset");
    if (test.windows.cols() != model.weights.size())
        throw std::invalid_argument("evaluate: model/dataset dimension mismatch");
    Eigen::VectorXd pred = test.windows * model.weights;
    pred.array() += model.bias;
    return (test.targets - pred).squaredNorm() / static_cast<double>(test.pairs());
}

PredictionReport aggregate(const std::vector<double>& per_series_mse,
                           const ModelParams& params) {
    if (per_series_mse.empty())
        throw std::invalid_argument("aggregate: no per-series values");
    PredictionReport report;
    report.per_series_mse = per_series_mse;
    report.params = params;

    double sum = 0.0;
    for (double v : per_series_mse) sum += v;
    report.mean_mse = sum / static_cast<double>(per_series_mse.size());

    double ss = 0.0;
    for (double v : per_series_mse) {
        const double d = v - report.mean_mse;
        ss += d * d;
    }
    report.std_mse = std::sqrt(ss / static_cast<double>(per_series_mse.size()));
    return report;
}

}  // namespace rydres
