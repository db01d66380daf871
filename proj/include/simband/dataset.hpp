#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "simband/errors.hpp"
#include "simband/matrix.hpp"
#include "simband/series.hpp"

namespace simband {

struct ColumnLabel {
    std::string series;
    int lag = 0;

    bool operator==(const ColumnLabel&) const = default;
};

/// Design matrix of lagged values aligned with a target vector. Row r
/// predicts target[r] from values observed strictly before it.
struct LagDataset {
    Matrix features; // rows × (num_series · max_lag)
    std::vector<double> target;
    std::vector<ColumnLabel> column_labels;

    std::size_t rows() const { return target.size(); }
    std::size_t cols() const { return features.cols(); }
};

/// Build lag features for the target and every predictor: for time t the
/// row holds s[t-1] .. s[t-max_lag] per series (target series first), and
/// the label is target[t]. The first max_lag steps are dropped.
inline LagDataset build_lag_dataset(const TimeSeries& target,
                                    const std::vector<TimeSeries>& predictors, int max_lag) {
    if (max_lag < 1) throw config_error("build_lag_dataset: max_lag must be >= 1");
    const std::size_t n = target.size();
    for (const auto& p : predictors)
        if (p.timestamps != target.timestamps)
            throw data_error("build_lag_dataset: timestamp grid of '" + p.name +
                             "' does not match target '" + target.name + "'");
    const auto lag = static_cast<std::size_t>(max_lag);
    if (lag >= n)
        throw config_error("build_lag_dataset: max_lag " + std::to_string(max_lag) +
                           " >= series length " + std::to_string(n));

    std::vector<const TimeSeries*> all;
    all.push_back(&target);
    for (const auto& p : predictors) all.push_back(&p);

    LagDataset ds;
    const std::size_t rows = n - lag;
    ds.features = Matrix(rows, all.size() * lag);
    ds.target.resize(rows);
    for (const auto* s : all)
        for (std::size_t l = 1; l <= lag; ++l)
            ds.column_labels.push_back({s->name, static_cast<int>(l)});

    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + lag;
        ds.target[r] = target.values[t];
        std::size_t c = 0;
        for (const auto* s : all)
            for (std::size_t l = 1; l <= lag; ++l) ds.features(r, c++) = s->values[t - l];
    }
    return ds;
}

/// Order-preserving chronological split: the first ⌊fraction·rows⌋ rows are
/// the training partition, the rest the test partition. No shuffling.
inline std::pair<LagDataset, LagDataset> chronological_split(const LagDataset& ds,
                                                             double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw config_error("chronological_split: train_fraction must lie in (0,1)");
    if (ds.rows() < 2) throw config_error("chronological_split: need at least 2 rows");

    // The nudge keeps decimal fractions exact: 0.7 * 10 rounds to
    // 6.999999999999999 and must still floor to 7.
    const auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(ds.rows()) + 1e-9));
    if (n_train == 0 || n_train == ds.rows())
        throw config_error("chronological_split: empty train or test partition");

    auto take = [&](std::size_t begin, std::size_t end) {
        LagDataset part;
        part.features = ds.features.slice_rows(begin, end);
        part.target.assign(ds.target.begin() + static_cast<std::ptrdiff_t>(begin),
                           ds.target.begin() + static_cast<std::ptrdiff_t>(end));
        part.column_labels = ds.column_labels;
        return part;
    };
    return {take(0, n_train), take(n_train, ds.rows())};
}

} // namespace simband
