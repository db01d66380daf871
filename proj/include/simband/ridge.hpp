#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simband/errors.hpp"
#include "simband/matrix.hpp"
#include "simband/stats.hpp"

namespace simband {

/// Fitted ridge regressor: ŷ = Xβ + intercept. Feature columns are expected
/// to be column-centered (the pipeline standardizes them first), which makes
/// intercept = mean(y) the exact unpenalized intercept.
struct RidgeModel {
    std::vector<double> coefficients;
    double intercept = 0.0;
    double shrinkage = 0.0;

    double coefficient_norm() const {
        double s = 0.0;
        for (double b : coefficients) s += b * b;
        return std::sqrt(s);
    }
};

/// Solve (XᵀX + kI)β = Xᵀy through a positive-definite Cholesky solve —
/// never an explicit inverse. k = 0 requires an invertible Gram matrix.
inline RidgeModel fit_ridge(const Matrix& x, std::span<const double> y, double k) {
    if (x.rows() == 0 || x.cols() == 0) throw config_error("fit_ridge: empty feature matrix");
    if (y.size() != x.rows()) throw config_error("fit_ridge: target length mismatch");
    if (!(k >= 0.0)) throw config_error("fit_ridge: shrinkage must be >= 0");
    if (!x.all_finite()) throw numeric_error("fit_ridge: non-finite feature value");
    for (double v : y)
        if (!std::isfinite(v)) throw numeric_error("fit_ridge: non-finite target value");

    Matrix a = gram(x);
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += k;
    const std::vector<double> rhs = transpose_times(x, y);

    RidgeModel model;
    try {
        model.coefficients = cholesky_solve(std::move(a), rhs);
    } catch (const numeric_error&) {
        throw numeric_error("fit_ridge: singular system at k = " + std::to_string(k));
    }
    model.intercept = mean(y);
    model.shrinkage = k;
    for (double b : model.coefficients)
        if (!std::isfinite(b)) throw numeric_error("fit_ridge: non-finite coefficient");
    return model;
}

inline std::vector<double> predict(const RidgeModel& model, const Matrix& x) {
    if (x.cols() != model.coefficients.size())
        throw config_error("predict: feature column count mismatch");
    std::vector<double> out(x.rows(), model.intercept);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c)
            out[r] += x(r, c) * model.coefficients[c];
    return out;
}

/// Point-forecast quality. r2 is empty when the actuals are constant
/// (zero total variance makes it undefined).
struct ForecastMetrics {
    double mse = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    std::optional<double> r2;
};

inline ForecastMetrics score(std::span<const double> actual, std::span<const double> predicted) {
    if (actual.empty() || actual.size() != predicted.size())
        throw config_error("score: inputs must be equal non-zero lengths");
    const std::size_t n = actual.size();
    const double mean_actual = mean(actual);
    double ss_res = 0.0, ss_tot = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = actual[i] - predicted[i];
        ss_res += e * e;
        abs_sum += std::abs(e);
        const double d = actual[i] - mean_actual;
        ss_tot += d * d;
    }
    ForecastMetrics m;
    m.mse = ss_res / static_cast<double>(n);
    m.mae = abs_sum / static_cast<double>(n);
    m.rmse = std::sqrt(m.mse);
    if (ss_tot > 0.0) m.r2 = 1.0 - ss_res / ss_tot;
    return m;
}

struct KCandidate {
    double k = 0.0;
    double mean_mse = 0.0;
};

struct KSelection {
    double best_k = 0.0;
    std::vector<KCandidate> table; // one row per grid value, grid order
};

/// Expanding-window cross-validation over a shrinkage grid. Rows are cut
/// into n_folds+1 contiguous chronological blocks; fold f trains on blocks
/// 1..f and validates on block f+1. Each fold's design is centered on its
/// own training-prefix column means (fit_ridge expects centered columns and
/// a prefix of a centered matrix is not itself centered); the means come
/// from the prefix only, so no validation data leaks in. Ties break toward
/// the larger k.
inline KSelection select_k(const Matrix& x, std::span<const double> y,
                           const std::vector<double>& grid, int n_folds) {
    if (grid.empty()) throw config_error("select_k: empty shrinkage grid");
    if (n_folds < 2) throw config_error("select_k: n_folds must be >= 2");
    const std::size_t n = x.rows();
    const auto blocks = static_cast<std::size_t>(n_folds) + 1;
    if (n < blocks)
        throw config_error("select_k: need at least " + std::to_string(blocks) +
                           " rows for " + std::to_string(n_folds) + " expanding folds");

    auto boundary = [&](std::size_t b) { return b * n / blocks; };

    struct Fold {
        Matrix x_train, x_val;
        std::size_t train_end, val_end;
    };
    std::vector<Fold> folds;
    for (int f = 1; f <= n_folds; ++f) {
        Fold fold;
        fold.train_end = boundary(static_cast<std::size_t>(f));
        fold.val_end = boundary(static_cast<std::size_t>(f) + 1);
        fold.x_train = x.slice_rows(0, fold.train_end);
        fold.x_val = x.slice_rows(fold.train_end, fold.val_end);
        for (std::size_t c = 0; c < x.cols(); ++c) {
            double sum = 0.0;
            for (std::size_t r = 0; r < fold.train_end; ++r) sum += fold.x_train(r, c);
            const double mean = sum / static_cast<double>(fold.train_end);
            for (std::size_t r = 0; r < fold.x_train.rows(); ++r) fold.x_train(r, c) -= mean;
            for (std::size_t r = 0; r < fold.x_val.rows(); ++r) fold.x_val(r, c) -= mean;
        }
        folds.push_back(std::move(fold));
    }

    KSelection sel;
    sel.table.reserve(grid.size());
    bool have_best = false;
    double best_mse = 0.0;
    for (const double k : grid) {
        double mse_sum = 0.0;
        for (const Fold& fold : folds) {
            const std::span<const double> y_all(y);
            const auto model = fit_ridge(fold.x_train, y_all.subspan(0, fold.train_end), k);
            const auto pred = predict(model, fold.x_val);
            double ss = 0.0;
            for (std::size_t i = 0; i < pred.size(); ++i) {
                const double e = y[fold.train_end + i] - pred[i];
                ss += e * e;
            }
            mse_sum += ss / static_cast<double>(fold.val_end - fold.train_end);
        }
        const double mean_mse = mse_sum / static_cast<double>(n_folds);
        sel.table.push_back({k, mean_mse});
        const bool better = !have_best || mean_mse < best_mse ||
                            (mean_mse == best_mse && k > sel.best_k);
        if (better) {
            sel.best_k = k;
            best_mse = mean_mse;
            have_best = true;
        }
    }
    return sel;
}

/// Logarithmically spaced shrinkage grid (inclusive endpoints).
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw config_error("log_grid: need 0 < lo < hi and count >= 2");
    std::vector<double> g(count);
    const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
    g.front() = lo;
    g.back() = hi;
    return g;
}

} // namespace simband
