#pragma once

#include <cstddef>
#include <vector>

#include "simband/errors.hpp"
#include "simband/matrix.hpp"
#include "simband/stats.hpp"

namespace simband {

/// Per-column standardization fitted on training features only and applied
/// unchanged everywhere else. Scales are population standard deviations;
/// a zero-variance column gets scale 1 (values map to 0) and is recorded
/// in constant_columns so callers can warn instead of aborting.
class Standardizer {
public:
    static Standardizer fit(const Matrix& train_features) {
        if (train_features.rows() == 0 || train_features.cols() == 0)
            throw config_error("Standardizer::fit: empty feature matrix");
        Standardizer s;
        const std::size_t p = train_features.cols();
        s.means_.resize(p);
        s.scales_.resize(p);
        std::vector<double> col(train_features.rows());
        for (std::size_t c = 0; c < p; ++c) {
            double lo = train_features(0, c), hi = lo;
            for (std::size_t r = 0; r < train_features.rows(); ++r) {
                col[r] = train_features(r, c);
                lo = std::min(lo, col[r]);
                hi = std::max(hi, col[r]);
            }
            // min == max detects constancy exactly; a summed mean of n equal
            // values rounds away from them and would leave a spurious ~1e-12
            // "variance" that amplifies noise when divided out.
            if (lo == hi) {
                s.means_[c] = lo;
                s.scales_[c] = 1.0;
                s.constant_columns_.push_back(c);
                continue;
            }
            s.means_[c] = mean(col);
            const double sd = population_sd(col);
            if (sd > 0.0) {
                s.scales_[c] = sd;
            } else {
                s.scales_[c] = 1.0;
                s.constant_columns_.push_back(c);
            }
        }
        return s;
    }

    Matrix apply(const Matrix& m) const {
        check_width(m);
        Matrix out(m.rows(), m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                out(r, c) = (m(r, c) - means_[c]) / scales_[c];
        return out;
    }

    Matrix invert(const Matrix& m) const {
        check_width(m);
        Matrix out(m.rows(), m.cols());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c)
                out(r, c) = m(r, c) * scales_[c] + means_[c];
        return out;
    }

    const std::vector<double>& means() const { return means_; }
    const std::vector<double>& scales() const { return scales_; }

    /// Indices of training columns with zero variance (scale forced to 1).
    const std::vector<std::size_t>& constant_columns() const { return constant_columns_; }

private:
    void check_width(const Matrix& m) const {
        if (m.cols() != means_.size())
            throw config_error("Standardizer: column count mismatch");
    }

    std::vector<double> means_;
    std::vector<double> scales_;
    std::vector<std::size_t> constant_columns_;
};

} // namespace simband
