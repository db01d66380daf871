#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "simband/errors.hpp"

namespace simband {

/// Dense row-major matrix of doubles. Just enough linear algebra for
/// lag-feature regression; not a general-purpose type.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return std::span<const double>(data_.data() + r * cols_, cols_);
    }

    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix& other) const = default;

    bool all_finite() const {
        for (double x : data_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    /// Copy of rows [begin, end).
    Matrix slice_rows(std::size_t begin, std::size_t end) const {
        Matrix out(end - begin, cols_);
        for (std::size_t r = begin; r < end; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(r - begin, c) = (*this)(r, c);
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// XᵀX (symmetric, cols×cols).
inline Matrix gram(const Matrix& x) {
    const std::size_t n = x.rows(), p = x.cols();
    Matrix g(p, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += x(r, i) * x(r, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    return g;
}

/// Xᵀy.
inline std::vector<double> transpose_times(const Matrix& x, std::span<const double> y) {
    if (y.size() != x.rows()) throw config_error("transpose_times: length mismatch");
    std::vector<double> out(x.cols(), 0.0);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) out[c] += x(r, c) * y[r];
    return out;
}

/// Solve A·x = b for symmetric positive-definite A via Cholesky (LLᵀ).
/// Throws numeric_error when A is not (numerically) positive definite.
inline std::vector<double> cholesky_solve(Matrix a, std::span<const double> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw config_error("cholesky_solve: shape mismatch");

    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(a(i, i)));
    const double tol = std::max(max_diag, 1.0) * 1e-12;

    // In-place lower factor.
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
        if (!(d > tol)) throw numeric_error("cholesky_solve: matrix not positive definite");
        const double ljj = std::sqrt(d);
        a(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
            a(i, j) = s / ljj;
        }
    }
    // L·z = b
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a(i, k) * z[k];
        z[i] = s / a(i, i);
    }
    // Lᵀ·x = z
    std::vector<double> x(n);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = z[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a(k, ii) * x[k];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

} // namespace simband
