#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "simband/errors.hpp"

namespace simband {

/// How a sequence is turned into a point set for the geometric distances:
/// time_value embeds sample i (1-based) as the 2-D point (i, xᵢ); value_only
/// compares raw values on the line.
enum class Embedding { time_value, value_only };

/// Parameters of the parameterized metrics. lcss_epsilon, when set, must be
/// strictly positive; leaving it empty lets the interval engine derive one
/// from the data window.
struct MetricParams {
    std::optional<double> lcss_epsilon;
    double twed_nu = 1e-3;
    double twed_lambda = 1.0;

    void validate() const {
        if (lcss_epsilon && !(*lcss_epsilon > 0.0))
            throw config_error("MetricParams: lcss epsilon must be > 0");
        if (!(twed_nu >= 0.0)) throw config_error("MetricParams: twed nu must be >= 0");
        if (!(twed_lambda >= 0.0)) throw config_error("MetricParams: twed lambda must be >= 0");
    }
};

namespace detail {

inline void require_non_empty(std::span<const double> x, std::span<const double> y,
                              const char* who) {
    if (x.empty() || y.empty()) throw config_error(std::string(who) + ": empty input");
}

inline double point_distance(std::size_t i, double xi, std::size_t j, double yj, Embedding emb) {
    if (emb == Embedding::value_only) return std::abs(xi - yj);
    const double dt = static_cast<double>(i) - static_cast<double>(j);
    const double dv = xi - yj;
    return std::sqrt(dt * dt + dv * dv);
}

} // namespace detail

/// Plain Euclidean distance; defined only for equal sample counts.
inline double euclidean(std::span<const double> x, std::span<const double> y) {
    detail::require_non_empty(x, y, "euclidean");
    if (x.size() != y.size())
        throw config_error("euclidean: cannot compare sequences of different lengths");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/// Dynamic time warping with absolute-difference local cost over the full
/// O(nm) table. Handles unequal lengths; returns the cumulative cost of the
/// cheapest monotone warping path.
inline double dtw(std::span<const double> x, std::span<const double> y) {
    detail::require_non_empty(x, y, "dtw");
    const std::size_t n = x.size(), m = y.size();
    std::vector<double> prev(m), curr(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double d = std::abs(x[0] - y[j]);
        prev[j] = j == 0 ? d : d + prev[j - 1];
    }
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double d = std::abs(x[i] - y[j]);
            if (j == 0) {
                curr[j] = d + prev[0];
            } else {
                curr[j] = d + std::min({prev[j], curr[j - 1], prev[j - 1]});
            }
        }
        std::swap(prev, curr);
    }
    return prev[m - 1];
}

struct LcssResult {
    std::size_t match_count = 0; // M(n,m)
    double similarity = 0.0;     // M(n,m) / min(n,m)
    double distance = 0.0;       // 1 - similarity
};

/// Longest common subsequence under the tolerance-ε match test
/// |xᵢ - yⱼ| <= ε.
inline LcssResult lcss(std::span<const double> x, std::span<const double> y, double epsilon) {
    detail::require_non_empty(x, y, "lcss");
    if (!(epsilon > 0.0)) throw config_error("lcss: epsilon must be > 0");
    const std::size_t n = x.size(), m = y.size();
    std::vector<std::size_t> prev(m + 1, 0), curr(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            if (std::abs(x[i - 1] - y[j - 1]) <= epsilon)
                curr[j] = 1 + prev[j - 1];
            else
                curr[j] = std::max(prev[j], curr[j - 1]);
        }
        std::swap(prev, curr);
    }
    LcssResult r;
    r.match_count = prev[m];
    r.similarity = static_cast<double>(r.match_count) / static_cast<double>(std::min(n, m));
    r.distance = 1.0 - r.similarity;
    return r;
}

/// Hausdorff distance between the two embedded point sets: the larger of
/// the two directed sup-inf distances.
inline double hausdorff(std::span<const double> x, std::span<const double> y,
                        Embedding emb = Embedding::time_value) {
    detail::require_non_empty(x, y, "hausdorff");
    auto directed = [&](std::span<const double> a, std::span<const double> b) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double nearest = detail::point_distance(i + 1, a[i], 1, b[0], emb);
            for (std::size_t j = 1; j < b.size(); ++j)
                nearest = std::min(nearest, detail::point_distance(i + 1, a[i], j + 1, b[j], emb));
            worst = std::max(worst, nearest);
        }
        return worst;
    };
    return std::max(directed(x, y), directed(y, x));
}

/// Discrete Fréchet distance over the same embedding: the minimal, over
/// monotone couplings, of the maximal pointwise leash length.
inline double frechet_discrete(std::span<const double> x, std::span<const double> y,
                               Embedding emb = Embedding::time_value) {
    detail::require_non_empty(x, y, "frechet_discrete");
    const std::size_t n = x.size(), m = y.size();
    std::vector<double> prev(m), curr(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double d = detail::point_distance(1, x[0], j + 1, y[j], emb);
        prev[j] = j == 0 ? d : std::max(d, prev[j - 1]);
    }
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const double d = detail::point_distance(i + 1, x[i], j + 1, y[j], emb);
            if (j == 0) {
                curr[j] = std::max(d, prev[0]);
            } else {
                curr[j] = std::max(d, std::min({prev[j], curr[j - 1], prev[j - 1]}));
            }
        }
        std::swap(prev, curr);
    }
    return prev[m - 1];
}

/// Time warp edit distance over match / delete-x / delete-y edit scripts.
/// Timestamps are the sample indices 1..n; the out-of-range predecessor of
/// the first sample is value 0 at time 0. Costs:
///   match(i,j)  = |xᵢ-yⱼ| + |xᵢ₋₁-yⱼ₋₁| + 2ν|i-j|
///   delete x(i) = |xᵢ-xᵢ₋₁| + ν + λ       (and symmetrically for y)
/// Leading deletions are admissible, so the table borders accumulate
/// deletion costs rather than being pinned to infinity.
inline double twed(std::span<const double> x, std::span<const double> y, double nu,
                   double lambda) {
    detail::require_non_empty(x, y, "twed");
    if (!(nu >= 0.0)) throw config_error("twed: nu must be >= 0");
    if (!(lambda >= 0.0)) throw config_error("twed: lambda must be >= 0");

    const std::size_t n = x.size(), m = y.size();
    auto xv = [&](std::size_t i) { return i == 0 ? 0.0 : x[i - 1]; }; // 1-based with pad
    auto yv = [&](std::size_t j) { return j == 0 ? 0.0 : y[j - 1]; };

    std::vector<double> prev(m + 1), curr(m + 1);
    prev[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j)
        prev[j] = prev[j - 1] + (std::abs(yv(j) - yv(j - 1)) + nu + lambda);

    for (std::size_t i = 1; i <= n; ++i) {
        const double del_x = std::abs(xv(i) - xv(i - 1)) + nu + lambda;
        curr[0] = prev[0] + del_x;
        for (std::size_t j = 1; j <= m; ++j) {
            const double del_y = std::abs(yv(j) - yv(j - 1)) + nu + lambda;
            const double tgap =
                i > j ? static_cast<double>(i - j) : static_cast<double>(j - i);
            const double match =
                std::abs(xv(i) - yv(j)) + std::abs(xv(i - 1) - yv(j - 1)) + 2.0 * nu * tgap;
            curr[j] = std::min({prev[j - 1] + match, prev[j] + del_x, curr[j - 1] + del_y});
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

} // namespace simband
