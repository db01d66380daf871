#pragma once

#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "simband/distance.hpp"
#include "simband/errors.hpp"
#include "simband/stats.hpp"

namespace simband {

enum class IntervalMethod { conventional, euclidean, dtw, lcss, hausdorff, frechet, twed };

inline std::string method_name(IntervalMethod m) {
    switch (m) {
        case IntervalMethod::conventional: return "conventional";
        case IntervalMethod::euclidean: return "euclidean";
        case IntervalMethod::dtw: return "dtw";
        case IntervalMethod::lcss: return "lcss";
        case IntervalMethod::hausdorff: return "hausdorff";
        case IntervalMethod::frechet: return "frechet";
        case IntervalMethod::twed: return "twed";
    }
    throw config_error("method_name: unknown method");
}

inline IntervalMethod parse_method(const std::string& name) {
    for (IntervalMethod m :
         {IntervalMethod::conventional, IntervalMethod::euclidean, IntervalMethod::dtw,
          IntervalMethod::lcss, IntervalMethod::hausdorff, IntervalMethod::frechet,
          IntervalMethod::twed})
        if (method_name(m) == name) return m;
    throw config_error("unknown interval method: " + name);
}

/// Per-timestep (center, lower, upper) triples for one method, plus a
/// record of every constant that shaped the margins.
struct IntervalSeries {
    std::string method;
    std::vector<double> centers;
    std::vector<double> lowers;
    std::vector<double> uppers;
    std::vector<std::pair<std::string, double>> params;

    std::size_t size() const { return centers.size(); }
};

struct EvalReport {
    std::string method;
    double coverage_pct = 0.0;
    double mean_width = 0.0;
    std::size_t n_points = 0;
};

/// σ-based margin: ME = scale · z · SD / √N, z the standard-normal quantile
/// at (1+confidence)/2. SD is the population SD of a trailing residual
/// window seeded from `seed_residuals` and, when `actual` is supplied,
/// rolled forward with realized residuals (never the current step's). N is
/// the window count in divide_by_sqrt_n mode and 1 otherwise.
struct ConventionalConfig {
    double confidence = 0.95;
    std::size_t residual_window = 50;
    bool divide_by_sqrt_n = false;
    double scale = 1.0;
};

inline IntervalSeries conventional_interval(std::span<const double> predicted,
                                            std::span<const double> actual,
                                            std::span<const double> seed_residuals,
                                            const ConventionalConfig& cfg) {
    if (predicted.empty()) throw config_error("conventional_interval: no predictions");
    if (!(cfg.confidence > 0.0 && cfg.confidence < 1.0))
        throw config_error("conventional_interval: confidence must lie strictly in (0,1)");
    if (seed_residuals.empty())
        throw config_error("conventional_interval: empty residual window");
    if (cfg.residual_window == 0)
        throw config_error("conventional_interval: residual window size must be >= 1");
    if (!(cfg.scale > 0.0)) throw config_error("conventional_interval: scale must be > 0");
    const bool rolling = !actual.empty();
    if (rolling && actual.size() != predicted.size())
        throw config_error("conventional_interval: predicted/actual length mismatch");

    const double z = normal_quantile((1.0 + cfg.confidence) / 2.0);

    IntervalSeries out;
    out.method = method_name(IntervalMethod::conventional);
    out.params = {{"confidence", cfg.confidence},
                  {"z", z},
                  {"residual_window", static_cast<double>(cfg.residual_window)},
                  {"divide_by_sqrt_n", cfg.divide_by_sqrt_n ? 1.0 : 0.0},
                  {"scale", cfg.scale}};

    std::vector<double> pool(seed_residuals.begin(), seed_residuals.end());
    for (std::size_t t = 0; t < predicted.size(); ++t) {
        const std::size_t count = std::min(cfg.residual_window, pool.size());
        const std::span<const double> window(pool.data() + (pool.size() - count), count);
        const double sd = population_sd(window);
        const double n_eff = cfg.divide_by_sqrt_n ? static_cast<double>(count) : 1.0;
        const double margin = cfg.scale * z * sd / std::sqrt(n_eff);
        out.centers.push_back(predicted[t]);
        out.lowers.push_back(predicted[t] - margin);
        out.uppers.push_back(predicted[t] + margin);
        if (rolling) pool.push_back(actual[t] - predicted[t]);
    }
    return out;
}

/// Distance-based margin. At test step t the trailing windows
/// P = predicted[t-w .. t-1] and A = actual[t-w .. t-1] (past values only)
/// are compared with the configured metric, and the half-width is
///   cumulative metrics (euclidean, dtw, twed):  scale · D / w
///   max-type metrics (hausdorff, frechet):      scale · D
///   lcss: scale · sd(A) · (1 + (1 - similarity) · w)
/// lcss's ε defaults to lcss_auto_factor · sd(A) per window unless fixed
/// via params.lcss_epsilon.
struct SimilarityConfig {
    IntervalMethod method = IntervalMethod::dtw;
    std::size_t window = 20;
    double scale = 1.0;
    MetricParams params;
    Embedding embedding = Embedding::time_value;
    double lcss_auto_factor = 0.05;
};

inline IntervalSeries similarity_interval(std::span<const double> predicted,
                                          std::span<const double> actual,
                                          std::size_t test_start,
                                          const SimilarityConfig& cfg) {
    if (cfg.method == IntervalMethod::conventional)
        throw config_error("similarity_interval: method must be a distance metric");
    if (cfg.window < 2) throw config_error("similarity_interval: window must be >= 2");
    if (!(cfg.scale > 0.0)) throw config_error("similarity_interval: scale must be > 0");
    if (predicted.size() != actual.size())
        throw config_error("similarity_interval: predicted/actual length mismatch");
    if (test_start >= predicted.size())
        throw config_error("similarity_interval: test_start out of range");
    if (test_start < cfg.window)
        throw config_error("similarity_interval: insufficient warm-up history (need " +
                           std::to_string(cfg.window) + " steps before the first test step)");
    cfg.params.validate();

    const std::size_t w = cfg.window;
    IntervalSeries out;
    out.method = method_name(cfg.method);
    out.params = {{"window", static_cast<double>(w)}, {"scale", cfg.scale}};
    switch (cfg.method) {
        case IntervalMethod::lcss:
            if (cfg.params.lcss_epsilon) {
                out.params.emplace_back("lcss_epsilon", *cfg.params.lcss_epsilon);
            } else {
                out.params.emplace_back("lcss_epsilon_auto", 1.0);
                out.params.emplace_back("lcss_auto_factor", cfg.lcss_auto_factor);
            }
            break;
        case IntervalMethod::twed:
            out.params.emplace_back("twed_nu", cfg.params.twed_nu);
            out.params.emplace_back("twed_lambda", cfg.params.twed_lambda);
            break;
        case IntervalMethod::hausdorff:
        case IntervalMethod::frechet:
            out.params.emplace_back(
                "embedding_time_value", cfg.embedding == Embedding::time_value ? 1.0 : 0.0);
            break;
        default: break;
    }

    for (std::size_t t = test_start; t < predicted.size(); ++t) {
        const std::span<const double> p = predicted.subspan(t - w, w);
        const std::span<const double> a = actual.subspan(t - w, w);
        double margin = 0.0;
        switch (cfg.method) {
            case IntervalMethod::euclidean:
                margin = cfg.scale * euclidean(p, a) / static_cast<double>(w);
                break;
            case IntervalMethod::dtw:
                margin = cfg.scale * dtw(p, a) / static_cast<double>(w);
                break;
            case IntervalMethod::twed:
                margin = cfg.scale * twed(p, a, cfg.params.twed_nu, cfg.params.twed_lambda) /
                         static_cast<double>(w);
                break;
            case IntervalMethod::hausdorff:
                margin = cfg.scale * hausdorff(p, a, cfg.embedding);
                break;
            case IntervalMethod::frechet:
                margin = cfg.scale * frechet_discrete(p, a, cfg.embedding);
                break;
            case IntervalMethod::lcss: {
                const double eps_scale = population_sd(a);
                const double eps = cfg.params.lcss_epsilon
                                       ? *cfg.params.lcss_epsilon
                                       : std::max(cfg.lcss_auto_factor * eps_scale, 1e-12);
                const LcssResult r = lcss(p, a, eps);
                margin = cfg.scale * eps_scale *
                         (1.0 + (1.0 - r.similarity) * static_cast<double>(w));
                break;
            }
            case IntervalMethod::conventional: break; // rejected above
        }
        const double center = predicted[t];
        out.centers.push_back(center);
        out.lowers.push_back(center - margin);
        out.uppers.push_back(center + margin);
    }
    return out;
}

/// Coverage (closed interval — a value on the bound counts) and mean width.
inline EvalReport evaluate(const IntervalSeries& intervals, std::span<const double> actual) {
    if (intervals.size() != actual.size())
        throw config_error("evaluate: interval/actual length mismatch");
    if (actual.empty()) throw config_error("evaluate: empty input");
    std::size_t covered = 0;
    double width_sum = 0.0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        if (!(intervals.lowers[t] <= intervals.centers[t] &&
              intervals.centers[t] <= intervals.uppers[t]))
            throw config_error("evaluate: interval bounds do not bracket the center");
        if (intervals.lowers[t] <= actual[t] && actual[t] <= intervals.uppers[t]) ++covered;
        width_sum += intervals.uppers[t] - intervals.lowers[t];
    }
    EvalReport r;
    r.method = intervals.method;
    r.n_points = actual.size();
    r.coverage_pct = 100.0 * static_cast<double>(covered) / static_cast<double>(actual.size());
    r.mean_width = width_sum / static_cast<double>(actual.size());
    return r;
}

/// One interval-construction recipe; `label` defaults to the method name.
struct MethodConfig {
    std::variant<ConventionalConfig, SimilarityConfig> config;
    std::string label;
};

/// Build the interval series for one config on the shared timeline
/// (predicted/actual over warm-up + test; test begins at test_start).
/// The conventional seed window is the training-tail residuals.
inline IntervalSeries build_interval(const MethodConfig& mc, std::span<const double> predicted,
                                     std::span<const double> actual, std::size_t test_start) {
    if (predicted.size() != actual.size())
        throw config_error("build_interval: predicted/actual length mismatch");
    if (test_start == 0 || test_start >= predicted.size())
        throw config_error("build_interval: test_start must split the timeline");

    IntervalSeries series;
    if (const auto* conv = std::get_if<ConventionalConfig>(&mc.config)) {
        const std::size_t seed_begin =
            test_start > conv->residual_window ? test_start - conv->residual_window : 0;
        std::vector<double> seed;
        seed.reserve(test_start - seed_begin);
        for (std::size_t i = seed_begin; i < test_start; ++i)
            seed.push_back(actual[i] - predicted[i]);
        series = conventional_interval(predicted.subspan(test_start), actual.subspan(test_start),
                                       seed, *conv);
    } else {
        series = similarity_interval(predicted, actual, test_start,
                                     std::get<SimilarityConfig>(mc.config));
    }
    if (!mc.label.empty()) series.method = mc.label;
    return series;
}

/// Evaluate every configuration on the identical predicted/actual pair and
/// identical warm-up; output order equals input order.
inline std::vector<EvalReport> compare_methods(std::span<const double> predicted,
                                               std::span<const double> actual,
                                               std::size_t test_start,
                                               const std::vector<MethodConfig>& configs) {
    if (configs.empty()) throw config_error("compare_methods: no method configurations");
    std::vector<EvalReport> reports;
    reports.reserve(configs.size());
    for (const auto& mc : configs) {
        const IntervalSeries series = build_interval(mc, predicted, actual, test_start);
        reports.push_back(evaluate(series, actual.subspan(test_start)));
    }
    return reports;
}

} // namespace simband
