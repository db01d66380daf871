#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "simband/errors.hpp"
#include "simband/random.hpp"
#include "simband/series.hpp"

namespace simband {

/// AR(1) target around a level, with predictors that are noisy linear
/// transforms of the target. Everything flows from one seeded generator,
/// so a seed pins the file bytes.
struct SynthSpec {
    std::size_t length = 600;
    double ar_coeff = 0.98;
    double noise_sd = 2.0;
    std::size_t n_predictors = 4;
    double level = 100.0;
    std::uint64_t seed = 7;
    Date start_date{2020, 1, 1};
    std::string target_name = "target";

    void validate() const {
        if (length < 50) throw config_error("synth: length must be >= 50");
        if (!(noise_sd >= 0.0)) throw config_error("synth: noise sd must be >= 0");
        if (!std::isfinite(ar_coeff) || !std::isfinite(level))
            throw config_error("synth: ar coefficient and level must be finite");
    }
};

namespace detail {

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Render the synthetic dataset as CSV text in the ingestion format
/// (date column first, ISO-8601, one numeric column per series).
inline std::string synth_csv(const SynthSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);

    // Per-predictor transform parameters are drawn first so the stream
    // layout is stable when only the length changes.
    std::vector<double> weight(spec.n_predictors), offset(spec.n_predictors);
    for (std::size_t j = 0; j < spec.n_predictors; ++j) {
        weight[j] = 0.5 + rng.uniform();
        offset[j] = 10.0 * rng.uniform();
    }

    std::vector<double> target(spec.length);
    std::vector<std::vector<double>> preds(spec.n_predictors,
                                           std::vector<double>(spec.length));
    double x = spec.level;
    for (std::size_t t = 0; t < spec.length; ++t) {
        if (t > 0) x = spec.level + spec.ar_coeff * (x - spec.level) + spec.noise_sd * rng.gaussian();
        target[t] = x;
        for (std::size_t j = 0; j < spec.n_predictors; ++j)
            preds[j][t] = weight[j] * x + offset[j] + 0.5 * spec.noise_sd * rng.gaussian();
    }

    std::string csv = "date," + spec.target_name;
    for (std::size_t j = 0; j < spec.n_predictors; ++j)
        csv += ",p" + std::to_string(j + 1);
    csv += "\n";

    Date d = spec.start_date;
    for (std::size_t t = 0; t < spec.length; ++t) {
        csv += d.to_string();
        csv += ',';
        csv += detail::format_number(target[t]);
        for (std::size_t j = 0; j < spec.n_predictors; ++j) {
            csv += ',';
            csv += detail::format_number(preds[j][t]);
        }
        csv += '\n';
        d = d.next_day();
    }
    return csv;
}

} // namespace simband
