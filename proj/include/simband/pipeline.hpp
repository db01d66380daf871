#pragma once

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "simband/dataset.hpp"
#include "simband/errors.hpp"
#include "simband/interval.hpp"
#include "simband/ridge.hpp"
#include "simband/series.hpp"
#include "simband/standardize.hpp"
#include "simband/synth.hpp"

namespace simband {

struct KGridSpec {
    double lo = 1e-3;
    double hi = 1e3;
    std::size_t size = 20;
};

/// Everything a batch run needs. Every field has a default; the manifest
/// records which ones were left at it.
struct RunConfig {
    std::string data;       // CSV path; empty → synthetic data from `synth`
    SynthSpec synth;        // seeded by `seed`
    std::string date_column = "date";
    std::string target = "target";
    std::vector<std::string> predictors; // empty → every other column
    int max_lag = 3;
    double train_fraction = 0.8;
    std::optional<double> fixed_k; // skip CV when set
    KGridSpec k_grid;
    int n_folds = 5;
    double confidence = 0.95;
    std::vector<std::string> methods = {"conventional", "dtw", "lcss",
                                        "hausdorff", "frechet", "twed"};
    std::size_t window = 20;
    double scale = 1.0;
    std::optional<double> lcss_eps; // empty → auto per window
    double twed_nu = 1e-3;
    double twed_lambda = 1.0;
    std::size_t ci_window = 50;
    bool ci_sqrt_n = false;
    Embedding embedding = Embedding::time_value; // hausdorff/frechet sensitivity switch
    std::string out_dir = "out";
    std::uint64_t seed = 7;

    std::set<std::string> explicit_keys; // keys set via file or flag
};

namespace detail {

inline double parse_double_kv(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw config_error("config key '" + key + "': not a number: '" + value + "'");
    return v;
}

inline long long parse_int_kv(const std::string& key, const std::string& value) {
    long long v = 0;
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || p != value.data() + value.size())
        throw config_error("config key '" + key + "': not an integer: '" + value + "'");
    return v;
}

inline bool parse_bool_kv(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw config_error("config key '" + key + "': not a boolean: '" + value + "'");
}

inline std::vector<std::string> parse_list_kv(const std::string& value) {
    std::vector<std::string> items;
    if (value == "none" || value.empty()) return items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

} // namespace detail

/// Apply one `key = value` pair (config file line or same-named CLI flag).
inline void apply_config_kv(RunConfig& cfg, const std::string& key, const std::string& value) {
    using namespace detail;
    if (key == "data") cfg.data = value;
    else if (key == "date_column") cfg.date_column = value;
    else if (key == "target") { cfg.target = value; cfg.synth.target_name = value; }
    else if (key == "predictors") cfg.predictors = parse_list_kv(value);
    else if (key == "max_lag") cfg.max_lag = static_cast<int>(parse_int_kv(key, value));
    else if (key == "train_fraction") cfg.train_fraction = parse_double_kv(key, value);
    else if (key == "k") cfg.fixed_k = parse_double_kv(key, value);
    else if (key == "k_grid_min") cfg.k_grid.lo = parse_double_kv(key, value);
    else if (key == "k_grid_max") cfg.k_grid.hi = parse_double_kv(key, value);
    else if (key == "k_grid_size")
        cfg.k_grid.size = static_cast<std::size_t>(parse_int_kv(key, value));
    else if (key == "n_folds") cfg.n_folds = static_cast<int>(parse_int_kv(key, value));
    else if (key == "confidence") cfg.confidence = parse_double_kv(key, value);
    else if (key == "methods") cfg.methods = parse_list_kv(value);
    else if (key == "window") cfg.window = static_cast<std::size_t>(parse_int_kv(key, value));
    else if (key == "scale") cfg.scale = parse_double_kv(key, value);
    else if (key == "lcss_eps") cfg.lcss_eps = parse_double_kv(key, value);
    else if (key == "twed_nu") cfg.twed_nu = parse_double_kv(key, value);
    else if (key == "twed_lambda") cfg.twed_lambda = parse_double_kv(key, value);
    else if (key == "ci_window")
        cfg.ci_window = static_cast<std::size_t>(parse_int_kv(key, value));
    else if (key == "ci_n") cfg.ci_sqrt_n = parse_bool_kv(key, value);
    else if (key == "embedding") {
        if (value == "time-value") cfg.embedding = Embedding::time_value;
        else if (value == "value-only") cfg.embedding = Embedding::value_only;
        else
            throw config_error("config key 'embedding': expected 'time-value' or "
                               "'value-only', got '" + value + "'");
    } else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int_kv(key, value));
        cfg.synth.seed = cfg.seed;
    } else if (key == "synth_length")
        cfg.synth.length = static_cast<std::size_t>(parse_int_kv(key, value));
    else if (key == "synth_ar") cfg.synth.ar_coeff = parse_double_kv(key, value);
    else if (key == "synth_noise_sd") cfg.synth.noise_sd = parse_double_kv(key, value);
    else if (key == "synth_predictors")
        cfg.synth.n_predictors = static_cast<std::size_t>(parse_int_kv(key, value));
    else if (key == "synth_level") cfg.synth.level = parse_double_kv(key, value);
    else throw config_error("unknown config key: '" + key + "'");
    cfg.explicit_keys.insert(key);
}

/// Flat `key = value` config file; '#' starts a comment.
inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    RunConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(line_no) +
                               ": expected 'key = value'");
        apply_config_kv(cfg, detail::trim(line.substr(0, eq)),
                        detail::trim(line.substr(eq + 1)));
    }
    return cfg;
}

inline const std::vector<std::string>& all_config_keys() {
    static const std::vector<std::string> keys = {
        "data",        "date_column", "target",       "predictors",   "max_lag",
        "train_fraction", "k",        "k_grid_min",   "k_grid_max",   "k_grid_size",
        "n_folds",     "confidence",  "methods",      "window",       "scale",
        "lcss_eps",    "twed_nu",     "twed_lambda",  "ci_window",    "ci_n",
        "embedding",   "out_dir",     "seed",         "synth_length", "synth_ar",
        "synth_noise_sd", "synth_predictors", "synth_level"};
    return keys;
}

struct MethodRun {
    MethodConfig config;
    IntervalSeries intervals;
    EvalReport report;
};

/// Everything cmd_run produces, with file contents materialized so callers
/// (and tests) can inspect or write them in a fixed order.
struct RunArtifacts {
    std::vector<std::pair<std::string, std::string>> files;
    ForecastMetrics train_metrics;
    ForecastMetrics test_metrics;
    double selected_k = 0.0;
    std::vector<MethodRun> method_runs;
    std::vector<std::string> warnings;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t dropped_rows = 0;
};

namespace detail {

template <typename F>
auto stage(const char* name, F&& fn) {
    try {
        return fn();
    } catch (const config_error& e) {
        throw config_error(std::string(name) + ": " + e.what());
    } catch (const data_error& e) {
        throw data_error(std::string(name) + ": " + e.what());
    } catch (const numeric_error& e) {
        throw numeric_error(std::string(name) + ": " + e.what());
    }
}

inline nlohmann::ordered_json metrics_json(const ForecastMetrics& m, std::size_t n) {
    nlohmann::ordered_json j;
    j["mse"] = m.mse;
    j["mae"] = m.mae;
    j["rmse"] = m.rmse;
    if (m.r2)
        j["r2"] = *m.r2;
    else
        j["r2"] = nullptr;
    j["n"] = n;
    return j;
}

inline std::string csv_row(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

} // namespace detail

inline MethodConfig make_method_config(const std::string& name, const RunConfig& cfg) {
    const IntervalMethod method = parse_method(name);
    MethodConfig mc;
    mc.label = name;
    if (method == IntervalMethod::conventional) {
        ConventionalConfig c;
        c.confidence = cfg.confidence;
        c.residual_window = cfg.ci_window;
        c.divide_by_sqrt_n = cfg.ci_sqrt_n;
        c.scale = cfg.scale;
        mc.config = c;
    } else {
        SimilarityConfig s;
        s.method = method;
        s.window = cfg.window;
        s.scale = cfg.scale;
        s.params.lcss_epsilon = cfg.lcss_eps;
        s.params.twed_nu = cfg.twed_nu;
        s.params.twed_lambda = cfg.twed_lambda;
        s.embedding = cfg.embedding;
        mc.config = s;
    }
    return mc;
}

inline RunArtifacts run_pipeline(const RunConfig& cfg) {
    using detail::stage;
    RunArtifacts out;

    // -- acquire data ------------------------------------------------------
    CsvLoadResult loaded = stage("load", [&] {
        std::vector<std::string> columns = cfg.predictors;
        if (!columns.empty()) columns.insert(columns.begin(), cfg.target);
        if (!cfg.data.empty()) return load_csv(cfg.data, cfg.date_column, columns);
        SynthSpec spec = cfg.synth;
        spec.seed = cfg.seed;
        std::istringstream in(synth_csv(spec));
        return load_csv_stream(in, "synthetic", cfg.date_column, columns);
    });
    out.dropped_rows = loaded.dropped_rows;
    if (loaded.dropped_rows > 0)
        out.warnings.push_back("load: dropped " + std::to_string(loaded.dropped_rows) +
                               " rows with missing or unparseable cells");

    const TimeSeries* target_series = nullptr;
    std::vector<TimeSeries> predictors;
    stage("load", [&] {
        for (auto& s : loaded.series) {
            if (s.name == cfg.target)
                target_series = &s;
            else
                predictors.push_back(s);
        }
        if (!target_series)
            throw data_error("target column not found: " + cfg.target);
        return 0;
    });

    // -- lag features, split, standardize ----------------------------------
    const LagDataset dataset = stage(
        "lag", [&] { return build_lag_dataset(*target_series, predictors, cfg.max_lag); });
    const auto [train, test] =
        stage("split", [&] { return chronological_split(dataset, cfg.train_fraction); });
    out.n_train = train.rows();
    out.n_test = test.rows();

    const Standardizer standardizer =
        stage("standardize", [&] { return Standardizer::fit(train.features); });
    for (std::size_t c : standardizer.constant_columns()) {
        const auto& label = train.column_labels[c];
        out.warnings.push_back("standardize: zero-variance feature column " + label.series +
                               " (lag " + std::to_string(label.lag) + "); scale forced to 1");
    }
    const Matrix x_train = standardizer.apply(train.features);
    const Matrix x_test = standardizer.apply(test.features);

    // -- shrinkage selection and fit ---------------------------------------
    KSelection selection;
    if (cfg.fixed_k) {
        out.selected_k = *cfg.fixed_k;
    } else {
        selection = stage("select_k", [&] {
            return select_k(x_train, train.target,
                            log_grid(cfg.k_grid.lo, cfg.k_grid.hi, cfg.k_grid.size),
                            cfg.n_folds);
        });
        out.selected_k = selection.best_k;
    }
    const RidgeModel model =
        stage("fit", [&] { return fit_ridge(x_train, train.target, out.selected_k); });
    const std::vector<double> pred_train = stage("predict", [&] { return predict(model, x_train); });
    const std::vector<double> pred_test = stage("predict", [&] { return predict(model, x_test); });
    out.train_metrics = stage("score", [&] { return score(train.target, pred_train); });
    out.test_metrics = stage("score", [&] { return score(test.target, pred_test); });

    // -- intervals ----------------------------------------------------------
    std::vector<double> predicted_full = pred_train;
    predicted_full.insert(predicted_full.end(), pred_test.begin(), pred_test.end());
    std::vector<double> actual_full = train.target;
    actual_full.insert(actual_full.end(), test.target.begin(), test.target.end());
    const std::size_t test_start = train.rows();

    stage("intervals", [&] {
        for (const auto& name : cfg.methods) {
            MethodRun mr;
            mr.config = make_method_config(name, cfg);
            mr.intervals = build_interval(mr.config, predicted_full, actual_full, test_start);
            mr.report = evaluate(mr.intervals,
                                 std::span<const double>(actual_full).subspan(test_start));
            out.method_runs.push_back(std::move(mr));
        }
        return 0;
    });

    // -- artifacts -----------------------------------------------------------
    stage("report", [&] {
        using nlohmann::ordered_json;
        std::vector<std::string> notes;
        auto note_if_default = [&](const std::string& key, const std::string& text) {
            if (!cfg.explicit_keys.count(key)) notes.push_back(text);
        };
        note_if_default("train_fraction", "train_fraction defaulted to 0.8");
        note_if_default("k", cfg.fixed_k ? "" : "shrinkage k selected by expanding-window CV");
        if (std::find(cfg.methods.begin(), cfg.methods.end(), "lcss") != cfg.methods.end())
            note_if_default("lcss_eps",
                            "lcss epsilon defaulted to auto (0.05 x window actual sd)");
        if (std::find(cfg.methods.begin(), cfg.methods.end(), "twed") != cfg.methods.end()) {
            note_if_default("twed_nu", "twed nu defaulted to 0.001");
            note_if_default("twed_lambda", "twed lambda defaulted to 1.0");
        }
        if (!cfg.methods.empty()) {
            note_if_default("window", "similarity window defaulted to 20");
            note_if_default("scale", "margin scale defaulted to 1.0");
            note_if_default("ci_n",
                            "conventional margin uses N=1 (set ci_n for SD/sqrt(N))");
        }
        notes.erase(std::remove(notes.begin(), notes.end(), ""), notes.end());

        // manifest.json — every parameter, plus which ones were defaults.
        ordered_json manifest;
        manifest["tool"] = "simband";
        manifest["seed"] = cfg.seed;
        manifest["data"] = cfg.data.empty() ? "synthetic" : cfg.data;
        if (cfg.data.empty()) {
            ordered_json synth;
            synth["length"] = cfg.synth.length;
            synth["ar_coeff"] = cfg.synth.ar_coeff;
            synth["noise_sd"] = cfg.synth.noise_sd;
            synth["n_predictors"] = cfg.synth.n_predictors;
            synth["level"] = cfg.synth.level;
            synth["start_date"] = cfg.synth.start_date.to_string();
            manifest["synth"] = synth;
        }
        ordered_json params;
        params["date_column"] = cfg.date_column;
        params["target"] = cfg.target;
        params["predictors"] =
            cfg.predictors.empty() ? ordered_json("all-other-columns") : ordered_json(cfg.predictors);
        params["max_lag"] = cfg.max_lag;
        params["train_fraction"] = cfg.train_fraction;
        if (cfg.fixed_k)
            params["k"] = *cfg.fixed_k;
        else {
            params["k_grid_min"] = cfg.k_grid.lo;
            params["k_grid_max"] = cfg.k_grid.hi;
            params["k_grid_size"] = cfg.k_grid.size;
            params["n_folds"] = cfg.n_folds;
        }
        params["confidence"] = cfg.confidence;
        params["methods"] = cfg.methods;
        params["window"] = cfg.window;
        params["scale"] = cfg.scale;
        if (cfg.lcss_eps)
            params["lcss_eps"] = *cfg.lcss_eps;
        else
            params["lcss_eps"] = "auto(0.05*sd)";
        params["twed_nu"] = cfg.twed_nu;
        params["twed_lambda"] = cfg.twed_lambda;
        params["ci_window"] = cfg.ci_window;
        params["ci_n"] = cfg.ci_sqrt_n;
        params["embedding"] =
            cfg.embedding == Embedding::time_value ? "time-value" : "value-only";
        params["standardization"] = "per-column mean/population-sd, fit on train only";
        params["split"] = "chronological, train = floor(train_fraction * rows)";
        params["solver"] = "cholesky on (X'X + kI)";
        manifest["parameters"] = params;
        std::vector<std::string> defaulted;
        for (const auto& key : all_config_keys())
            if (!cfg.explicit_keys.count(key)) defaulted.push_back(key);
        manifest["defaulted_keys"] = defaulted;
        manifest["selected_k"] = out.selected_k;
        manifest["rows"] = dataset.rows();
        manifest["n_train"] = out.n_train;
        manifest["n_test"] = out.n_test;
        manifest["feature_columns"] = dataset.cols();
        manifest["dropped_rows"] = out.dropped_rows;
        manifest["warnings"] = out.warnings;
        manifest["notes"] = notes;
        out.files.emplace_back("manifest.json", manifest.dump(2) + "\n");

        // metrics.json — point-forecast quality on train and test.
        ordered_json metrics;
        metrics["model"] = "ridge";
        metrics["shrinkage_k"] = out.selected_k;
        metrics["k_selection_mode"] = cfg.fixed_k ? "fixed" : "expanding-window-cv";
        metrics["train"] = detail::metrics_json(out.train_metrics, out.n_train);
        metrics["test"] = detail::metrics_json(out.test_metrics, out.n_test);
        out.files.emplace_back("metrics.json", metrics.dump(2) + "\n");

        // predictions.csv — actual vs predicted over the test window.
        std::string pred_csv = "t,actual,predicted\n";
        for (std::size_t t = 0; t < out.n_test; ++t)
            pred_csv += detail::csv_row({std::to_string(t),
                                         detail::format_number(test.target[t]),
                                         detail::format_number(pred_test[t])});
        out.files.emplace_back("predictions.csv", pred_csv);

        // cv_curve.csv — k vs mean validation MSE (when CV ran).
        if (!cfg.fixed_k) {
            std::string csv = "k,mean_mse\n";
            for (const auto& row : selection.table)
                csv += detail::csv_row(
                    {detail::format_number(row.k), detail::format_number(row.mean_mse)});
            out.files.emplace_back("cv_curve.csv", csv);
        }

        if (!out.method_runs.empty()) {
            std::string csv = "method,coverage_pct,mean_width,n_points\n";
            ordered_json mj;
            mj["methods"] = ordered_json::array();
            for (const auto& mr : out.method_runs) {
                csv += detail::csv_row({mr.report.method,
                                        detail::format_number(mr.report.coverage_pct),
                                        detail::format_number(mr.report.mean_width),
                                        std::to_string(mr.report.n_points)});
                ordered_json row;
                row["method"] = mr.report.method;
                row["coverage_pct"] = mr.report.coverage_pct;
                row["mean_width"] = mr.report.mean_width;
                row["n_points"] = mr.report.n_points;
                ordered_json p;
                for (const auto& [key, value] : mr.intervals.params) p[key] = value;
                row["params"] = p;
                mj["methods"].push_back(row);
            }
            mj["notes"] = notes;
            out.files.emplace_back("methods.csv", csv);
            out.files.emplace_back("methods.json", mj.dump(2) + "\n");

            for (const auto& mr : out.method_runs) {
                std::string ivcsv = "t,center,lower,upper,actual,covered\n";
                for (std::size_t t = 0; t < mr.intervals.size(); ++t) {
                    const double a = actual_full[test_start + t];
                    const bool covered =
                        mr.intervals.lowers[t] <= a && a <= mr.intervals.uppers[t];
                    ivcsv += detail::csv_row({std::to_string(t),
                                              detail::format_number(mr.intervals.centers[t]),
                                              detail::format_number(mr.intervals.lowers[t]),
                                              detail::format_number(mr.intervals.uppers[t]),
                                              detail::format_number(a),
                                              covered ? "1" : "0"});
                }
                out.files.emplace_back("intervals_" + mr.report.method + ".csv", ivcsv);
            }
        }
        return 0;
    });

    return out;
}

/// Write artifacts under out_dir in their recorded (deterministic) order.
inline void write_artifacts(const std::string& out_dir, const RunArtifacts& artifacts) {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, content] : artifacts.files) {
        const auto path = std::filesystem::path(out_dir) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw data_error("cannot write output file: " + path.string());
        f << content;
    }
}

} // namespace simband
