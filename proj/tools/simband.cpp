// simband command line: generate synthetic series, run the forecasting +
// interval pipeline, and export the evaluation reports as CSV/JSON.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "simband/pipeline.hpp"
#include "simband/simband.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

// Every config key is also a flag of the same name (hyphenated spelling
// accepted too); flags win over the file.
void add_run_options(CLI::App* cmd, std::string& config_path,
                     std::vector<std::pair<std::string, std::string>>& overrides) {
    cmd->add_option("-c,--config", config_path, "flat key=value config file");
    for (const auto& key : simband::all_config_keys()) {
        std::string names = "--" + key;
        if (key.find('_') != std::string::npos) {
            std::string hyphenated = key;
            for (char& c : hyphenated)
                if (c == '_') c = '-';
            names += ",--" + hyphenated;
        }
        cmd->add_option_function<std::string>(
               names,
               [&overrides, key](const std::string& value) {
                   overrides.emplace_back(key, value);
               },
               "override config key '" + key + "'")
            ->expected(1);
    }
}

simband::RunConfig resolve_config(const std::string& config_path,
                                  const std::vector<std::pair<std::string, std::string>>& overrides) {
    simband::RunConfig cfg;
    if (!config_path.empty()) cfg = simband::parse_config_file(config_path);
    for (const auto& [key, value] : overrides) simband::apply_config_kv(cfg, key, value);
    return cfg;
}

void print_reports(const simband::RunArtifacts& artifacts) {
    const auto& test = artifacts.test_metrics;
    std::printf("ridge k=%.6g  test rmse=%.6g mae=%.6g r2=%s\n", artifacts.selected_k,
                test.rmse, test.mae,
                test.r2 ? std::to_string(*test.r2).c_str() : "undefined");
    for (const auto& mr : artifacts.method_runs)
        std::printf("%-12s coverage %6.2f%%  mean width %g  (n=%zu)\n",
                    mr.report.method.c_str(), mr.report.coverage_pct, mr.report.mean_width,
                    mr.report.n_points);
}

int run_command(const std::string& config_path,
                const std::vector<std::pair<std::string, std::string>>& overrides,
                bool metrics_only, bool compare_only) {
    simband::RunConfig cfg = resolve_config(config_path, overrides);
    if (metrics_only) cfg.methods.clear();
    simband::RunArtifacts artifacts = simband::run_pipeline(cfg);
    if (compare_only) {
        std::erase_if(artifacts.files, [](const auto& f) {
            return f.first == "metrics.json" || f.first == "cv_curve.csv" ||
                   f.first == "predictions.csv";
        });
    }
    simband::write_artifacts(cfg.out_dir, artifacts);
    for (const auto& w : artifacts.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    print_reports(artifacts);
    std::printf("wrote %zu files to %s\n", artifacts.files.size(), cfg.out_dir.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lag-feature ridge forecasting with distance-based prediction bands"};
    app.set_version_flag("--version", "simband 0.1.0");
    app.require_subcommand(1);

    // synth ------------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "write a seeded synthetic AR(1) dataset as CSV");
    simband::SynthSpec spec;
    std::string synth_out = "synthetic.csv";
    synth_cmd->add_option("-o,--out", synth_out, "output CSV path");
    synth_cmd->add_option("--length", spec.length, "number of rows (>= 50)");
    synth_cmd->add_option("--ar-coeff", spec.ar_coeff, "AR(1) coefficient");
    synth_cmd->add_option("--noise-sd", spec.noise_sd, "innovation standard deviation");
    synth_cmd->add_option("--n-predictors", spec.n_predictors, "number of predictor columns");
    synth_cmd->add_option("--level", spec.level, "process level");
    synth_cmd->add_option("--seed", spec.seed, "rng seed (pins the file bytes)");
    synth_cmd->add_option("--target-name", spec.target_name, "target column name");

    // run / metrics / compare --------------------------------------------------
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    auto* run_cmd = app.add_subcommand("run", "full pipeline: model, intervals, all reports");
    add_run_options(run_cmd, config_path, overrides);
    auto* metrics_cmd =
        app.add_subcommand("metrics", "pipeline without intervals: point-forecast reports only");
    add_run_options(metrics_cmd, config_path, overrides);
    auto* compare_cmd =
        app.add_subcommand("compare", "pipeline with interval reports only (no metrics files)");
    add_run_options(compare_cmd, config_path, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (synth_cmd->parsed()) {
            const std::string csv = simband::synth_csv(spec);
            std::ofstream out(synth_out, std::ios::binary);
            if (!out) throw simband::data_error("cannot write " + synth_out);
            out << csv;
            std::printf("wrote %s (%zu rows, seed %llu)\n", synth_out.c_str(), spec.length,
                        static_cast<unsigned long long>(spec.seed));
            return kExitOk;
        }
        if (run_cmd->parsed()) return run_command(config_path, overrides, false, false);
        if (metrics_cmd->parsed()) return run_command(config_path, overrides, true, false);
        if (compare_cmd->parsed()) return run_command(config_path, overrides, false, true);
    } catch (const simband::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const simband::data_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return kExitData;
    } catch (const simband::numeric_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return kExitOk;
}
