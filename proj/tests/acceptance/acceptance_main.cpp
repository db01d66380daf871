// Acceptance suite: every release gate in one binary, one PASS/FAIL line
// per criterion. Exits non-zero when any criterion fails.
//
// usage: acceptance [path-to-cli] [scratch-dir]
//
// The conditional real-data criterion runs when SIMBAND_MEGACAP_CSV points
// at a daily-closes CSV (target column SIMBAND_MEGACAP_TARGET, default
// AAPL) and is reported as SKIP otherwise.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "simband/simband.hpp"

#include "../oracles.hpp"
#include "../ridge_oracle.hpp"

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %s — %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

void report_skip(const std::string& name, const std::string& detail) {
    std::printf("[SKIP] %s — %s\n", name.c_str(), detail.c_str());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------
// 1. Oracle equivalence: exhaustive sweep, lengths <= 5, values in {0,1,2}.
// ---------------------------------------------------------------------------
void criterion_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<std::vector<double>> sequences;
    for (std::size_t len = 1; len <= 5; ++len) {
        std::vector<double> seq(len, 0.0);
        std::size_t count = 1;
        for (std::size_t i = 0; i < len; ++i) count *= 3;
        for (std::size_t code = 0; code < count; ++code) {
            std::size_t c = code;
            for (std::size_t i = 0; i < len; ++i) {
                seq[i] = static_cast<double>(c % 3);
                c /= 3;
            }
            sequences.push_back(seq);
        }
    }

    const double lcss_eps[] = {0.5, 1.5};
    const double twed_nu[] = {0.0, 0.1};
    const double twed_lambda[] = {0.0, 1.0};

    std::size_t mismatches = 0;
    std::size_t checks = 0;
    // Distances here are symmetric pair functions (verified exactly below),
    // so each unordered pair carries the full ordered-pair check.
    for (std::size_t a = 0; a < sequences.size() && mismatches == 0; ++a) {
        for (std::size_t b = a; b < sequences.size() && mismatches == 0; ++b) {
            const auto& x = sequences[a];
            const auto& y = sequences[b];

            const double dtw_got = simband::dtw(x, y);
            if (dtw_got != oracle::dtw_exhaustive(x, y)) ++mismatches;
            if (dtw_got != simband::dtw(y, x)) ++mismatches;

            const double haus_got = simband::hausdorff(x, y);
            if (haus_got != oracle::hausdorff_pairwise(x, y)) ++mismatches;
            if (haus_got != simband::hausdorff(y, x)) ++mismatches;

            const double frechet_got = simband::frechet_discrete(x, y);
            if (frechet_got != oracle::frechet_exhaustive(x, y)) ++mismatches;
            if (frechet_got != simband::frechet_discrete(y, x)) ++mismatches;

            for (double eps : lcss_eps) {
                const auto got = simband::lcss(x, y, eps);
                if (got.match_count != oracle::lcss_subsequences(x, y, eps)) ++mismatches;
                if (got.match_count != simband::lcss(y, x, eps).match_count) ++mismatches;
            }
            for (double nu : twed_nu) {
                for (double lambda : twed_lambda) {
                    const double got = simband::twed(x, y, nu, lambda);
                    if (got != oracle::twed_scripts(x, y, nu, lambda)) ++mismatches;
                    if (got != simband::twed(y, x, nu, lambda)) ++mismatches;
                }
            }
            checks += 3 + 2 + 4;
        }
    }

    const double elapsed = seconds_since(t0);
    std::ostringstream detail;
    detail << checks << " pair-metric checks over " << sequences.size() << " sequences, "
           << mismatches << " mismatches, " << elapsed << " s";
    if (elapsed >= 60.0) detail << " (over the 60 s budget)";
    report("oracle-equivalence (dtw, lcss, hausdorff, frechet, twed vs brute force)",
           mismatches == 0 && elapsed < 60.0, detail.str());
}

// ---------------------------------------------------------------------------
// 2. Metric laws over 10,000 random pairs.
// ---------------------------------------------------------------------------
void criterion_metric_laws() {
    simband::Rng rng(20240401);
    std::size_t violations = 0;
    const std::size_t n_pairs = 10000;
    for (std::size_t trial = 0; trial < n_pairs; ++trial) {
        const std::size_t nx = 1 + rng.raw() % 24;
        const std::size_t ny = 1 + rng.raw() % 24;
        std::vector<double> x(nx), y(ny);
        for (auto& v : x) v = -5.0 + 10.0 * rng.uniform();
        for (auto& v : y) v = -5.0 + 10.0 * rng.uniform();
        const double eps = 0.1 + rng.uniform();
        const double nu = rng.uniform();
        const double lambda = rng.uniform();

        // Self-distance zero.
        if (!(simband::euclidean(x, x) <= 1e-12)) ++violations;
        if (!(simband::dtw(x, x) <= 1e-12)) ++violations;
        if (!(simband::hausdorff(x, x) <= 1e-12)) ++violations;
        if (!(simband::frechet_discrete(x, x) <= 1e-12)) ++violations;
        if (!(simband::twed(x, x, nu, lambda) <= 1e-12)) ++violations;
        if (!(simband::lcss(x, x, eps).distance <= 1e-12)) ++violations;

        // Symmetry.
        if (!(std::abs(simband::dtw(x, y) - simband::dtw(y, x)) <= 1e-12)) ++violations;
        if (!(std::abs(simband::hausdorff(x, y) - simband::hausdorff(y, x)) <= 1e-12))
            ++violations;
        if (!(std::abs(simband::frechet_discrete(x, y) - simband::frechet_discrete(y, x)) <=
              1e-12))
            ++violations;
        if (!(std::abs(simband::twed(x, y, nu, lambda) - simband::twed(y, x, nu, lambda)) <=
              1e-12))
            ++violations;
        if (simband::lcss(x, y, eps).match_count != simband::lcss(y, x, eps).match_count)
            ++violations;

        // Fréchet dominates Hausdorff.
        if (!(simband::frechet_discrete(x, y) >= simband::hausdorff(x, y))) ++violations;

        // LCSS match count is monotone in epsilon.
        if (simband::lcss(x, y, eps).match_count >
            simband::lcss(x, y, eps + 0.5).match_count)
            ++violations;

        // DTW is bounded by the pointwise diagonal cost on equal lengths;
        // euclidean symmetry rides along on the same pairs.
        if (nx == ny) {
            double diagonal = 0.0;
            for (std::size_t i = 0; i < nx; ++i) diagonal += std::abs(x[i] - y[i]);
            if (!(simband::dtw(x, y) <= diagonal)) ++violations;
            if (!(std::abs(simband::euclidean(x, y) - simband::euclidean(y, x)) <= 1e-12))
                ++violations;
        }
    }
    report("metric-laws (self-distance, symmetry, frechet>=hausdorff, lcss monotone, dtw bound)",
           violations == 0,
           std::to_string(n_pairs) + " random pairs, " + std::to_string(violations) +
               " violations");
}

// ---------------------------------------------------------------------------
// 3. Ridge correctness: k = 0 vs QR oracle, norm non-increasing in k.
// ---------------------------------------------------------------------------
void criterion_ridge() {
    simband::Rng rng(77);
    std::size_t failures = 0;
    const auto grid = simband::log_grid(1e-3, 1e3, 20);
    for (int instance = 0; instance < 100; ++instance) {
        const std::size_t rows = 25 + rng.raw() % 40;
        const std::size_t cols = 1 + rng.raw() % 6;
        simband::Matrix x(rows, cols);
        for (std::size_t c = 0; c < cols; ++c) {
            double sum = 0.0;
            for (std::size_t r = 0; r < rows; ++r) {
                x(r, c) = -1.0 + 2.0 * rng.uniform();
                sum += x(r, c);
            }
            const double mean = sum / static_cast<double>(rows);
            for (std::size_t r = 0; r < rows; ++r) x(r, c) -= mean;
        }
        std::vector<double> y(rows);
        for (auto& v : y) v = -2.0 + 4.0 * rng.uniform();

        const auto model = simband::fit_ridge(x, y, 0.0);
        const auto expected = oracle::qr_ridge(x, y, 0.0);
        for (std::size_t c = 0; c < cols; ++c)
            if (!(std::abs(model.coefficients[c] - expected[c]) <= 1e-8)) ++failures;

        double last = std::numeric_limits<double>::infinity();
        for (double k : grid) {
            const double norm = simband::fit_ridge(x, y, k).coefficient_norm();
            if (!(norm <= last + 1e-12)) ++failures;
            last = norm;
        }
    }
    report("ridge-correctness (k=0 vs QR oracle at 1e-8; ||beta|| non-increasing in k)",
           failures == 0, "100 random well-conditioned instances, 20-point grid");
}

// ---------------------------------------------------------------------------
// 4. Conventional-interval calibration on Gaussian residuals.
// ---------------------------------------------------------------------------
void criterion_calibration() {
    simband::Rng rng(4242);
    const std::size_t n = 5000;
    const double sigma = 2.0;
    std::vector<double> predicted(n), actual(n);
    double level = 100.0;
    for (std::size_t t = 0; t < n; ++t) {
        level += 0.1 * rng.gaussian();
        predicted[t] = level;
        actual[t] = level + sigma * rng.gaussian();
    }
    // Known SD fed as the residual window: population SD of {-sigma, +sigma}
    // is exactly sigma. Static window, N = 1, confidence 0.95.
    const std::vector<double> window{-sigma, sigma};
    simband::ConventionalConfig cfg;
    cfg.confidence = 0.95;
    cfg.residual_window = 2;
    cfg.divide_by_sqrt_n = false;
    const auto iv = simband::conventional_interval(predicted, {}, window, cfg);
    const auto r = simband::evaluate(iv, actual);
    const bool pass = r.coverage_pct >= 93.0 && r.coverage_pct <= 97.0;
    std::ostringstream detail;
    detail << "coverage " << r.coverage_pct << "% over " << n
           << " points (nominal 95%, tolerance [93, 97])";
    report("conventional-interval-calibration", pass, detail.str());
}

// ---------------------------------------------------------------------------
// 5. Coverage/width trade-off ordering on the pinned seed-7 dataset.
// ---------------------------------------------------------------------------
void criterion_width_ordering() {
    simband::RunConfig cfg; // defaults: synthetic seed-7, six methods
    const auto artifacts = simband::run_pipeline(cfg);
    double width_conventional = -1.0, width_lcss = -1.0;
    double width_dtw = -1.0, width_hausdorff = -1.0, width_twed = -1.0;
    for (const auto& mr : artifacts.method_runs) {
        if (mr.report.method == "conventional") width_conventional = mr.report.mean_width;
        if (mr.report.method == "lcss") width_lcss = mr.report.mean_width;
        if (mr.report.method == "dtw") width_dtw = mr.report.mean_width;
        if (mr.report.method == "hausdorff") width_hausdorff = mr.report.mean_width;
        if (mr.report.method == "twed") width_twed = mr.report.mean_width;
    }
    const bool pass = width_dtw < width_conventional && width_hausdorff < width_conventional &&
                      width_twed < width_conventional && width_conventional < width_lcss;
    std::ostringstream detail;
    detail << "mean widths: dtw " << width_dtw << ", hausdorff " << width_hausdorff
           << ", twed " << width_twed << " < conventional " << width_conventional
           << " < lcss " << width_lcss;
    report("coverage-width-ordering ({dtw, hausdorff, twed} < conventional < lcss)", pass,
           detail.str());
}

// ---------------------------------------------------------------------------
// 6. No-look-ahead mutation test, 100 random sites.
// ---------------------------------------------------------------------------
void criterion_no_look_ahead() {
    simband::Rng rng(1717);
    const std::size_t warmup = 60, test = 80;
    std::vector<double> predicted, actual;
    double level = 100.0;
    for (std::size_t i = 0; i < warmup + test; ++i) {
        level += rng.gaussian();
        predicted.push_back(level);
        actual.push_back(level + 1.5 * rng.gaussian());
    }

    std::vector<simband::MethodConfig> configs;
    configs.push_back({simband::ConventionalConfig{}, ""});
    for (simband::IntervalMethod m :
         {simband::IntervalMethod::euclidean, simband::IntervalMethod::dtw,
          simband::IntervalMethod::lcss, simband::IntervalMethod::hausdorff,
          simband::IntervalMethod::frechet, simband::IntervalMethod::twed}) {
        simband::SimilarityConfig sc;
        sc.method = m;
        configs.push_back({sc, ""});
    }

    std::vector<simband::IntervalSeries> baselines;
    for (const auto& mc : configs)
        baselines.push_back(simband::build_interval(mc, predicted, actual, warmup));

    std::size_t violations = 0;
    for (int site_idx = 0; site_idx < 100; ++site_idx) {
        const std::size_t site = warmup + rng.raw() % test;
        auto mutated = actual;
        for (std::size_t i = site; i < mutated.size(); ++i)
            mutated[i] += -50.0 + 100.0 * rng.uniform();
        const auto& mc = configs[static_cast<std::size_t>(site_idx) % configs.size()];
        const auto& base = baselines[static_cast<std::size_t>(site_idx) % configs.size()];
        const auto iv = simband::build_interval(mc, predicted, mutated, warmup);
        // Everything up to and including the mutation site must be unchanged.
        for (std::size_t t = 0; t <= site - warmup; ++t) {
            if (iv.lowers[t] != base.lowers[t] || iv.uppers[t] != base.uppers[t] ||
                iv.centers[t] != base.centers[t])
                ++violations;
        }
    }
    report("no-look-ahead-mutation", violations == 0,
           "100 random mutation sites across all seven methods, " +
               std::to_string(violations) + " changed intervals");
}

// ---------------------------------------------------------------------------
// 7. CLI determinism: identical config -> byte-identical outputs.
// ---------------------------------------------------------------------------
std::vector<std::pair<std::string, std::string>> read_dir(const std::filesystem::path& dir) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::ifstream f(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        files.emplace_back(entry.path().filename().string(), ss.str());
    }
    std::sort(files.begin(), files.end());
    return files;
}

void criterion_cli_determinism(const std::string& cli, const std::filesystem::path& scratch) {
    if (cli.empty()) {
        report("cli-determinism", false, "no CLI path supplied to the acceptance binary");
        return;
    }
    std::filesystem::remove_all(scratch);
    std::filesystem::create_directories(scratch);
    const auto run = [&](const std::string& out_dir) {
        const std::string cmd = "\"" + cli + "\" run --seed 7 --synth_length 260 --out_dir \"" +
                                out_dir + "\" > \"" + out_dir + ".log\" 2>&1";
        return std::system(cmd.c_str());
    };
    const auto dir1 = (scratch / "run1").string();
    const auto dir2 = (scratch / "run2").string();
    const int rc1 = run(dir1);
    const int rc2 = run(dir2);
    if (rc1 != 0 || rc2 != 0) {
        report("cli-determinism", false,
               "cli exited with " + std::to_string(rc1) + " / " + std::to_string(rc2));
        return;
    }
    const auto files1 = read_dir(dir1);
    const auto files2 = read_dir(dir2);
    const bool pass = !files1.empty() && files1 == files2;
    report("cli-determinism", pass,
           std::to_string(files1.size()) + " output files byte-compared across two runs");
}

// ---------------------------------------------------------------------------
// 8. Conditional: real mega-cap dataset, test R^2 >= 0.9 with max_lag 3.
// ---------------------------------------------------------------------------
void criterion_real_data() {
    const char* path = std::getenv("SIMBAND_MEGACAP_CSV");
    if (!path || std::string(path).empty()) {
        report_skip("real-data-r2 (conditional)",
                    "SIMBAND_MEGACAP_CSV not set; supply the daily-closes CSV to enable");
        return;
    }
    const char* target_env = std::getenv("SIMBAND_MEGACAP_TARGET");
    simband::RunConfig cfg;
    cfg.data = path;
    cfg.target = target_env && *target_env ? target_env : "AAPL";
    cfg.max_lag = 3;
    cfg.methods.clear();
    const auto artifacts = simband::run_pipeline(cfg);
    const bool pass =
        artifacts.test_metrics.r2.has_value() && *artifacts.test_metrics.r2 >= 0.9;
    std::ostringstream detail;
    detail << "test r2 = "
           << (artifacts.test_metrics.r2 ? std::to_string(*artifacts.test_metrics.r2)
                                         : std::string("undefined"))
           << " on " << artifacts.n_test << " held-out rows (threshold 0.9)";
    report("real-data-r2 (conditional)", pass, detail.str());
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const std::filesystem::path scratch = argc > 2 ? argv[2] : "acceptance_scratch";

    criterion_oracle_equivalence();
    criterion_metric_laws();
    criterion_ridge();
    criterion_calibration();
    criterion_width_ordering();
    criterion_no_look_ahead();
    criterion_cli_determinism(cli, scratch);
    criterion_real_data();

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
