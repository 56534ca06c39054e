// cyclodetect: detect cyclostationary signals with a known cycle period in
// Gaussian noise of known spatio-temporal structure, plus the Monte Carlo
// experiments, noise characterization, and stage benchmarks around it.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cyclodetect/bench.hpp"
#include "cyclodetect/detectors.hpp"
#include "cyclodetect/errors.hpp"
#include "cyclodetect/estimation.hpp"
#include "cyclodetect/experiment_io.hpp"
#include "cyclodetect/iq_file.hpp"
#include "cyclodetect/montecarlo.hpp"
#include "cyclodetect/stats.hpp"
#include "cyclodetect/transform.hpp"

namespace cd = cyclodetect;
namespace fs = std::filesystem;

namespace {

constexpr int kExitH0 = 0;
constexpr int kExitH1 = 10;
constexpr int kExitError = 2;

// Accepts the long names plus the conventional roman-numeral shorthand.
cd::NoiseStructureCase parse_case_flag(const std::string& s) {
    if (s == "I" || s == "i") return cd::NoiseStructureCase::ColoredUncorrelated;
    if (s == "II" || s == "ii") return cd::NoiseStructureCase::WhiteCorrelated;
    if (s == "III" || s == "iii")
        return cd::NoiseStructureCase::WhiteUncorrelated;
    return cd::parse_structure_case(s);
}

const char* roman_label(cd::NoiseStructureCase c) {
    switch (c) {
        case cd::NoiseStructureCase::ColoredCorrelated: return "general case";
        case cd::NoiseStructureCase::ColoredUncorrelated: return "case I";
        case cd::NoiseStructureCase::WhiteCorrelated: return "case II";
        case cd::NoiseStructureCase::WhiteUncorrelated: return "case III";
    }
    return "?";
}

int run_detect(const std::string& file, const std::string& case_name,
               const std::string& detector_name, double pfa) {
    const cd::NoiseStructureCase structure = parse_case_flag(case_name);
    const cd::DetectorKind::Stat stat = cd::parse_stat(detector_name);
    if (stat == cd::DetectorKind::Stat::Combined) {
        throw cd::InvalidSpec(
            "the combined statistic has no analytic null reference; use "
            "'experiment' with an empirical threshold instead");
    }

    const auto [header, samples] = cd::read_iq_file(file);
    const cd::SignalDims& dims = header.dims;

    const cd::FrequencyBlockSet fb = cd::transform_observation(samples, dims);
    const cd::BlockCovariance s = cd::sample_block_covariance(fb);
    const cd::NullCovarianceEstimate s0 = cd::s0_hat(s, structure);
    const cd::CoherenceBlocks c = cd::coherence(s, s0);

    cd::StatPair sp;
    int dof = 0;
    switch (stat) {
        case cd::DetectorKind::Stat::Glrt:
            sp = cd::glrt_stat(c, dims.n_snapshots);
            dof = cd::glr_dof(structure, dims.n_antennas, dims.cycle_period,
                              dims.n_blocks);
            break;
        case cd::DetectorKind::Stat::FrobeniusSum:
            sp = cd::frob_sum_stat(c, dims.n_snapshots);
            dof = cd::glr_dof(structure, dims.n_antennas, dims.cycle_period,
                              dims.n_blocks);
            break;
        case cd::DetectorKind::Stat::FrobeniusAvg:
            sp = cd::frob_avg_stat(c, dims.n_snapshots);
            dof = cd::avg_stat_dof(structure, dims.n_antennas,
                                   dims.cycle_period);
            break;
        case cd::DetectorKind::Stat::Combined:
            break; // rejected above
    }

    cd::DetectionReport report = cd::decide(sp.normalized, dof, pfa);
    report.statistic = sp.raw;

    std::printf(
        "CYCLODETECT result=%s detector=%s case=%s statistic=%.12g "
        "normalized=%.12g dof=%d threshold=%.12g p_value=%.6g pfa=%g\n",
        report.reject_null ? "H1" : "H0", cd::to_string(stat),
        cd::to_string(structure), report.statistic, report.normalized,
        report.dof, report.threshold, report.p_value, pfa);
    std::printf("file: %s  (L=%d antennas, cycle period P=%d, N=%d blocks, "
                "M=%d snapshots)\n",
                file.c_str(), dims.n_antennas, dims.cycle_period, dims.n_blocks,
                dims.n_snapshots);
    std::printf("detector: %s under %s noise (%s)\n", cd::to_string(stat),
                cd::to_string(structure), roman_label(structure));
    std::printf("normalized statistic %.6g vs chi-squared(%d dof) threshold "
                "%.6g at pfa=%g (p-value %.4g)\n",
                report.normalized, report.dof, report.threshold, pfa,
                report.p_value);
    std::printf("decision: %s\n",
                report.reject_null ? "H1 — cyclostationary signal present"
                                   : "H0 — noise only");
    return report.reject_null ? kExitH1 : kExitH0;
}

int run_experiment_cmd(const std::string& config_path, const std::string& out,
                       long trials_override, bool seed_set, std::uint64_t seed,
                       double pfa_override, int threads_override) {
    cd::ExperimentFile ef = cd::load_experiment_file(config_path);
    cd::ExperimentConfig& cfg = ef.config;
    if (trials_override >= 0) cfg.trials = static_cast<int>(trials_override);
    if (seed_set) cfg.root_seed = seed;
    if (pfa_override > 0.0) cfg.pfa = pfa_override;
    if (threads_override > 0) cfg.threads = threads_override;
    cfg.validate();

    fs::create_directories(out);
    const auto path = [&](const char* name) { return (fs::path(out) / name).string(); };

    switch (ef.kind) {
        case cd::ExperimentKind::Roc: {
            const cd::TrialScores ts = cd::run_experiment(cfg);
            std::vector<cd::RocCurve> curves;
            std::vector<double> aucs;
            for (std::size_t d = 0; d < ts.labels.size(); ++d) {
                curves.push_back(
                    cd::roc_and_auc(ts.null_scores[d], ts.alt_scores[d]));
                aucs.push_back(curves.back().auc);
            }
            cd::write_roc_csv(path("roc.csv"), ts.labels, curves);
            cd::write_auc_csv(path("auc.csv"), ts.labels, aucs);
            std::printf("wrote %s and %s (%d trials)\n", path("roc.csv").c_str(),
                        path("auc.csv").c_str(), cfg.trials);
            for (std::size_t d = 0; d < ts.labels.size(); ++d)
                std::printf("  AUC %-28s %.4f\n", ts.labels[d].c_str(), aucs[d]);
            break;
        }
        case cd::ExperimentKind::NullCdf: {
            const cd::NullCdfResult res = cd::null_cdf_experiment(cfg);
            cd::write_cdf_csv(path("cdf.csv"), res);
            std::printf("wrote %s (%d null trials)\n", path("cdf.csv").c_str(),
                        cfg.trials);
            for (std::size_t d = 0; d < res.labels.size(); ++d)
                std::printf("  KS vs chi-squared(%d) %-28s %.4f\n", res.dof[d],
                            res.labels[d].c_str(), res.ks[d]);
            break;
        }
        case cd::ExperimentKind::Sweep: {
            const cd::SweepResult res =
                cd::robustness_sweep(cfg, ef.sigma_list);
            cd::write_sweep_csv(path("sweep.csv"), res);
            std::printf("wrote %s (%zu decay points, %d trials each)\n",
                        path("sweep.csv").c_str(), res.sigma.size(), cfg.trials);
            break;
        }
        case cd::ExperimentKind::AucGrid: {
            const cd::AucGridResult res =
                cd::auc_grid(cfg, ef.lambda_grid, ef.mu_grid);
            cd::write_grid_csv(path("auc.csv"), res);
            double best = -1.0, best_l = 0.0, best_m = 0.0;
            for (std::size_t i = 0; i < res.lambda_grid.size(); ++i)
                for (std::size_t j = 0; j < res.mu_grid.size(); ++j)
                    if (res.auc[i][j] > best) {
                        best = res.auc[i][j];
                        best_l = res.lambda_grid[i];
                        best_m = res.mu_grid[j];
                    }
            std::printf("wrote %s; best AUC %.4f at lambda=%g mu=%g "
                        "(log-GLR reference %.4f)\n",
                        path("auc.csv").c_str(), best, best_l, best_m,
                        res.glrt_auc);
            break;
        }
        case cd::ExperimentKind::PmdVsSnr: {
            const cd::PmdVsSnrResult res = cd::pmd_vs_snr(cfg);
            cd::write_pmd_csv(path("pmd.csv"), res);
            std::printf("wrote %s (%zu SNR points, %d trials)\n",
                        path("pmd.csv").c_str(), res.snr_db.size(), cfg.trials);
            break;
        }
    }
    return 0;
}

int run_characterize(const std::string& file, double pfa) {
    const auto [header, samples] = cd::read_iq_file(file);
    const cd::SignalDims& dims = header.dims;
    const int m = dims.n_snapshots;
    const int n_bins = dims.n_blocks * dims.cycle_period;

    const cd::FrequencyBlockSet fb = cd::transform_observation(samples, dims);
    const cd::BlockCovariance s = cd::sample_block_covariance(fb);

    const double t_stat = -2.0 * m * cd::noise_temporal_glr(s);
    const int t_dof = cd::temporal_noise_dof(dims.n_antennas, n_bins);
    const cd::DetectionReport t_rep = cd::decide(t_stat, t_dof, pfa);

    const double s_stat = -2.0 * m * cd::noise_spatial_glr(s);
    const int s_dof = cd::spatial_noise_dof(dims.n_antennas, n_bins);
    const cd::DetectionReport s_rep = cd::decide(s_stat, s_dof, pfa);

    const bool colored = t_rep.reject_null;
    const bool correlated = s_rep.reject_null;
    std::printf("temporal: %s  (-2M*GLR = %.6g, dof = %d by parameter "
                "counting, threshold = %.6g, p = %.4g)\n",
                colored ? "colored" : "white", t_stat, t_dof, t_rep.threshold,
                t_rep.p_value);
    std::printf("spatial: %s  (-2M*GLR = %.6g, dof = %d by parameter "
                "counting, threshold = %.6g, p = %.4g)\n",
                correlated ? "correlated" : "uncorrelated", s_stat, s_dof,
                s_rep.threshold, s_rep.p_value);

    cd::NoiseStructureCase rec;
    if (colored)
        rec = correlated ? cd::NoiseStructureCase::ColoredCorrelated
                         : cd::NoiseStructureCase::ColoredUncorrelated;
    else
        rec = correlated ? cd::NoiseStructureCase::WhiteCorrelated
                         : cd::NoiseStructureCase::WhiteUncorrelated;
    std::printf("recommended case for detect: %s (%s)\n", cd::to_string(rec),
                roman_label(rec));
    return 0;
}

int run_bench(int n_antennas, int cycle_period, int n_snapshots,
              std::vector<int> blocks, int repeats) {
    if (blocks.empty()) blocks = {8, 16, 32, 64};
    const std::vector<cd::StageTiming> rows = cd::bench_over_blocks(
        n_antennas, cycle_period, n_snapshots, blocks, repeats);
    std::fputs(cd::format_bench_table(rows).c_str(), stdout);

    std::vector<double> n_axis, t_transform, t_cov, t_coh, t_glrt;
    for (const cd::StageTiming& r : rows) {
        n_axis.push_back(static_cast<double>(r.dims.n_blocks));
        t_transform.push_back(r.transform);
        t_cov.push_back(r.covariance);
        t_coh.push_back(r.coherence_correlated);
        t_glrt.push_back(r.glrt);
    }
    std::printf("fitted exponent vs N  transform %.2f (model ~1 plus log "
                "factor), covariance %.2f (model 1), coherence %.2f (model 1), "
                "log-det %.2f (model 1)\n",
                cd::fit_exponent(n_axis, t_transform),
                cd::fit_exponent(n_axis, t_cov), cd::fit_exponent(n_axis, t_coh),
                cd::fit_exponent(n_axis, t_glrt));
    const cd::StageTiming& last = rows.back();
    std::printf("coherence correlated/uncorrelated time ratio at N=%d: %.2f "
                "(model 2L = %d)\n",
                last.dims.n_blocks,
                last.coherence_correlated / last.coherence_uncorrelated,
                2 * n_antennas);
    return 0;
}

int run_convert(const std::string& in, const std::string& out, int n_antennas,
                int cycle_period, int n_blocks, int n_snapshots,
                const std::string& format) {
    const bool in_csv = fs::path(in).extension() == ".csv";
    const bool out_csv = fs::path(out).extension() == ".csv";
    if (in_csv == out_csv)
        throw cd::InvalidSpec(
            "convert needs exactly one .csv side (csv <-> binary)");

    if (in_csv) {
        const cd::CMatrix samples = cd::read_iq_csv(in);
        cd::SignalDims dims;
        dims.n_antennas = n_antennas;
        dims.cycle_period = cycle_period;
        dims.n_blocks = n_blocks;
        dims.n_snapshots = n_snapshots;
        dims.validate();
        if (samples.rows() != dims.n_antennas ||
            samples.cols() != dims.total_samples()) {
            throw cd::LengthMismatch(
                "csv holds " + std::to_string(samples.rows()) + "x" +
                std::to_string(samples.cols()) + " samples but the given "
                "dimensions need " + std::to_string(dims.n_antennas) + "x" +
                std::to_string(dims.total_samples()));
        }
        const auto fmt = format == "c64" ? cd::IqFileHeader::Format::Complex64
                                         : cd::IqFileHeader::Format::Complex128;
        cd::write_iq_file(out, samples, dims, fmt);
        std::printf("wrote %s (%s, %ld samples per antenna)\n", out.c_str(),
                    format.c_str(), static_cast<long>(samples.cols()));
    } else {
        const auto [header, samples] = cd::read_iq_file(in);
        cd::write_iq_csv(out, samples);
        std::printf("wrote %s (L=%d, P=%d, N=%d, M=%d)\n", out.c_str(),
                    header.dims.n_antennas, header.dims.cycle_period,
                    header.dims.n_blocks, header.dims.n_snapshots);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "cyclodetect — multi-antenna cyclostationarity detection with a known "
        "cycle period in structured Gaussian noise"};
    app.require_subcommand(1);

    // ---- detect ----
    std::string det_file, det_case = "white-uncorrelated", det_stat = "glrt";
    double det_pfa = 0.01;
    CLI::App* detect =
        app.add_subcommand("detect", "Run one detection on a recorded file");
    detect->add_option("file", det_file, "input .iq sample file")->required();
    detect->add_option("--case", det_case,
                       "noise structure: colored-correlated, "
                       "colored-uncorrelated (I), white-correlated (II), "
                       "white-uncorrelated (III)");
    detect->add_option("--detector", det_stat,
                       "statistic: glrt, frob-sum, frob-avg");
    detect->add_option("--pfa", det_pfa, "target false-alarm probability")
        ->check(CLI::Range(1e-12, 1.0));

    // ---- experiment ----
    std::string exp_config, exp_out = ".";
    long exp_trials = -1;
    std::uint64_t exp_seed = 0;
    bool exp_seed_set = false;
    double exp_pfa = 0.0;
    int exp_threads = 0;
    CLI::App* experiment = app.add_subcommand(
        "experiment",
        "Run a Monte Carlo experiment from a JSON config.\n"
        "CSV columns: roc.csv detector,pfa,pd; auc.csv detector,auc (grid "
        "runs: label,lambda,mu,auc); cdf.csv detector,dof,score; sweep.csv "
        "detector,sigma,pd; pmd.csv detector,snr_db,pmd.\n"
        "Presets live under configs/.");
    experiment->add_option("config", exp_config, "JSON experiment config")
        ->required();
    experiment->add_option("--out", exp_out, "output directory for CSVs");
    experiment->add_option("--trials", exp_trials,
                           "override the config's trial count");
    experiment->add_option("--seed", exp_seed, "override the root seed")
        ->each([&](const std::string&) { exp_seed_set = true; });
    experiment->add_option("--pfa", exp_pfa,
                           "override the config's false-alarm target");
    experiment->add_option("--threads", exp_threads,
                           "worker threads (default: hardware, capped by "
                           "CYCLODETECT_THREADS)");

    // ---- characterize ----
    std::string chr_file;
    double chr_pfa = 0.01;
    CLI::App* characterize = app.add_subcommand(
        "characterize",
        "Classify the spatio-temporal structure of a noise-only recording");
    characterize->add_option("file", chr_file, "input .iq sample file")
        ->required();
    characterize->add_option("--pfa", chr_pfa,
                             "per-test false-alarm probability")
        ->check(CLI::Range(1e-12, 1.0));

    // ---- bench ----
    int b_l = 3, b_p = 2, b_m = 128, b_repeats = 5;
    std::vector<int> b_blocks;
    CLI::App* bench = app.add_subcommand(
        "bench", "Time the pipeline stages across a grid of block counts");
    bench->add_option("--antennas", b_l, "antenna count L");
    bench->add_option("--period", b_p, "cycle period P");
    bench->add_option("--snapshots", b_m, "snapshot count M");
    bench->add_option("--blocks", b_blocks,
                      "block counts N to sweep (default 8 16 32 64)");
    bench->add_option("--repeats", b_repeats, "repeats per point (best kept)");

    // ---- convert ----
    std::string cv_in, cv_out, cv_format = "c128";
    int cv_l = 1, cv_p = 1, cv_n = 1, cv_m = 1;
    CLI::App* convert = app.add_subcommand(
        "convert", "Convert between binary .iq files and CSV samples "
                   "(one row per time sample, re/im columns per antenna)");
    convert->add_option("input", cv_in, "input file")->required();
    convert->add_option("output", cv_out, "output file")->required();
    convert->add_option("--antennas", cv_l, "L (csv input only)");
    convert->add_option("--period", cv_p, "P (csv input only)");
    convert->add_option("--blocks", cv_n, "N (csv input only)");
    convert->add_option("--snapshots", cv_m, "M (csv input only)");
    convert->add_option("--format", cv_format, "binary sample format")
        ->check(CLI::IsMember({"c64", "c128"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*detect)
            return run_detect(det_file, det_case, det_stat, det_pfa);
        if (*experiment)
            return run_experiment_cmd(exp_config, exp_out, exp_trials,
                                      exp_seed_set, exp_seed, exp_pfa,
                                      exp_threads);
        if (*characterize) return run_characterize(chr_file, chr_pfa);
        if (*bench) return run_bench(b_l, b_p, b_m, b_blocks, b_repeats);
        if (*convert)
            return run_convert(cv_in, cv_out, cv_l, cv_p, cv_n, cv_m,
                               cv_format);
    } catch (const cd::NotPositiveDefinite& e) {
        std::fprintf(stderr,
                     "error: %s\nhint: the sample coherence needs at least "
                     "L*P snapshots per block; record more snapshots "
                     "(larger M) or reduce L or P.\n",
                     e.what());
        return kExitError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitError;
}
