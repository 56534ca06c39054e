#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyclodetect/detectors.hpp"
#include "cyclodetect/signal_gen.hpp"
#include "cyclodetect/types.hpp"

namespace cyclodetect {

// One detector under test: a statistic plus the noise-structure case its
// coherence normalization assumes.
struct DetectorSetup {
    DetectorKind kind;
    NoiseStructureCase structure = NoiseStructureCase::WhiteUncorrelated;
    std::string label; // CSV/report label; defaults to "<stat>@<case>"

    std::string effective_label() const;
    // Reference dof of the normalized statistic (throws for Combined, which
    // has no chi-squared null).
    int dof(const SignalDims& dims) const;
};

struct ExperimentConfig {
    SignalDims dims;
    std::vector<double> snr_db = {-10.0};
    int trials = 2000;
    double pfa = 0.01;
    SignalSpec signal;
    ChannelSpec channel;
    NoiseSpec noise;
    std::vector<DetectorSetup> detectors;
    std::uint64_t root_seed = 1;
    // One length-MNP record segmented into M snapshots (channel state carries
    // across segments) instead of M independently generated snapshots.
    bool single_long_observation = false;
    int threads = 0; // 0 = hardware, capped by CYCLODETECT_THREADS

    void validate() const;
};

// Normalized statistics per detector and trial (Combined records its raw
// value). H0 and H1 observations share the noise realization per trial:
// common random numbers, a variance-reduction choice.
struct TrialScores {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> null_scores; // [detector][trial]
    std::vector<std::vector<double>> alt_scores;  // [detector][trial]
};

// Run the two-hypothesis experiment at a single SNR (cfg.snr_db must hold
// exactly one value).
TrialScores run_experiment(const ExperimentConfig& cfg);

// H0-only run: normalized statistics with their chi-squared references.
struct NullCdfResult {
    std::vector<std::string> labels;
    std::vector<int> dof;
    std::vector<std::vector<double>> samples; // [detector][trial]
    std::vector<double> ks;                   // KS distance to chi2(dof)
};

NullCdfResult null_cdf_experiment(const ExperimentConfig& cfg);

// AUC of the combined statistic over a (lambda, mu) grid, all grid points
// sharing the same trials (the coherence reductions are computed once per
// trial and reweighted). The log-GLR AUC on the same trials is reported for
// reference.
struct AucGridResult {
    std::vector<double> lambda_grid;
    std::vector<double> mu_grid;
    std::vector<std::vector<double>> auc; // [lambda][mu]
    double glrt_auc = 0.0;
};

AucGridResult auc_grid(const ExperimentConfig& cfg,
                       const std::vector<double>& lambda_grid,
                       const std::vector<double>& mu_grid);

// Detection probability at the configured false-alarm rate (empirical
// threshold from the null scores) as the noise temporal-correlation decay
// sigma sweeps; cfg's noise keeps its spatial part.
struct SweepResult {
    std::vector<double> sigma;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> pd; // [detector][sigma]
};

SweepResult robustness_sweep(const ExperimentConfig& cfg,
                             const std::vector<double>& sigma_list);

// Missed-detection probability across cfg.snr_db, empirical thresholds from
// the (SNR-independent) null scores; one generation pass shared by all SNRs.
struct PmdVsSnrResult {
    std::vector<double> snr_db;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> pmd; // [detector][snr]
};

PmdVsSnrResult pmd_vs_snr(const ExperimentConfig& cfg);

// Threads actually used for a config (resolves the env cap).
int resolve_thread_count(const ExperimentConfig& cfg);

} // namespace cyclodetect
