#pragma once

#include <vector>

#include "cyclodetect/errors.hpp"
#include "cyclodetect/types.hpp"

namespace cyclodetect {

// --- chi-squared distribution ------------------------------------------------

// Lower CDF of the chi-squared distribution (regularized incomplete gamma
// P(dof/2, x/2)); absolute error < 1e-10 up to dof = 1e6.
double chi2_cdf(double x, int dof);

// Inverse of chi2_cdf in p: |chi2_cdf(result, dof) - p| < 1e-9.
double chi2_quantile(double p, int dof);

// --- degrees-of-freedom catalog ---------------------------------------------

// Asymptotic null dof of the log-GLR / Frobenius-sum statistics; also the
// reference for the per-block GLRT threshold under each structure case.
int glr_dof(NoiseStructureCase c, int n_antennas, int cycle_period,
            int n_blocks);

// Null dof of the averaged-coherence statistic; only defined for the
// white-noise cases. Throws WrongCase otherwise.
int avg_stat_dof(NoiseStructureCase c, int n_antennas, int cycle_period);

// Dof of the noise-characterization GLRs, by real-parameter counting
// (an L x L Hermitian matrix carries L^2 real parameters). These two are
// derived values, not published ones; CLI output labels them as such.
int temporal_noise_dof(int n_antennas, int n_bins);   // L^2 (NP - 1)
int spatial_noise_dof(int n_antennas, int n_bins);    // NP * L(L-1)

// --- empirical-performance utilities ----------------------------------------

struct RocCurve {
    std::vector<double> pfa; // ascending, starts at 0, ends at 1
    std::vector<double> pd;
    double auc = 0.0;
};

// Empirical ROC by threshold sweep over the pooled score set (every distinct
// score a threshold, right-tailed decisions); AUC by trapezoid, which under
// this sweep equals the Mann-Whitney statistic with midrank tie handling.
RocCurve roc_and_auc(const std::vector<double>& null_scores,
                     const std::vector<double>& alt_scores);

// AUCs of two detectors evaluated on the same trials, with the standard error
// of their difference from the DeLong structural components. The pairing by
// trial index is what makes small AUC gaps resolvable.
struct PairedAucDiff {
    double auc_a = 0.0;
    double auc_b = 0.0;
    double diff = 0.0; // auc_a - auc_b
    double se = 0.0;   // standard error of diff
};

PairedAucDiff paired_auc_diff(const std::vector<double>& null_a,
                              const std::vector<double>& alt_a,
                              const std::vector<double>& null_b,
                              const std::vector<double>& alt_b);

// Sup-norm distance between the empirical CDF of `samples` and chi2_cdf(., dof).
double ks_distance(std::vector<double> samples, int dof);

// Score of the k-th exceedance: largest threshold t such that at most
// floor(pfa * n) null scores are strictly above t.
double empirical_threshold(std::vector<double> null_scores, double pfa);

} // namespace cyclodetect
