#pragma once

#include <string>

#include "cyclodetect/estimation.hpp"
#include "cyclodetect/types.hpp"

namespace cyclodetect {

// Which statistic to evaluate over the coherence blocks. The same formula
// covers several named detectors depending on the NoiseStructureCase the
// coherence was built with; the pairing lives in the experiment configs.
struct DetectorKind {
    enum class Stat { Glrt, FrobeniusSum, FrobeniusAvg, Combined };

    Stat stat = Stat::FrobeniusAvg;
    double lambda = 0.0; // Combined only
    double mu = 0.0;     // Combined only

    void validate() const; // Combined requires finite non-negative weights
};

const char* to_string(DetectorKind::Stat s);

struct StatPair {
    double raw = 0.0;
    double normalized = 0.0; // the chi-squared-referenced quantity
};

// Log-determinant statistic: raw = sum_j logdet(C_j) <= 0,
// normalized = -2 M raw (right-tailed).
StatPair glrt_stat(const CoherenceBlocks& cb, int n_snapshots);

// Frobenius statistic: raw = sum_j ||C_j||_F^2, normalized = M (raw - LNP).
StatPair frob_sum_stat(const CoherenceBlocks& cb, int n_snapshots);

// Averaged-coherence statistic: raw = ||C_av||_F^2,
// normalized = M N (raw - LP). White cases only.
StatPair frob_avg_stat(const CoherenceBlocks& cb, int n_snapshots);

// sum_j ||C_j||^2 + lambda P sum_j ||bar C_j||^2 + mu N ||C_av||^2.
// No chi-squared reference exists, so only the raw value is defined; the
// weights are free sweep parameters.
double combined_stat(const CoherenceBlocks& cb, double lambda, double mu);

struct DetectionReport {
    double statistic = 0.0;  // raw value
    double normalized = 0.0;
    int dof = 0;
    double threshold = 0.0;  // chi-squared upper quantile at the target pfa
    double p_value = 1.0;
    bool reject_null = false; // true = cyclostationary signal present
};

// Threshold the normalized statistic against its asymptotic chi-squared null.
DetectionReport decide(double normalized, int dof, double pfa);

// Noise-characterization log-GLRs over the NP spatial bins of a noise-only
// covariance. Both are <= 0, with equality exactly on their null structure;
// reject (declare colored / correlated) for large -2M * value.
double noise_temporal_glr(const BlockCovariance& cov); // flat-spectrum null
double noise_spatial_glr(const BlockCovariance& cov);  // diagonal null

} // namespace cyclodetect
