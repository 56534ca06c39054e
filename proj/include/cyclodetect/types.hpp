#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cyclodetect {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// The four structural hypotheses for the noise covariance: temporal coloring
// (arbitrary PSD vs. flat) crossed with spatial correlation (arbitrary
// positive definite vs. diagonal).
enum class NoiseStructureCase {
    ColoredCorrelated,   // general: per-bin spatial covariance
    ColoredUncorrelated, // per-bin diagonal
    WhiteCorrelated,     // one spatial covariance shared by all bins
    WhiteUncorrelated,   // one diagonal shared by all bins
};

const char* to_string(NoiseStructureCase c);
bool is_white(NoiseStructureCase c);
bool is_uncorrelated(NoiseStructureCase c);

// Problem dimensions shared across the pipeline.
//   n_antennas   L   parallel time series
//   cycle_period P   known period of the autocorrelation
//   n_blocks     N   frequency blocks per snapshot (frequency resolution)
//   n_snapshots  M   segments averaged into the sample covariance
struct SignalDims {
    int n_antennas = 1;
    int cycle_period = 1;
    int n_blocks = 1;
    int n_snapshots = 1;

    int block_dim() const { return n_antennas * cycle_period; }       // LP
    int snapshot_len() const { return n_blocks * cycle_period; }      // NP
    long total_samples() const
    {
        return static_cast<long>(n_snapshots) * snapshot_len();       // MNP
    }

    void validate() const; // throws InvalidSpec on non-positive entries
};

} // namespace cyclodetect
