#pragma once

#include <vector>

#include "cyclodetect/matrix_core.hpp"
#include "cyclodetect/transform.hpp"
#include "cyclodetect/types.hpp"

namespace cyclodetect {

// The N diagonal LP x LP blocks of the frequency-domain sample covariance.
// Off-diagonal blocks are never formed: no statistic needs them.
struct BlockCovariance {
    SignalDims dims;
    std::vector<HermitianMatrix> blocks; // size N, each LP x LP

    // L x L diagonal sub-block at block j, sub-slot k (frequency bin kN + j).
    CMatrix bin(int j, int k) const;
};

// Structure-constrained estimate of the null (noise-only) covariance, stored
// as L x L bins. White cases keep a single bin shared by all NP positions;
// uncorrelated cases keep only diagonals (stored as diagonal matrices).
struct NullCovarianceEstimate {
    NoiseStructureCase structure = NoiseStructureCase::WhiteUncorrelated;
    SignalDims dims;
    BlockDiagonalMatrix bins;       // N*P blocks (colored) or 1 block (white)
    bool shared_across_bins = false;

    const HermitianMatrix& bin(int j, int k) const;
};

// Normalized covariance blocks C_j = R_j S_j R_j together with their two
// reductions: c_av, the average over blocks, and bar_blocks[j], the average
// of the P diagonal L x L sub-blocks of C_j.
struct CoherenceBlocks {
    SignalDims dims;
    NoiseStructureCase structure = NoiseStructureCase::WhiteUncorrelated;
    std::vector<HermitianMatrix> blocks;     // N, each LP x LP
    HermitianMatrix c_av;                    // LP x LP
    std::vector<HermitianMatrix> bar_blocks; // N, each L x L
};

BlockCovariance sample_block_covariance(const FrequencyBlockSet& fbs);

NullCovarianceEstimate s0_hat(const BlockCovariance& cov,
                              NoiseStructureCase structure);

// C_j = R_j S_j R_j with R_j the block-diagonal inverse square root of the
// null estimate restricted to block j. Requires M >= LP (sample coherences
// are singular below that floor) and a positive definite null estimate.
CoherenceBlocks coherence(const BlockCovariance& cov,
                          const NullCovarianceEstimate& s0);

// View of the white-case coherence blocks as samples of the cyclic spectral
// coherence: sub-block (k, kappa) of C_j is the cycle-frequency c = k - kappa
// sample at bin b = kappa*N + j. frob_sq[c][b] holds its squared Frobenius
// norm for c = 0..P-1, b = 0..(P-c)*N-1. Summing the c = 0 table plus twice
// the c >= 1 tables reproduces sum_j ||C_j||_F^2 exactly.
struct CyclicCoherenceTable {
    int n_antennas = 0;
    std::vector<std::vector<double>> frob_sq;

    double total() const;
};

CyclicCoherenceTable cyclic_coherence_diagnostic(const CoherenceBlocks& cb);

} // namespace cyclodetect
