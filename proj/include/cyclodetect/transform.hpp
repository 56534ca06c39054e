#pragma once

#include <vector>

#include "cyclodetect/types.hpp"

namespace cyclodetect {

// Frequency-domain view of an observation: for every snapshot, the NP DFT
// bins regrouped into N blocks of dimension LP. Block j collects bins
// {k*N + j : k = 0..P-1}; within a block, sub-slot k holds the L antenna
// values of bin k*N + j at offset k*L. Under the cyclostationary model the
// covariance of these blocks is (asymptotically) block-diagonal in j.
//
// Storage: blocks[j] is an LP x M matrix whose column i is snapshot i's
// j-th block, which is the layout the covariance accumulation wants.
struct FrequencyBlockSet {
    SignalDims dims;
    std::vector<CMatrix> blocks;
};

// Split an L x (M*N*P) observation into M contiguous snapshots of length NP.
std::vector<CMatrix> segment(const CMatrix& x, const SignalDims& dims);

// One snapshot (L x NP) -> LP x N matrix; column j is block j. Per antenna a
// unitary forward DFT followed by the bin regrouping above.
CMatrix to_frequency_blocks(const CMatrix& snapshot, int n_antennas,
                            int cycle_period, int n_blocks);

// Full observation (L x MNP) -> FrequencyBlockSet.
FrequencyBlockSet transform_observation(const CMatrix& x,
                                        const SignalDims& dims);

} // namespace cyclodetect
