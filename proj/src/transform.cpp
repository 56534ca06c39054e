#include "cyclodetect/transform.hpp"

#include "cyclodetect/errors.hpp"
#include "cyclodetect/fft.hpp"

namespace cyclodetect {

std::vector<CMatrix> segment(const CMatrix& x, const SignalDims& dims)
{
    dims.validate();
    const int np = dims.snapshot_len();
    if (x.rows() != dims.n_antennas || x.cols() != dims.total_samples()) {
        throw LengthMismatch("segment: observation must be L x (M*N*P)");
    }
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(dims.n_snapshots));
    for (int i = 0; i < dims.n_snapshots; ++i) {
        out.push_back(x.middleCols(static_cast<Eigen::Index>(i) * np, np));
    }
    return out;
}

CMatrix to_frequency_blocks(const CMatrix& snapshot, int n_antennas,
                            int cycle_period, int n_blocks)
{
    const int l = n_antennas, p = cycle_period, n = n_blocks;
    const int np = n * p;
    if (snapshot.rows() != l || snapshot.cols() != np) {
        throw LengthMismatch("to_frequency_blocks: snapshot must be L x (N*P)");
    }

    CMatrix out(l * p, n);
    CVector spectrum(np);
    for (int ant = 0; ant < l; ++ant) {
        spectrum = snapshot.row(ant).transpose();
        unitary_forward_fft_inplace(spectrum.data(), np);
        // Bin k*N + j lands in block j, sub-slot k.
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < p; ++k) {
                out(k * l + ant, j) = spectrum(k * n + j);
            }
        }
    }
    return out;
}

FrequencyBlockSet transform_observation(const CMatrix& x,
                                        const SignalDims& dims)
{
    const auto snapshots = segment(x, dims);
    const int lp = dims.block_dim();

    FrequencyBlockSet fbs;
    fbs.dims = dims;
    fbs.blocks.assign(static_cast<std::size_t>(dims.n_blocks),
                      CMatrix(lp, dims.n_snapshots));
    for (int i = 0; i < dims.n_snapshots; ++i) {
        const CMatrix z = to_frequency_blocks(snapshots[static_cast<std::size_t>(i)],
                                              dims.n_antennas,
                                              dims.cycle_period, dims.n_blocks);
        for (int j = 0; j < dims.n_blocks; ++j) {
            fbs.blocks[static_cast<std::size_t>(j)].col(i) = z.col(j);
        }
    }
    return fbs;
}

} // namespace cyclodetect
