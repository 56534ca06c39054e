#include "cyclodetect/estimation.hpp"

#include <cmath>
#include <string>

#include "cyclodetect/errors.hpp"

namespace cyclodetect {

namespace {

// Per-bin diagonal inverse square root for the uncorrelated cases, with the
// same relative conditioning floor the eigendecomposition path applies.
Eigen::VectorXd diag_inv_sqrt(const HermitianMatrix& bin)
{
    const Eigen::VectorXd d = bin.mat().diagonal().real();
    const double d_max = d.maxCoeff();
    const double floor = bin.dim() * 1e-12 * d_max;
    if (d.minCoeff() <= 0.0 || d.minCoeff() <= floor) {
        throw NotPositiveDefinite(
            "coherence: null-estimate diagonal entry below conditioning floor");
    }
    return d.array().rsqrt();
}

} // namespace

CMatrix BlockCovariance::bin(int j, int k) const
{
    const int l = dims.n_antennas;
    return blocks[static_cast<std::size_t>(j)].mat().block(k * l, k * l, l, l);
}

const HermitianMatrix& NullCovarianceEstimate::bin(int j, int k) const
{
    if (shared_across_bins) {
        return bins.blocks[0];
    }
    return bins.blocks[static_cast<std::size_t>(j * dims.cycle_period + k)];
}

BlockCovariance sample_block_covariance(const FrequencyBlockSet& fbs)
{
    const SignalDims& dims = fbs.dims;
    dims.validate();
    const double inv_m = 1.0 / dims.n_snapshots;

    BlockCovariance cov;
    cov.dims = dims;
    cov.blocks.reserve(fbs.blocks.size());
    for (const CMatrix& z : fbs.blocks) {
        CMatrix s = CMatrix::Zero(z.rows(), z.rows());
        s.selfadjointView<Eigen::Lower>().rankUpdate(z, inv_m);
        s.triangularView<Eigen::StrictlyUpper>() =
            s.adjoint().triangularView<Eigen::StrictlyUpper>();
        cov.blocks.emplace_back(std::move(s));
    }
    return cov;
}

NullCovarianceEstimate s0_hat(const BlockCovariance& cov,
                              NoiseStructureCase structure)
{
    const SignalDims& dims = cov.dims;
    const int l = dims.n_antennas;
    const int p = dims.cycle_period;
    const int n = dims.n_blocks;

    NullCovarianceEstimate est;
    est.structure = structure;
    est.dims = dims;
    est.bins.block_dim = l;
    est.shared_across_bins = is_white(structure);

    if (est.shared_across_bins) {
        // Average the NP diagonal L x L sub-blocks into one shared estimate.
        CMatrix avg = CMatrix::Zero(l, l);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < p; ++k) {
                avg += cov.bin(j, k);
            }
        }
        avg /= static_cast<double>(n) * p;
        if (is_uncorrelated(structure)) {
            const CVector d = avg.diagonal();
            avg = d.asDiagonal();
        }
        est.bins.blocks.emplace_back(std::move(avg));
    } else {
        est.bins.blocks.reserve(static_cast<std::size_t>(n) * p);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < p; ++k) {
                CMatrix b = cov.bin(j, k);
                if (is_uncorrelated(structure)) {
                    const CVector d = b.diagonal();
                    b = d.asDiagonal();
                }
                est.bins.blocks.emplace_back(std::move(b));
            }
        }
    }
    est.bins.validate();
    return est;
}

CoherenceBlocks coherence(const BlockCovariance& cov,
                          const NullCovarianceEstimate& s0)
{
    const SignalDims& dims = cov.dims;
    const int l = dims.n_antennas;
    const int p = dims.cycle_period;
    const int n = dims.n_blocks;
    const int lp = dims.block_dim();

    if (dims.n_snapshots < lp) {
        throw NotPositiveDefinite(
            "coherence: sample coherence needs at least LP snapshots (M = "
            + std::to_string(dims.n_snapshots) + ", LP = " + std::to_string(lp)
            + ")");
    }

    CoherenceBlocks cb;
    cb.dims = dims;
    cb.structure = s0.structure;
    cb.blocks.reserve(static_cast<std::size_t>(n));

    const bool uncorrelated = is_uncorrelated(s0.structure);

    // Inverse square roots of the null bins. White cases share one bin;
    // uncorrelated cases reduce to diagonal scaling.
    std::vector<HermitianMatrix> shared_r;
    Eigen::VectorXd shared_d;
    if (s0.shared_across_bins) {
        if (uncorrelated) {
            shared_d = diag_inv_sqrt(s0.bin(0, 0));
        } else {
            shared_r.push_back(inv_sqrt(s0.bin(0, 0)));
        }
    }

    CMatrix avg = CMatrix::Zero(lp, lp);
    for (int j = 0; j < n; ++j) {
        const CMatrix& s = cov.blocks[static_cast<std::size_t>(j)].mat();
        CMatrix c(lp, lp);
        if (uncorrelated) {
            Eigen::VectorXd scale(lp);
            for (int k = 0; k < p; ++k) {
                scale.segment(k * l, l) = s0.shared_across_bins
                                              ? shared_d
                                              : diag_inv_sqrt(s0.bin(j, k));
            }
            c = scale.asDiagonal() * s * scale.asDiagonal();
        } else {
            // Sub-block products keep the cost at the block-diagonal level
            // (L^3 per sub-block) instead of a dense LP^3 multiply.
            std::vector<const CMatrix*> r_of_k(static_cast<std::size_t>(p));
            std::vector<HermitianMatrix> local_r;
            if (s0.shared_across_bins) {
                for (int k = 0; k < p; ++k) {
                    r_of_k[static_cast<std::size_t>(k)] = &shared_r[0].mat();
                }
            } else {
                local_r.reserve(static_cast<std::size_t>(p));
                for (int k = 0; k < p; ++k) {
                    local_r.push_back(inv_sqrt(s0.bin(j, k)));
                }
                for (int k = 0; k < p; ++k) {
                    r_of_k[static_cast<std::size_t>(k)] =
                        &local_r[static_cast<std::size_t>(k)].mat();
                }
            }
            for (int k = 0; k < p; ++k) {
                for (int kk = 0; kk < p; ++kk) {
                    c.block(k * l, kk * l, l, l) =
                        (*r_of_k[static_cast<std::size_t>(k)])
                        * s.block(k * l, kk * l, l, l)
                        * (*r_of_k[static_cast<std::size_t>(kk)]);
                }
            }
        }
        cb.blocks.emplace_back(std::move(c));
        avg += cb.blocks.back().mat();
    }

    cb.c_av = HermitianMatrix(avg / static_cast<double>(n));
    cb.bar_blocks.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        CMatrix bar = CMatrix::Zero(l, l);
        for (int k = 0; k < p; ++k) {
            bar += cb.blocks[static_cast<std::size_t>(j)].mat().block(k * l,
                                                                      k * l, l,
                                                                      l);
        }
        cb.bar_blocks.emplace_back(bar / static_cast<double>(p));
    }
    return cb;
}

double CyclicCoherenceTable::total() const
{
    double acc = 0.0;
    for (std::size_t c = 0; c < frob_sq.size(); ++c) {
        const double mult = (c == 0) ? 1.0 : 2.0;
        for (double v : frob_sq[c]) {
            acc += mult * v;
        }
    }
    return acc;
}

CyclicCoherenceTable cyclic_coherence_diagnostic(const CoherenceBlocks& cb)
{
    if (!is_white(cb.structure)) {
        throw WrongCase("cyclic_coherence_diagnostic: requires a white-noise "
                        "structure case");
    }
    const int l = cb.dims.n_antennas;
    const int p = cb.dims.cycle_period;
    const int n = cb.dims.n_blocks;

    CyclicCoherenceTable table;
    table.n_antennas = l;
    table.frob_sq.resize(static_cast<std::size_t>(p));
    for (int c = 0; c < p; ++c) {
        table.frob_sq[static_cast<std::size_t>(c)].assign(
            static_cast<std::size_t>((p - c) * n), 0.0);
    }
    for (int j = 0; j < n; ++j) {
        const CMatrix& cj = cb.blocks[static_cast<std::size_t>(j)].mat();
        for (int kappa = 0; kappa < p; ++kappa) {
            for (int k = kappa; k < p; ++k) {
                const int c = k - kappa;
                const int b = kappa * n + j;
                table.frob_sq[static_cast<std::size_t>(c)]
                             [static_cast<std::size_t>(b)] =
                    cj.block(k * l, kappa * l, l, l).squaredNorm();
            }
        }
    }
    return table;
}

} // namespace cyclodetect
