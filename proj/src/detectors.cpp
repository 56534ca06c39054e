#include "cyclodetect/detectors.hpp"

#include <cmath>

#include "cyclodetect/errors.hpp"
#include "cyclodetect/stats.hpp"

namespace cyclodetect {

void DetectorKind::validate() const
{
    if (stat == Stat::Combined) {
        if (!(lambda >= 0.0) || !(mu >= 0.0) || !std::isfinite(lambda)
            || !std::isfinite(mu)) {
            throw InvalidSpec(
                "DetectorKind: combined weights must be finite and >= 0");
        }
    }
}

const char* to_string(DetectorKind::Stat s)
{
    switch (s) {
    case DetectorKind::Stat::Glrt: return "glrt";
    case DetectorKind::Stat::FrobeniusSum: return "frob-sum";
    case DetectorKind::Stat::FrobeniusAvg: return "frob-avg";
    case DetectorKind::Stat::Combined: return "combined";
    }
    return "?";
}

StatPair glrt_stat(const CoherenceBlocks& cb, int n_snapshots)
{
    double raw = 0.0;
    for (const auto& c : cb.blocks) {
        raw += logdet(c);
    }
    return {raw, -2.0 * n_snapshots * raw};
}

StatPair frob_sum_stat(const CoherenceBlocks& cb, int n_snapshots)
{
    double raw = 0.0;
    for (const auto& c : cb.blocks) {
        raw += frob_sq(c);
    }
    const double center = static_cast<double>(cb.dims.n_antennas)
                          * cb.dims.n_blocks * cb.dims.cycle_period;
    return {raw, n_snapshots * (raw - center)};
}

StatPair frob_avg_stat(const CoherenceBlocks& cb, int n_snapshots)
{
    if (!is_white(cb.structure)) {
        throw WrongCase("frob_avg_stat: the averaged statistic needs a "
                        "white-noise structure case");
    }
    const double raw = frob_sq(cb.c_av);
    const double center = static_cast<double>(cb.dims.block_dim());
    return {raw,
            static_cast<double>(n_snapshots) * cb.dims.n_blocks
                * (raw - center)};
}

double combined_stat(const CoherenceBlocks& cb, double lambda, double mu)
{
    DetectorKind kind;
    kind.stat = DetectorKind::Stat::Combined;
    kind.lambda = lambda;
    kind.mu = mu;
    kind.validate();

    double frob_blocks = 0.0;
    for (const auto& c : cb.blocks) {
        frob_blocks += frob_sq(c);
    }
    double frob_bars = 0.0;
    for (const auto& b : cb.bar_blocks) {
        frob_bars += frob_sq(b);
    }
    return frob_blocks + lambda * cb.dims.cycle_period * frob_bars
           + mu * cb.dims.n_blocks * frob_sq(cb.c_av);
}

DetectionReport decide(double normalized, int dof, double pfa)
{
    if (!(pfa > 0.0) || !(pfa < 1.0)) {
        throw InvalidProbability("decide: pfa must lie in (0, 1)");
    }
    if (dof < 1) {
        throw InvalidSpec("decide: dof must be >= 1");
    }
    DetectionReport report;
    report.statistic = normalized;
    report.normalized = normalized;
    report.dof = dof;
    report.threshold = chi2_quantile(1.0 - pfa, dof);
    report.p_value = 1.0 - chi2_cdf(normalized, dof);
    report.reject_null = normalized > report.threshold;
    return report;
}

double noise_temporal_glr(const BlockCovariance& cov)
{
    const int p = cov.dims.cycle_period;
    const int n = cov.dims.n_blocks;
    const int l = cov.dims.n_antennas;
    const int np = n * p;

    CMatrix avg = CMatrix::Zero(l, l);
    double sum_logdet = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < p; ++k) {
            const HermitianMatrix bin(cov.bin(j, k));
            sum_logdet += logdet(bin);
            avg += bin.mat();
        }
    }
    avg /= static_cast<double>(np);
    return sum_logdet - np * logdet(HermitianMatrix(avg));
}

double noise_spatial_glr(const BlockCovariance& cov)
{
    const int p = cov.dims.cycle_period;
    const int n = cov.dims.n_blocks;

    double glr = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < p; ++k) {
            const HermitianMatrix bin(cov.bin(j, k));
            double diag_logdet = 0.0;
            for (int i = 0; i < bin.dim(); ++i) {
                const double d = bin(i, i).real();
                if (d <= 0.0) {
                    throw NotPositiveDefinite(
                        "noise_spatial_glr: non-positive diagonal entry");
                }
                diag_logdet += std::log(d);
            }
            glr += logdet(bin) - diag_logdet;
        }
    }
    return glr;
}

} // namespace cyclodetect
