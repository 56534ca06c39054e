#include "cyclodetect/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>

#include "cyclodetect/detectors.hpp"
#include "cyclodetect/estimation.hpp"
#include "cyclodetect/rng.hpp"
#include "cyclodetect/transform.hpp"

namespace cyclodetect {

namespace {

volatile double g_sink = 0.0; // defeats dead-code elimination of timed work

template <typename Fn>
double time_best_of(int repeats, Fn&& fn) {
    using clock = std::chrono::steady_clock;
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = clock::now();
        g_sink = g_sink + fn();
        const auto t1 = clock::now();
        const double dt = std::chrono::duration<double>(t1 - t0).count();
        if (dt < best) best = dt;
    }
    return best;
}

CMatrix white_observation(const SignalDims& dims, std::uint64_t seed) {
    Rng rng(seed);
    CMatrix x(dims.n_antennas, dims.total_samples());
    for (long i = 0; i < x.size(); ++i) x.data()[i] = rng.cgaussian();
    return x;
}

} // namespace

StageTiming bench_stages(const SignalDims& dims, int repeats) {
    dims.validate();
    if (repeats < 1) repeats = 1;

    StageTiming out;
    out.dims = dims;

    const CMatrix x = white_observation(dims, 0xb3a5u);

    out.transform = time_best_of(repeats, [&] {
        const FrequencyBlockSet fb = transform_observation(x, dims);
        return fb.blocks.front()(0, 0).real();
    });

    const FrequencyBlockSet fb = transform_observation(x, dims);
    out.covariance = time_best_of(repeats, [&] {
        const BlockCovariance s = sample_block_covariance(fb);
        return s.blocks.front()(0, 0).real();
    });

    const BlockCovariance s = sample_block_covariance(fb);
    const NullCovarianceEstimate s0_corr =
        s0_hat(s, NoiseStructureCase::WhiteCorrelated);
    const NullCovarianceEstimate s0_unc =
        s0_hat(s, NoiseStructureCase::WhiteUncorrelated);

    out.coherence_correlated = time_best_of(repeats, [&] {
        const CoherenceBlocks c = coherence(s, s0_corr);
        return c.blocks.front()(0, 0).real();
    });
    out.coherence_uncorrelated = time_best_of(repeats, [&] {
        const CoherenceBlocks c = coherence(s, s0_unc);
        return c.blocks.front()(0, 0).real();
    });

    const CoherenceBlocks c = coherence(s, s0_corr);
    out.glrt = time_best_of(
        repeats, [&] { return glrt_stat(c, dims.n_snapshots).raw; });

    return out;
}

double fit_exponent(const std::vector<double>& x,
                    const std::vector<double>& t) {
    const std::size_t n = x.size();
    if (n < 2 || t.size() != n) return 0.0;
    double sx = 0.0, st = 0.0, sxx = 0.0, sxt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]);
        const double lt = std::log(t[i]);
        sx += lx;
        st += lt;
        sxx += lx * lx;
        sxt += lx * lt;
    }
    const double denom = n * sxx - sx * sx;
    return (n * sxt - sx * st) / denom;
}

std::vector<StageTiming> bench_over_blocks(int n_antennas, int cycle_period,
                                           int n_snapshots,
                                           const std::vector<int>& n_grid,
                                           int repeats) {
    std::vector<StageTiming> rows;
    rows.reserve(n_grid.size());
    for (int n : n_grid) {
        SignalDims dims;
        dims.n_antennas = n_antennas;
        dims.cycle_period = cycle_period;
        dims.n_blocks = n;
        dims.n_snapshots = n_snapshots;
        rows.push_back(bench_stages(dims, repeats));
    }
    return rows;
}

std::string format_bench_table(const std::vector<StageTiming>& rows) {
    std::string out;
    char line[256];
    std::snprintf(line, sizeof(line), "%4s %3s %3s %4s %12s %12s %12s %12s %12s\n",
                  "L", "P", "N", "M", "transform", "covariance", "coh-corr",
                  "coh-unc", "glrt");
    out += line;
    for (const StageTiming& r : rows) {
        std::snprintf(line, sizeof(line),
                      "%4d %3d %3d %4d %12.3e %12.3e %12.3e %12.3e %12.3e\n",
                      r.dims.n_antennas, r.dims.cycle_period, r.dims.n_blocks,
                      r.dims.n_snapshots, r.transform, r.covariance,
                      r.coherence_correlated, r.coherence_uncorrelated, r.glrt);
        out += line;
    }
    return out;
}

} // namespace cyclodetect
