#pragma once

#include <string>
#include <vector>

#include "cyclodetect/types.hpp"

namespace cyclodetect {

// Wall-clock timing of each pipeline stage at one problem size, in seconds.
// Stages follow the FLOP model the implementation is shaped around:
// transform ~ L M NP log NP, covariance ~ M N (LP)^2, coherence ~ N L^3 P^2
// for the correlated cases vs N L^2 P^2 for the uncorrelated ones, and the
// per-block log-determinants ~ N (LP)^3.
struct StageTiming {
    SignalDims dims;
    double transform = 0.0;
    double covariance = 0.0;
    double coherence_correlated = 0.0;   // white-correlated normalization
    double coherence_uncorrelated = 0.0; // white-uncorrelated normalization
    double glrt = 0.0;
};

// Time all stages on synthetic white-noise data (fixed seed). `repeats`
// repeats each stage and keeps the fastest time, which strips scheduler
// noise from the small sizes.
StageTiming bench_stages(const SignalDims& dims, int repeats);

// Least-squares slope of log(time) vs log(x): the fitted scaling exponent.
double fit_exponent(const std::vector<double>& x,
                    const std::vector<double>& t);

// Sweep N over `n_grid` at fixed L, P, M; returns per-size timings.
std::vector<StageTiming> bench_over_blocks(int n_antennas, int cycle_period,
                                           int n_snapshots,
                                           const std::vector<int>& n_grid,
                                           int repeats);

std::string format_bench_table(const std::vector<StageTiming>& rows);

} // namespace cyclodetect
