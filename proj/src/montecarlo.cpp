#include "cyclodetect/montecarlo.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "cyclodetect/errors.hpp"
#include "cyclodetect/rng.hpp"
#include "cyclodetect/stats.hpp"
#include "cyclodetect/transform.hpp"

namespace cyclodetect {

namespace {

// Seed-stream roles per trial; generators never share a stream.
enum : std::uint64_t { kChannelStream = 0, kSignalStream = 1, kNoiseStream = 2 };

void run_trials_parallel(int trials, int threads,
                         const std::function<void(int)>& body)
{
    threads = std::max(1, std::min(threads, trials));
    if (threads == 1) {
        for (int t = 0; t < trials; ++t) {
            body(t);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= trials) {
                return;
            }
            try {
                body(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

// Channel warm-up samples to discard, rounded up to whole cycle periods so
// the segment grid stays phase-aligned with the symbol clock.
long burn_in_samples(const ExperimentConfig& cfg)
{
    const int p = cfg.dims.cycle_period;
    const long transient = cfg.channel.n_taps - 1;
    return (transient + p - 1) / p * p;
}

// Post-channel signal (L x MNP) for one trial. Noise is generated separately.
CMatrix gen_trial_signal(const ExperimentConfig& cfg, int trial)
{
    const long np = cfg.dims.snapshot_len();
    const long total = cfg.dims.total_samples();
    const long burn = burn_in_samples(cfg);
    const std::uint64_t ch_seed =
        derive_seed(cfg.root_seed, {static_cast<std::uint64_t>(trial),
                                    kChannelStream});

    if (cfg.single_long_observation) {
        const CVector sig = gen_signal(
            cfg.signal, total + burn,
            derive_seed(cfg.root_seed,
                        {static_cast<std::uint64_t>(trial), kSignalStream, 0}));
        const CMatrix faded = apply_channel(sig, cfg.channel, ch_seed);
        return faded.rightCols(total);
    }

    // Independent snapshots through the same channel realization.
    CMatrix out(cfg.dims.n_antennas, total);
    for (int s = 0; s < cfg.dims.n_snapshots; ++s) {
        const CVector sig = gen_signal(
            cfg.signal, np + burn,
            derive_seed(cfg.root_seed, {static_cast<std::uint64_t>(trial),
                                        kSignalStream,
                                        static_cast<std::uint64_t>(s)}));
        const CMatrix faded = apply_channel(sig, cfg.channel, ch_seed);
        out.middleCols(static_cast<Eigen::Index>(s) * np, np) =
            faded.rightCols(np);
    }
    return out;
}

CMatrix gen_trial_noise(const ExperimentConfig& cfg, int trial)
{
    const long np = cfg.dims.snapshot_len();
    const long total = cfg.dims.total_samples();
    if (cfg.single_long_observation) {
        return gen_noise(cfg.noise, cfg.dims.n_antennas, total,
                         derive_seed(cfg.root_seed,
                                     {static_cast<std::uint64_t>(trial),
                                      kNoiseStream, 0}));
    }
    CMatrix out(cfg.dims.n_antennas, total);
    for (int s = 0; s < cfg.dims.n_snapshots; ++s) {
        out.middleCols(static_cast<Eigen::Index>(s) * np, np) =
            gen_noise(cfg.noise, cfg.dims.n_antennas, np,
                      derive_seed(cfg.root_seed,
                                  {static_cast<std::uint64_t>(trial),
                                   kNoiseStream,
                                   static_cast<std::uint64_t>(s)}));
    }
    return out;
}

// Coherence blocks per distinct structure case, built once and shared by all
// detectors that use that case.
std::map<NoiseStructureCase, CoherenceBlocks>
coherences_for(const BlockCovariance& cov,
               const std::vector<DetectorSetup>& detectors)
{
    std::map<NoiseStructureCase, CoherenceBlocks> out;
    for (const auto& det : detectors) {
        if (!out.count(det.structure)) {
            out.emplace(det.structure,
                        coherence(cov, s0_hat(cov, det.structure)));
        }
    }
    return out;
}

double detector_score(const DetectorSetup& det, const CoherenceBlocks& cb,
                      int n_snapshots)
{
    switch (det.kind.stat) {
    case DetectorKind::Stat::Glrt:
        return glrt_stat(cb, n_snapshots).normalized;
    case DetectorKind::Stat::FrobeniusSum:
        return frob_sum_stat(cb, n_snapshots).normalized;
    case DetectorKind::Stat::FrobeniusAvg:
        return frob_avg_stat(cb, n_snapshots).normalized;
    case DetectorKind::Stat::Combined:
        return combined_stat(cb, det.kind.lambda, det.kind.mu);
    }
    throw InvalidSpec("detector_score: unknown statistic");
}

std::vector<double> scores_for_observation(const ExperimentConfig& cfg,
                                           const CMatrix& obs)
{
    const auto fbs = transform_observation(obs, cfg.dims);
    const auto cov = sample_block_covariance(fbs);
    const auto coherences = coherences_for(cov, cfg.detectors);
    std::vector<double> scores;
    scores.reserve(cfg.detectors.size());
    for (const auto& det : cfg.detectors) {
        scores.push_back(detector_score(det, coherences.at(det.structure),
                                        cfg.dims.n_snapshots));
    }
    return scores;
}

// Core runner: null scores always, plus alternative scores per SNR unless
// null_only. One generation pass per trial serves every SNR.
struct RawScores {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> null_scores;             // [det][trial]
    std::vector<std::vector<std::vector<double>>> alt_scores; // [snr][det][trial]
};

RawScores run_core(const ExperimentConfig& cfg, bool null_only)
{
    cfg.validate();
    const std::size_t n_det = cfg.detectors.size();
    const std::size_t n_snr = null_only ? 0 : cfg.snr_db.size();

    RawScores out;
    for (const auto& det : cfg.detectors) {
        out.labels.push_back(det.effective_label());
    }
    out.null_scores.assign(n_det,
                           std::vector<double>(static_cast<std::size_t>(cfg.trials)));
    out.alt_scores.assign(
        n_snr, std::vector<std::vector<double>>(
                   n_det, std::vector<double>(static_cast<std::size_t>(cfg.trials))));

    auto body = [&](int t) {
        const CMatrix noise = gen_trial_noise(cfg, t);
        const auto null_scores = scores_for_observation(cfg, noise);
        for (std::size_t d = 0; d < n_det; ++d) {
            out.null_scores[d][static_cast<std::size_t>(t)] = null_scores[d];
        }
        if (null_only) {
            return;
        }
        const CMatrix signal = gen_trial_signal(cfg, t);
        for (std::size_t s = 0; s < n_snr; ++s) {
            const CMatrix obs = mix_at_snr(signal, noise, cfg.snr_db[s]);
            const auto alt = scores_for_observation(cfg, obs);
            for (std::size_t d = 0; d < n_det; ++d) {
                out.alt_scores[s][d][static_cast<std::size_t>(t)] = alt[d];
            }
        }
    };
    run_trials_parallel(cfg.trials, resolve_thread_count(cfg), body);
    return out;
}

} // namespace

std::string DetectorSetup::effective_label() const
{
    if (!label.empty()) {
        return label;
    }
    return std::string(to_string(kind.stat)) + "@" + to_string(structure);
}

int DetectorSetup::dof(const SignalDims& dims) const
{
    switch (kind.stat) {
    case DetectorKind::Stat::Glrt:
    case DetectorKind::Stat::FrobeniusSum:
        return glr_dof(structure, dims.n_antennas, dims.cycle_period,
                       dims.n_blocks);
    case DetectorKind::Stat::FrobeniusAvg:
        return avg_stat_dof(structure, dims.n_antennas, dims.cycle_period);
    case DetectorKind::Stat::Combined:
        throw InvalidSpec("DetectorSetup: the combined statistic has no "
                          "chi-squared reference dof");
    }
    throw InvalidSpec("DetectorSetup: unknown statistic");
}

void ExperimentConfig::validate() const
{
    dims.validate();
    signal.validate();
    channel.validate();
    noise.validate(dims.n_antennas);
    if (signal.cycle_period() != dims.cycle_period) {
        throw InvalidSpec("ExperimentConfig: signal symbol length ("
                          + std::to_string(signal.cycle_period())
                          + ") must equal the cycle period ("
                          + std::to_string(dims.cycle_period) + ")");
    }
    if (channel.n_antennas != dims.n_antennas) {
        throw InvalidSpec("ExperimentConfig: channel antenna count mismatch");
    }
    if (trials < 1) {
        throw InvalidSpec("ExperimentConfig: trials must be >= 1");
    }
    if (!(pfa > 0.0) || !(pfa < 1.0)) {
        throw InvalidProbability("ExperimentConfig: pfa must lie in (0, 1)");
    }
    if (snr_db.empty()) {
        throw InvalidSpec("ExperimentConfig: need at least one snr_db value");
    }
    if (!detectors.empty() && dims.n_snapshots < dims.block_dim()) {
        throw InvalidSpec("ExperimentConfig: coherence-based detectors need "
                          "M >= LP snapshots");
    }
    for (const auto& det : detectors) {
        det.kind.validate();
        if (det.kind.stat == DetectorKind::Stat::FrobeniusAvg
            && !is_white(det.structure)) {
            throw InvalidSpec("ExperimentConfig: the averaged statistic "
                              "requires a white structure case");
        }
    }
}

int resolve_thread_count(const ExperimentConfig& cfg)
{
    int threads = cfg.threads;
    if (threads <= 0) {
        if (const char* env = std::getenv("CYCLODETECT_THREADS")) {
            threads = std::atoi(env);
        }
    }
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
    }
    return std::max(1, threads);
}

TrialScores run_experiment(const ExperimentConfig& cfg)
{
    if (cfg.snr_db.size() != 1) {
        throw InvalidSpec("run_experiment: expects exactly one snr_db value "
                          "(use pmd_vs_snr for sweeps)");
    }
    RawScores raw = run_core(cfg, /*null_only=*/false);
    TrialScores scores;
    scores.labels = std::move(raw.labels);
    scores.null_scores = std::move(raw.null_scores);
    scores.alt_scores = std::move(raw.alt_scores[0]);
    return scores;
}

NullCdfResult null_cdf_experiment(const ExperimentConfig& cfg)
{
    RawScores raw = run_core(cfg, /*null_only=*/true);
    NullCdfResult result;
    result.labels = std::move(raw.labels);
    result.samples = std::move(raw.null_scores);
    for (std::size_t d = 0; d < cfg.detectors.size(); ++d) {
        result.dof.push_back(cfg.detectors[d].dof(cfg.dims));
        result.ks.push_back(ks_distance(result.samples[d], result.dof[d]));
    }
    return result;
}

AucGridResult auc_grid(const ExperimentConfig& cfg,
                       const std::vector<double>& lambda_grid,
                       const std::vector<double>& mu_grid)
{
    if (lambda_grid.empty() || mu_grid.empty()) {
        throw EmptyInput("auc_grid: weight grids must be non-empty");
    }
    ExperimentConfig grid_cfg = cfg;
    if (grid_cfg.snr_db.size() != 1) {
        throw InvalidSpec("auc_grid: expects exactly one snr_db value");
    }
    if (grid_cfg.trials < 100) {
        throw InvalidSpec("auc_grid: need at least 100 trials");
    }

    // The grid shares one structure case: the one of the configured combined
    // detector (default white-correlated).
    NoiseStructureCase structure = NoiseStructureCase::WhiteCorrelated;
    for (const auto& det : cfg.detectors) {
        if (det.kind.stat == DetectorKind::Stat::Combined) {
            structure = det.structure;
            break;
        }
    }
    grid_cfg.detectors.clear();
    grid_cfg.validate();

    // Per trial and arm: the three Frobenius reductions plus the log-GLR.
    struct Components {
        double frob_blocks, frob_bars, frob_av, glrt;
    };
    const auto trial_components = [&](const CMatrix& obs) {
        const auto cov = sample_block_covariance(
            transform_observation(obs, grid_cfg.dims));
        const auto cb = coherence(cov, s0_hat(cov, structure));
        Components c{};
        for (const auto& block : cb.blocks) {
            c.frob_blocks += frob_sq(block);
        }
        for (const auto& bar : cb.bar_blocks) {
            c.frob_bars += frob_sq(bar);
        }
        c.frob_av = frob_sq(cb.c_av);
        c.glrt = glrt_stat(cb, grid_cfg.dims.n_snapshots).normalized;
        return c;
    };

    std::vector<Components> null_c(static_cast<std::size_t>(grid_cfg.trials));
    std::vector<Components> alt_c(static_cast<std::size_t>(grid_cfg.trials));
    run_trials_parallel(
        grid_cfg.trials, resolve_thread_count(grid_cfg), [&](int t) {
            const CMatrix noise = gen_trial_noise(grid_cfg, t);
            null_c[static_cast<std::size_t>(t)] = trial_components(noise);
            const CMatrix obs = mix_at_snr(gen_trial_signal(grid_cfg, t), noise,
                                           grid_cfg.snr_db[0]);
            alt_c[static_cast<std::size_t>(t)] = trial_components(obs);
        });

    const double p = grid_cfg.dims.cycle_period;
    const double n = grid_cfg.dims.n_blocks;
    auto combined_scores = [&](const std::vector<Components>& c, double lambda,
                               double mu) {
        std::vector<double> s(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            s[i] = c[i].frob_blocks + lambda * p * c[i].frob_bars
                   + mu * n * c[i].frob_av;
        }
        return s;
    };
    auto glrt_scores = [&](const std::vector<Components>& c) {
        std::vector<double> s(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
            s[i] = c[i].glrt;
        }
        return s;
    };

    AucGridResult result;
    result.lambda_grid = lambda_grid;
    result.mu_grid = mu_grid;
    result.auc.assign(lambda_grid.size(),
                      std::vector<double>(mu_grid.size(), 0.0));
    for (std::size_t a = 0; a < lambda_grid.size(); ++a) {
        for (std::size_t b = 0; b < mu_grid.size(); ++b) {
            result.auc[a][b] =
                roc_and_auc(combined_scores(null_c, lambda_grid[a], mu_grid[b]),
                            combined_scores(alt_c, lambda_grid[a], mu_grid[b]))
                    .auc;
        }
    }
    result.glrt_auc = roc_and_auc(glrt_scores(null_c), glrt_scores(alt_c)).auc;
    return result;
}

SweepResult robustness_sweep(const ExperimentConfig& cfg,
                             const std::vector<double>& sigma_list)
{
    if (sigma_list.empty()) {
        throw EmptyInput("robustness_sweep: empty sigma list");
    }
    if (cfg.trials < 100) {
        throw InvalidSpec("robustness_sweep: need at least 100 trials");
    }
    SweepResult result;
    result.sigma = sigma_list;
    for (const auto& det : cfg.detectors) {
        result.labels.push_back(det.effective_label());
    }
    result.pd.assign(cfg.detectors.size(),
                     std::vector<double>(sigma_list.size(), 0.0));

    for (std::size_t i = 0; i < sigma_list.size(); ++i) {
        ExperimentConfig point_cfg = cfg;
        point_cfg.noise.temporal = NoiseSpec::Temporal::ExpColored;
        point_cfg.noise.exp_sigma = sigma_list[i];
        const TrialScores scores = run_experiment(point_cfg);
        for (std::size_t d = 0; d < cfg.detectors.size(); ++d) {
            const double thr =
                empirical_threshold(scores.null_scores[d], cfg.pfa);
            int detections = 0;
            for (double s : scores.alt_scores[d]) {
                if (s > thr) {
                    ++detections;
                }
            }
            result.pd[d][i] =
                static_cast<double>(detections) / cfg.trials;
        }
    }
    return result;
}

PmdVsSnrResult pmd_vs_snr(const ExperimentConfig& cfg)
{
    if (cfg.trials < 100) {
        throw InvalidSpec("pmd_vs_snr: need at least 100 trials");
    }
    RawScores raw = run_core(cfg, /*null_only=*/false);

    PmdVsSnrResult result;
    result.snr_db = cfg.snr_db;
    result.labels = std::move(raw.labels);
    result.pmd.assign(cfg.detectors.size(),
                      std::vector<double>(cfg.snr_db.size(), 0.0));
    for (std::size_t d = 0; d < cfg.detectors.size(); ++d) {
        const double thr = empirical_threshold(raw.null_scores[d], cfg.pfa);
        for (std::size_t s = 0; s < cfg.snr_db.size(); ++s) {
            int detections = 0;
            for (double v : raw.alt_scores[s][d]) {
                if (v > thr) {
                    ++detections;
                }
            }
            result.pmd[d][s] =
                1.0 - static_cast<double>(detections) / cfg.trials;
        }
    }
    return result;
}

} // namespace cyclodetect
