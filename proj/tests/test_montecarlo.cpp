#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <vector>

#include "cyclodetect/errors.hpp"
#include "cyclodetect/montecarlo.hpp"
#include "cyclodetect/stats.hpp"

using namespace cyclodetect;

namespace {

DetectorSetup setup(DetectorKind::Stat stat, NoiseStructureCase structure)
{
    DetectorSetup d;
    d.kind.stat = stat;
    d.structure = structure;
    return d;
}

// Small, fast configuration: QPSK with a 2-sample rectangular pulse over a
// 2-antenna flat-ish channel in white uncorrelated noise.
ExperimentConfig small_config()
{
    ExperimentConfig cfg;
    cfg.dims.n_antennas = 2;
    cfg.dims.cycle_period = 2;
    cfg.dims.n_blocks = 4;
    cfg.dims.n_snapshots = 16;
    cfg.snr_db = {-5.0};
    cfg.trials = 200;
    cfg.pfa = 0.01;
    cfg.signal.kind = SignalSpec::Kind::QpskSingleCarrier;
    cfg.signal.samples_per_symbol = 2;
    cfg.signal.pulse = SignalSpec::Pulse::Rect;
    cfg.channel.n_antennas = 2;
    cfg.channel.n_taps = 3;
    cfg.noise = NoiseSpec::white();
    cfg.detectors = {
        setup(DetectorKind::Stat::FrobeniusSum,
              NoiseStructureCase::WhiteCorrelated),
        setup(DetectorKind::Stat::FrobeniusAvg,
              NoiseStructureCase::WhiteCorrelated),
        setup(DetectorKind::Stat::Glrt, NoiseStructureCase::WhiteCorrelated),
    };
    cfg.root_seed = 77;
    cfg.threads = 2;
    return cfg;
}

} // namespace

TEST_CASE("experiment runs are bitwise reproducible")
{
    const auto cfg = small_config();
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    REQUIRE(a.labels == b.labels);
    REQUIRE(a.labels.size() == 3);
    CHECK(a.labels[0] == "frob-sum@white-correlated");
    CHECK(a.labels[1] == "frob-avg@white-correlated");
    CHECK(a.labels[2] == "glrt@white-correlated");
    for (std::size_t d = 0; d < a.null_scores.size(); ++d) {
        REQUIRE(a.null_scores[d].size() == 200);
        CHECK(a.null_scores[d] == b.null_scores[d]);
        CHECK(a.alt_scores[d] == b.alt_scores[d]);
    }
}

TEST_CASE("scores do not depend on the thread count")
{
    auto cfg = small_config();
    cfg.trials = 64;
    cfg.threads = 1;
    const auto serial = run_experiment(cfg);
    cfg.threads = 4;
    const auto parallel = run_experiment(cfg);
    for (std::size_t d = 0; d < serial.null_scores.size(); ++d) {
        CHECK(serial.null_scores[d] == parallel.null_scores[d]);
        CHECK(serial.alt_scores[d] == parallel.alt_scores[d]);
    }
}

TEST_CASE("minus-infinity SNR degenerates to the null")
{
    auto cfg = small_config();
    cfg.trials = 120;
    cfg.snr_db = {-std::numeric_limits<double>::infinity()};
    const auto scores = run_experiment(cfg);
    for (std::size_t d = 0; d < scores.null_scores.size(); ++d) {
        // Common random numbers: the H1 observation is exactly the H0 one.
        CHECK(scores.null_scores[d] == scores.alt_scores[d]);
        CHECK(roc_and_auc(scores.null_scores[d], scores.alt_scores[d]).auc == 0.5);
    }
}

TEST_CASE("detectors separate the hypotheses at moderate SNR")
{
    const auto cfg = small_config();
    const auto scores = run_experiment(cfg);
    for (std::size_t d = 0; d < scores.null_scores.size(); ++d) {
        const double auc =
            roc_and_auc(scores.null_scores[d], scores.alt_scores[d]).auc;
        CAPTURE(scores.labels[d], auc);
        CHECK(auc > 0.8);
    }
}

TEST_CASE("configuration validation")
{
    auto cfg = small_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec);

    cfg = small_config();
    cfg.pfa = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidProbability);

    cfg = small_config();
    cfg.snr_db.clear();
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec);

    cfg = small_config();
    cfg.signal.samples_per_symbol = 3; // != cycle period
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec);

    cfg = small_config();
    cfg.channel.n_antennas = 1;
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec);

    cfg = small_config();
    cfg.dims.n_snapshots = 3; // < LP = 4
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec);

    cfg = small_config();
    cfg.detectors[1].structure = NoiseStructureCase::ColoredCorrelated;
    CHECK_THROWS_AS(cfg.validate(), InvalidSpec); // frob-avg needs white

    cfg = small_config();
    cfg.snr_db = {-5.0, -3.0};
    CHECK_THROWS_AS(run_experiment(cfg), InvalidSpec);
}

TEST_CASE("dof resolution per detector")
{
    const auto cfg = small_config();
    CHECK(cfg.detectors[0].dof(cfg.dims) ==
          glr_dof(NoiseStructureCase::WhiteCorrelated, 2, 2, 4));
    CHECK(cfg.detectors[1].dof(cfg.dims) ==
          avg_stat_dof(NoiseStructureCase::WhiteCorrelated, 2, 2));

    DetectorSetup combined;
    combined.kind.stat = DetectorKind::Stat::Combined;
    CHECK_THROWS_AS(combined.dof(cfg.dims), InvalidSpec);
}

TEST_CASE("weight grid reproduces the pure statistics at its corners")
{
    auto cfg = small_config();
    cfg.trials = 150;
    cfg.detectors.push_back(setup(DetectorKind::Stat::Combined,
                                  NoiseStructureCase::WhiteCorrelated));

    const auto scores = run_experiment(cfg);
    const double auc_sum = roc_and_auc(scores.null_scores[0], scores.alt_scores[0]).auc;
    const double auc_avg = roc_and_auc(scores.null_scores[1], scores.alt_scores[1]).auc;
    const double auc_glrt =
        roc_and_auc(scores.null_scores[2], scores.alt_scores[2]).auc;

    const auto grid = auc_grid(cfg, {0.0, 1.0}, {0.0, 1e9});
    REQUIRE(grid.auc.size() == 2);
    REQUIRE(grid.auc[0].size() == 2);

    // lambda = mu = 0 is a monotone transform of the Frobenius sum; huge mu
    // is dominated by the averaged term. Same trials, same seeds: the AUCs
    // must agree to rounding.
    CHECK(grid.auc[0][0] == Catch::Approx(auc_sum).margin(1e-12));
    CHECK(grid.auc[0][1] == Catch::Approx(auc_avg).margin(1e-12));
    CHECK(grid.glrt_auc == Catch::Approx(auc_glrt).margin(1e-12));

    double best = 0.0;
    for (const auto& row : grid.auc) {
        for (double v : row) {
            best = std::max(best, v);
        }
    }
    CHECK(best >= grid.glrt_auc - 0.02);
}

TEST_CASE("weight grid validation")
{
    auto cfg = small_config();
    cfg.trials = 150;
    CHECK_THROWS_AS(auc_grid(cfg, {}, {0.0}), EmptyInput);
    cfg.trials = 50;
    CHECK_THROWS_AS(auc_grid(cfg, {0.0}, {0.0}), InvalidSpec);
}

TEST_CASE("chi-square approximation of the log-GLR improves with snapshots")
{
    auto cfg = small_config();
    cfg.trials = 500;
    cfg.detectors = {
        setup(DetectorKind::Stat::Glrt, NoiseStructureCase::WhiteUncorrelated),
    };

    cfg.dims.n_snapshots = 16;
    const auto few = null_cdf_experiment(cfg);
    cfg.dims.n_snapshots = 64;
    const auto many = null_cdf_experiment(cfg);

    REQUIRE(few.ks.size() == 1);
    REQUIRE(few.dof[0] ==
            glr_dof(NoiseStructureCase::WhiteUncorrelated, 2, 2, 4));
    REQUIRE(few.samples[0].size() == 500);
    CAPTURE(few.ks[0], many.ks[0]);
    CHECK(few.ks[0] > many.ks[0]);
    CHECK(many.ks[0] < 0.12);
}

TEST_CASE("missed-detection curve falls with SNR")
{
    auto cfg = small_config();
    cfg.trials = 300;
    cfg.snr_db = {-25.0, -5.0, 5.0};
    const auto result = pmd_vs_snr(cfg);
    REQUIRE(result.snr_db == cfg.snr_db);
    REQUIRE(result.pmd.size() == cfg.detectors.size());
    for (std::size_t d = 0; d < result.pmd.size(); ++d) {
        REQUIRE(result.pmd[d].size() == 3);
        for (double p : result.pmd[d]) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
        CAPTURE(result.labels[d], result.pmd[d]);
        CHECK(result.pmd[d][0] > result.pmd[d][2]);
        CHECK(result.pmd[d][2] < 0.05);
    }

    cfg.trials = 99;
    CHECK_THROWS_AS(pmd_vs_snr(cfg), InvalidSpec);
}

TEST_CASE("robustness sweep over noise coloring")
{
    auto cfg = small_config();
    cfg.trials = 200;
    cfg.snr_db = {0.0};
    const auto sweep = robustness_sweep(cfg, {0.0, 6.0});
    REQUIRE(sweep.sigma == std::vector<double>{0.0, 6.0});
    REQUIRE(sweep.pd.size() == cfg.detectors.size());
    for (std::size_t d = 0; d < sweep.pd.size(); ++d) {
        REQUIRE(sweep.pd[d].size() == 2);
        for (double p : sweep.pd[d]) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
    // sigma = 0 keeps the noise white, the modeled case: detection should be
    // strong at 0 dB.
    CHECK(sweep.pd[0][0] > 0.9);

    CHECK_THROWS_AS(robustness_sweep(cfg, {}), EmptyInput);
    cfg.trials = 10;
    CHECK_THROWS_AS(robustness_sweep(cfg, {0.0}), InvalidSpec);
}

TEST_CASE("thread resolution honors explicit counts and the env cap")
{
    auto cfg = small_config();
    cfg.threads = 3;
    CHECK(resolve_thread_count(cfg) == 3);

    cfg.threads = 0;
    ::setenv("CYCLODETECT_THREADS", "2", 1);
    CHECK(resolve_thread_count(cfg) == 2);
    ::unsetenv("CYCLODETECT_THREADS");
    CHECK(resolve_thread_count(cfg) >= 1);
}
