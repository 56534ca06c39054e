#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "cyclodetect/errors.hpp"
#include "cyclodetect/estimation.hpp"
#include "cyclodetect/rng.hpp"
#include "cyclodetect/transform.hpp"

using namespace cyclodetect;

namespace {

SignalDims make_dims(int L, int P, int N, int M)
{
    SignalDims d;
    d.n_antennas = L;
    d.cycle_period = P;
    d.n_blocks = N;
    d.n_snapshots = M;
    return d;
}

FrequencyBlockSet random_fbs(const SignalDims& dims, std::uint64_t seed)
{
    Rng rng(seed);
    FrequencyBlockSet fbs;
    fbs.dims = dims;
    fbs.blocks.resize(dims.n_blocks);
    for (auto& b : fbs.blocks) {
        b.resize(dims.block_dim(), dims.n_snapshots);
        for (Eigen::Index c = 0; c < b.cols(); ++c) {
            for (Eigen::Index r = 0; r < b.rows(); ++r) {
                b(r, c) = rng.cgaussian();
            }
        }
    }
    return fbs;
}

// Frequency blocks whose sample covariance is exactly the identity: rows of a
// DFT matrix are orthogonal with norm sqrt(M), so (1/M) B B^H = I. Requires
// block_dim <= M.
FrequencyBlockSet structured_null_fbs(const SignalDims& dims)
{
    FrequencyBlockSet fbs;
    fbs.dims = dims;
    const int d = dims.block_dim();
    const int m = dims.n_snapshots;
    CMatrix b(d, m);
    for (int c = 0; c < m; ++c) {
        for (int r = 0; r < d; ++r) {
            b(r, c) = std::polar(
                1.0, 2.0 * 3.14159265358979323846 * r * c / m);
        }
    }
    fbs.blocks.assign(dims.n_blocks, b);
    return fbs;
}

} // namespace

TEST_CASE("single-snapshot covariance is the outer product")
{
    const auto dims = make_dims(2, 2, 3, 1);
    const auto fbs = random_fbs(dims, 1);
    const auto cov = sample_block_covariance(fbs);
    REQUIRE(static_cast<int>(cov.blocks.size()) == 3);
    for (int j = 0; j < 3; ++j) {
        const CMatrix outer =
            fbs.blocks[j].col(0) * fbs.blocks[j].col(0).adjoint();
        CHECK((cov.blocks[j].mat() - outer).norm() < 1e-12);
    }
}

TEST_CASE("covariance averages snapshots")
{
    const auto dims = make_dims(1, 2, 2, 8);
    const auto fbs = random_fbs(dims, 2);
    const auto cov = sample_block_covariance(fbs);
    for (int j = 0; j < 2; ++j) {
        CMatrix acc = CMatrix::Zero(2, 2);
        for (int m = 0; m < 8; ++m) {
            acc += fbs.blocks[j].col(m) * fbs.blocks[j].col(m).adjoint();
        }
        acc /= 8.0;
        CHECK((cov.blocks[j].mat() - acc).norm() < 1e-12);
    }
}

TEST_CASE("covariance blocks agree with the dense stacked covariance")
{
    // Build the full (N LP) x (N LP) sample covariance of the stacked blocks
    // and compare its diagonal LP x LP blocks.
    const auto dims = make_dims(2, 2, 3, 16);
    const auto fbs = random_fbs(dims, 3);
    const int d = dims.block_dim();
    const int n = dims.n_blocks;

    CMatrix stacked(n * d, dims.n_snapshots);
    for (int j = 0; j < n; ++j) {
        stacked.middleRows(j * d, d) = fbs.blocks[j];
    }
    const CMatrix full = stacked * stacked.adjoint() / 16.0;

    const auto cov = sample_block_covariance(fbs);
    for (int j = 0; j < n; ++j) {
        CHECK((cov.blocks[j].mat() - full.block(j * d, j * d, d, d)).norm() <
              1e-12);
    }
}

TEST_CASE("bin accessor exposes the antenna sub-blocks")
{
    const auto dims = make_dims(2, 3, 2, 8);
    const auto fbs = random_fbs(dims, 4);
    const auto cov = sample_block_covariance(fbs);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 3; ++k) {
            const CMatrix sub = cov.bin(j, k);
            REQUIRE(sub.rows() == 2);
            CHECK((sub - cov.blocks[j].mat().block(2 * k, 2 * k, 2, 2))
                      .norm() < 1e-14);
        }
    }
}

TEST_CASE("null estimates take the structure-matched reduction")
{
    const auto dims = make_dims(2, 2, 3, 12);
    const auto fbs = random_fbs(dims, 5);
    const auto cov = sample_block_covariance(fbs);
    const int L = 2, P = 2, N = 3;

    SECTION("colored-correlated keeps every bin")
    {
        const auto s0 = s0_hat(cov, NoiseStructureCase::ColoredCorrelated);
        CHECK_FALSE(s0.shared_across_bins);
        REQUIRE(static_cast<int>(s0.bins.blocks.size()) == N * P);
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < P; ++k) {
                CHECK((s0.bin(j, k).mat() - cov.bin(j, k)).norm() < 1e-13);
            }
        }
    }

    SECTION("colored-uncorrelated keeps per-bin diagonals")
    {
        const auto s0 = s0_hat(cov, NoiseStructureCase::ColoredUncorrelated);
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < P; ++k) {
                const CMatrix want =
                    cov.bin(j, k).diagonal().asDiagonal().toDenseMatrix();
                CHECK((s0.bin(j, k).mat() - want).norm() < 1e-13);
            }
        }
    }

    SECTION("white-correlated averages all bins")
    {
        const auto s0 = s0_hat(cov, NoiseStructureCase::WhiteCorrelated);
        CHECK(s0.shared_across_bins);
        CMatrix avg = CMatrix::Zero(L, L);
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < P; ++k) {
                avg += cov.bin(j, k);
            }
        }
        avg /= static_cast<double>(N * P);
        CHECK((s0.bin(0, 0).mat() - avg).norm() < 1e-13);
        CHECK((s0.bin(2, 1).mat() - avg).norm() < 1e-13); // shared
    }

    SECTION("white-uncorrelated keeps the averaged diagonal")
    {
        const auto s0 = s0_hat(cov, NoiseStructureCase::WhiteUncorrelated);
        CMatrix avg = CMatrix::Zero(L, L);
        for (int j = 0; j < N; ++j) {
            for (int k = 0; k < P; ++k) {
                avg += cov.bin(j, k);
            }
        }
        avg /= static_cast<double>(N * P);
        const CMatrix want = avg.diagonal().asDiagonal().toDenseMatrix();
        CHECK((s0.bin(1, 0).mat() - want).norm() < 1e-13);
    }
}

TEST_CASE("scalar coherence divides by the averaged power")
{
    // L=1, P=2, N=1, white-uncorrelated: S0 = mean diagonal = avg of the two
    // powers; C = S / that scalar.
    const auto dims = make_dims(1, 2, 1, 4);
    FrequencyBlockSet fbs;
    fbs.dims = dims;
    CMatrix b(2, 4);
    b << 2.0, 2.0, 2.0, 2.0,
         cdouble(0.0, 1.0), cdouble(0.0, 1.0), cdouble(0.0, 1.0),
         cdouble(0.0, 1.0);
    fbs.blocks.push_back(b);
    const auto cov = sample_block_covariance(fbs);
    // S = [[4, 2i^*...]] : row0*conj(row1) = 2*(-i) = -2i
    CHECK(std::abs(cov.blocks[0](0, 0) - cdouble(4, 0)) < 1e-14);
    CHECK(std::abs(cov.blocks[0](0, 1) - cdouble(0, -2)) < 1e-14);
    CHECK(std::abs(cov.blocks[0](1, 1) - cdouble(1, 0)) < 1e-14);

    const auto s0 = s0_hat(cov, NoiseStructureCase::WhiteUncorrelated);
    const auto cb = coherence(cov, s0);
    // Averaged power (4 + 1)/2 = 2.5; C = S / 2.5.
    CHECK(std::abs(cb.blocks[0](0, 0) - cdouble(4.0 / 2.5, 0)) < 1e-12);
    CHECK(std::abs(cb.blocks[0](0, 1) - cdouble(0, -2.0 / 2.5)) < 1e-12);
    CHECK(std::abs(cb.blocks[0](1, 1) - cdouble(1.0 / 2.5, 0)) < 1e-12);
}

TEST_CASE("coherence trace normalization holds for all four structures")
{
    const auto dims = make_dims(2, 3, 4, 16);
    const auto fbs = random_fbs(dims, 6);
    const auto cov = sample_block_covariance(fbs);
    const double lnp = 2.0 * 3.0 * 4.0;

    for (auto c : {NoiseStructureCase::ColoredCorrelated,
                   NoiseStructureCase::ColoredUncorrelated,
                   NoiseStructureCase::WhiteCorrelated,
                   NoiseStructureCase::WhiteUncorrelated}) {
        const auto cb = coherence(cov, s0_hat(cov, c));
        double trace = 0.0;
        for (const auto& blk : cb.blocks) {
            trace += blk.mat().trace().real();
        }
        CAPTURE(to_string(c));
        // Exact in every case: the bins average to the null estimate, so
        // whitening leaves a total trace of NP * tr(I_L).
        CHECK(trace == Catch::Approx(lnp).epsilon(1e-10));
    }
}

TEST_CASE("colored-correlated coherence has identity antenna sub-blocks")
{
    const auto dims = make_dims(3, 2, 3, 20);
    const auto fbs = random_fbs(dims, 7);
    const auto cov = sample_block_covariance(fbs);
    const auto cb =
        coherence(cov, s0_hat(cov, NoiseStructureCase::ColoredCorrelated));
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 2; ++k) {
            const CMatrix sub = cb.blocks[j].mat().block(3 * k, 3 * k, 3, 3);
            CHECK((sub - CMatrix::Identity(3, 3)).norm() < 1e-9);
        }
    }
}

TEST_CASE("coherence reductions: block average and antenna-diagonal average")
{
    const auto dims = make_dims(2, 2, 3, 10);
    const auto fbs = random_fbs(dims, 8);
    const auto cov = sample_block_covariance(fbs);
    const auto cb =
        coherence(cov, s0_hat(cov, NoiseStructureCase::WhiteUncorrelated));

    CMatrix avg = CMatrix::Zero(4, 4);
    for (const auto& blk : cb.blocks) {
        avg += blk.mat();
    }
    avg /= 3.0;
    CHECK((cb.c_av.mat() - avg).norm() < 1e-12);

    REQUIRE(cb.bar_blocks.size() == 3);
    for (int j = 0; j < 3; ++j) {
        CMatrix bar = CMatrix::Zero(2, 2);
        for (int k = 0; k < 2; ++k) {
            bar += cb.blocks[j].mat().block(2 * k, 2 * k, 2, 2);
        }
        bar /= 2.0;
        CHECK((cb.bar_blocks[j].mat() - bar).norm() < 1e-12);
    }
}

TEST_CASE("too few snapshots for a sample coherence")
{
    const auto dims = make_dims(2, 3, 2, 5); // M = 5 < LP = 6
    const auto fbs = random_fbs(dims, 9);
    const auto cov = sample_block_covariance(fbs);
    CHECK_THROWS_AS(
        coherence(cov, s0_hat(cov, NoiseStructureCase::WhiteUncorrelated)),
        NotPositiveDefinite);
}

TEST_CASE("an exactly null-structured input gives identity coherence")
{
    const auto dims = make_dims(1, 2, 3, 8);
    const auto fbs = structured_null_fbs(dims);
    const auto cov = sample_block_covariance(fbs);
    for (int j = 0; j < 3; ++j) {
        CHECK((cov.blocks[j].mat() - CMatrix::Identity(2, 2)).norm() < 1e-10);
    }
    const auto cb =
        coherence(cov, s0_hat(cov, NoiseStructureCase::WhiteUncorrelated));
    for (const auto& blk : cb.blocks) {
        CHECK((blk.mat() - CMatrix::Identity(2, 2)).norm() < 1e-10);
    }

    const auto table = cyclic_coherence_diagnostic(cb);
    // c = 0 samples are unit (self-coherence of scalar antennas), c != 0 zero.
    REQUIRE(table.frob_sq.size() == 2);
    for (double v : table.frob_sq[0]) {
        CHECK(v == Catch::Approx(1.0).margin(1e-9));
    }
    for (double v : table.frob_sq[1]) {
        CHECK(v == Catch::Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("cyclic table re-sums to the Frobenius statistic")
{
    const auto dims = make_dims(2, 3, 4, 16);
    const auto fbs = random_fbs(dims, 11);
    const auto cov = sample_block_covariance(fbs);
    for (auto c : {NoiseStructureCase::WhiteCorrelated,
                   NoiseStructureCase::WhiteUncorrelated}) {
        const auto cb = coherence(cov, s0_hat(cov, c));
        double direct = 0.0;
        for (const auto& blk : cb.blocks) {
            direct += frob_sq(blk);
        }
        const auto table = cyclic_coherence_diagnostic(cb);
        CAPTURE(to_string(c));
        CHECK(table.total() == Catch::Approx(direct).epsilon(1e-9));
        // Table shape: cycle c holds (P - c) N bins.
        REQUIRE(static_cast<int>(table.frob_sq.size()) == 3);
        for (int c2 = 0; c2 < 3; ++c2) {
            CHECK(static_cast<int>(table.frob_sq[c2].size()) == (3 - c2) * 4);
        }
    }
}

TEST_CASE("sample covariance converges to the population law")
{
    // White data: || S_hat - I || shrinks like 1/sqrt(M).
    const auto dims_small = make_dims(2, 2, 1, 64);
    const auto dims_large = make_dims(2, 2, 1, 4096);
    const auto cov_small =
        sample_block_covariance(random_fbs(dims_small, 12));
    const auto cov_large =
        sample_block_covariance(random_fbs(dims_large, 13));
    const CMatrix i4 = CMatrix::Identity(4, 4);
    const double err_small = (cov_small.blocks[0].mat() - i4).norm();
    const double err_large = (cov_large.blocks[0].mat() - i4).norm();
    // Expected ratio 8; allow wide slack for randomness.
    CHECK(err_small / err_large > 2.5);
    CHECK(err_small < 1.0);
}
