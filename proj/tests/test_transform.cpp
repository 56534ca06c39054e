#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "cyclodetect/errors.hpp"
#include "cyclodetect/rng.hpp"
#include "cyclodetect/transform.hpp"

using namespace cyclodetect;

namespace {

constexpr double kPi = 3.14159265358979323846;

CMatrix random_snapshot(int n_antennas, int len, std::uint64_t seed)
{
    Rng rng(seed);
    CMatrix x(n_antennas, len);
    for (int t = 0; t < len; ++t) {
        for (int a = 0; a < n_antennas; ++a) {
            x(a, t) = rng.cgaussian();
        }
    }
    return x;
}

// Straight-line reference: per antenna, unitary forward DFT by the defining
// sum, then bin k*N+j lands in block j at row offset k*L.
CMatrix dense_reference(const CMatrix& snapshot, int L, int P, int N)
{
    const int np = N * P;
    CMatrix bins(L, np);
    for (int b = 0; b < np; ++b) {
        for (int l = 0; l < L; ++l) {
            cdouble acc = 0.0;
            for (int n = 0; n < np; ++n) {
                const double ang = -2.0 * kPi * b * n / np;
                acc += snapshot(l, n) * std::polar(1.0, ang);
            }
            bins(l, b) = acc / std::sqrt(static_cast<double>(np));
        }
    }
    CMatrix blocks(L * P, N);
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < P; ++k) {
            for (int l = 0; l < L; ++l) {
                blocks(k * L + l, j) = bins(l, k * N + j);
            }
        }
    }
    return blocks;
}

// Kronecker product of small dense matrices.
CMatrix kron(const CMatrix& a, const CMatrix& b)
{
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
        }
    }
    return out;
}

} // namespace

TEST_CASE("segmenting splits time columns into contiguous snapshots")
{
    SignalDims dims;
    dims.n_antennas = 2;
    dims.cycle_period = 2;
    dims.n_blocks = 2;
    dims.n_snapshots = 3;

    CMatrix x(2, 12);
    for (int t = 0; t < 12; ++t) {
        x(0, t) = cdouble(t, 0);
        x(1, t) = cdouble(0, t);
    }
    const auto segs = segment(x, dims);
    REQUIRE(segs.size() == 3);
    for (int m = 0; m < 3; ++m) {
        REQUIRE(segs[m].rows() == 2);
        REQUIRE(segs[m].cols() == 4);
        for (int t = 0; t < 4; ++t) {
            CHECK(segs[m](0, t) == cdouble(4 * m + t, 0));
        }
    }
}

TEST_CASE("segmenting rejects length mismatches")
{
    SignalDims dims;
    dims.n_antennas = 2;
    dims.cycle_period = 2;
    dims.n_blocks = 2;
    dims.n_snapshots = 3;
    CHECK_THROWS_AS(segment(CMatrix::Zero(2, 11), dims), LengthMismatch);
    CHECK_THROWS_AS(segment(CMatrix::Zero(3, 12), dims), LengthMismatch);
}

TEST_CASE("block transform matches the by-definition reference")
{
    struct Case {
        int L, P, N;
    };
    for (const Case c : {Case{1, 2, 2}, Case{2, 2, 2}, Case{3, 2, 2},
                         Case{1, 4, 4}, Case{2, 4, 2}, Case{1, 3, 5},
                         Case{2, 2, 4}}) {
        const int np = c.P * c.N;
        const CMatrix x = random_snapshot(c.L, np, 100 + np + c.L);
        const CMatrix got = to_frequency_blocks(x, c.L, c.P, c.N);
        const CMatrix want = dense_reference(x, c.L, c.P, c.N);
        CAPTURE(c.L, c.P, c.N);
        REQUIRE(got.rows() == c.L * c.P);
        REQUIRE(got.cols() == c.N);
        REQUIRE((got - want).norm() < 1e-12 * (1.0 + want.norm()));
    }
}

TEST_CASE("block transform equals the dense stride-permuted DFT operator")
{
    // Operator form on the stacked snapshot (time-major, antenna-minor):
    // (S \otimes I_L)(F \otimes I_L)^H with F the unitary inverse-DFT matrix
    // (positive exponent) and S the NP x NP stride permutation that sends bin
    // k*N+j to position j*P+k, i.e. groups bins by residue mod N.
    const int L = 2, P = 2, N = 4, np = 8;

    CMatrix f(np, np);
    for (int r = 0; r < np; ++r) {
        for (int c = 0; c < np; ++c) {
            f(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(np)),
                                 2.0 * kPi * r * c / np);
        }
    }
    CMatrix s = CMatrix::Zero(np, np);
    for (int k = 0; k < P; ++k) {
        for (int j = 0; j < N; ++j) {
            s(j * P + k, k * N + j) = 1.0;
        }
    }
    const CMatrix op = kron(s, CMatrix::Identity(L, L)) *
                       kron(f, CMatrix::Identity(L, L)).adjoint();

    const CMatrix x = random_snapshot(L, np, 321);
    CVector stacked(L * np);
    for (int t = 0; t < np; ++t) {
        for (int a = 0; a < L; ++a) {
            stacked[t * L + a] = x(a, t);
        }
    }
    const CVector z = op * stacked;

    // z is grouped as N blocks of LP: block j spans rows j*L*P..(j+1)*L*P.
    const CMatrix blocks = to_frequency_blocks(x, L, P, N);
    for (int j = 0; j < N; ++j) {
        for (int k = 0; k < P; ++k) {
            for (int l = 0; l < L; ++l) {
                const cdouble want = z[j * L * P + k * L + l];
                const cdouble got = blocks(k * L + l, j);
                CAPTURE(j, k, l);
                REQUIRE(std::abs(got - want) < 1e-12);
            }
        }
    }
}

TEST_CASE("the transform is unitary (Parseval)")
{
    const CMatrix x = random_snapshot(3, 24, 9);
    const CMatrix blocks = to_frequency_blocks(x, 3, 4, 6);
    CHECK(blocks.squaredNorm() ==
          Catch::Approx(x.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("a constant signal concentrates in the dc bin")
{
    const int L = 2, P = 2, N = 4;
    CMatrix x = CMatrix::Zero(L, N * P);
    x.row(0).setConstant(cdouble(1.5, 0.0));
    x.row(1).setConstant(cdouble(0.0, -2.0));
    const CMatrix blocks = to_frequency_blocks(x, L, P, N);

    // dc = bin 0 = block 0, sub-slot 0; value is sqrt(NP) times the constant.
    const double root = std::sqrt(8.0);
    CHECK(std::abs(blocks(0, 0) - cdouble(1.5 * root, 0.0)) < 1e-12);
    CHECK(std::abs(blocks(1, 0) - cdouble(0.0, -2.0 * root)) < 1e-12);
    double rest = blocks.squaredNorm() - std::norm(blocks(0, 0)) -
                  std::norm(blocks(1, 0));
    CHECK(rest < 1e-20);
}

TEST_CASE("a pure tone lands in its own block and sub-slot")
{
    // Tone at bin b = k*N + j shows up only at (block j, sub-slot k).
    const int L = 1, P = 3, N = 4, np = 12;
    const int k = 2, j = 1, b = k * N + j;
    CMatrix x(1, np);
    for (int n = 0; n < np; ++n) {
        x(0, n) = std::polar(1.0, 2.0 * kPi * b * n / np);
    }
    const CMatrix blocks = to_frequency_blocks(x, L, P, N);
    for (int jj = 0; jj < N; ++jj) {
        for (int kk = 0; kk < P; ++kk) {
            const double mag = std::abs(blocks(kk, jj));
            if (jj == j && kk == k) {
                CHECK(mag == Catch::Approx(std::sqrt(12.0)).epsilon(1e-12));
            } else {
                CHECK(mag < 1e-12);
            }
        }
    }
}

TEST_CASE("observation transform stacks per-snapshot columns")
{
    SignalDims dims;
    dims.n_antennas = 2;
    dims.cycle_period = 2;
    dims.n_blocks = 3;
    dims.n_snapshots = 4;

    const CMatrix x = random_snapshot(2, 2 * 3 * 4, 77);
    const FrequencyBlockSet fbs = transform_observation(x, dims);
    REQUIRE(static_cast<int>(fbs.blocks.size()) == 3);
    for (const auto& blk : fbs.blocks) {
        REQUIRE(blk.rows() == 4);  // LP
        REQUIRE(blk.cols() == 4);  // M
    }

    const auto segs = segment(x, dims);
    for (int m = 0; m < 4; ++m) {
        const CMatrix one = to_frequency_blocks(segs[m], 2, 2, 3);
        for (int j = 0; j < 3; ++j) {
            CHECK((fbs.blocks[j].col(m) - one.col(j)).norm() < 1e-14);
        }
    }
}
