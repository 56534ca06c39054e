#pragma once

#include <vector>

#include "cyclodetect/errors.hpp"
#include "cyclodetect/types.hpp"

namespace cyclodetect {

// Dense complex Hermitian matrix. Construction symmetrizes the input by
// averaging with its conjugate transpose, so sample covariances that pick up
// machine-epsilon asymmetry come out exactly Hermitian.
class HermitianMatrix {
public:
    HermitianMatrix() = default;
    explicit HermitianMatrix(CMatrix m);

    static HermitianMatrix identity(int dim);

    int dim() const { return static_cast<int>(mat_.rows()); }
    const CMatrix& mat() const { return mat_; }
    cdouble operator()(int i, int j) const { return mat_(i, j); }

private:
    CMatrix mat_;
};

// Ordered list of equally sized Hermitian blocks; represents the matrix
// diag(blocks[0], blocks[1], ...).
struct BlockDiagonalMatrix {
    int block_dim = 0;
    std::vector<HermitianMatrix> blocks;

    void validate() const; // all blocks square with dimension block_dim
};

// R such that R * H * R = I. Hermitian eigendecomposition, eigenvalues below
// the conditioning floor dim * 1e-12 * lambda_max are rejected as
// NotPositiveDefinite rather than regularized.
HermitianMatrix inv_sqrt(const HermitianMatrix& h);

// Sum of log-eigenvalues; same positive-definiteness floor as inv_sqrt.
double logdet(const HermitianMatrix& h);

// Squared Frobenius norm (sum of squared moduli of all entries).
double frob_sq(const HermitianMatrix& h);

// Eigenvalues in ascending order, after the positive-definiteness check.
// Shared backend of inv_sqrt / logdet, exposed for reuse in the detectors.
Eigen::VectorXd pd_eigenvalues(const CMatrix& h, const char* context);

} // namespace cyclodetect
